from __future__ import annotations

import random

import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from quiverlab.prep_rep import (PiRep, RepError, are_isomorphic, dump_rep, is_nilpotent, make_rep,
                                nilpotent_by_paths, parse_rep, random_in_torsion, random_nilpotent,
                                reflect, reflect_dim, relation_block, torsion_membership)
from quiverlab.quiver import builtin_quiver

KR = builtin_quiver("A1~")


def simple(Q, i):
    return make_rep(Q, Q.simple_root(i), {})


def random_rep(Q, dim, rng):
    """Random Ω maps with a random solution for the Ω* maps; usually not nilpotent."""
    maps, unknowns, star = {}, [], {}
    for a in Q.arrows:
        maps[a.label] = sympy.Matrix(dim[a.target], dim[a.source],
                                     lambda r, c: rng.randint(-2, 2))
        s = Q.star(a)
        m = sympy.zeros(dim[s.target], dim[s.source])
        for r in range(m.rows):
            for c in range(m.cols):
                m[r, c] = sympy.Symbol(f"u{len(unknowns)}")
                unknowns.append(m[r, c])
        star[s.label] = m
    eqs = [e for i in Q.vertices for e in relation_block(Q, dim, {**maps, **star}, i) if e != 0]
    values = {}
    if unknowns and eqs:
        A, _ = sympy.linear_eq_to_matrix(eqs, unknowns)
        vec = sympy.zeros(len(unknowns), 1)
        for v in A.nullspace():
            vec += rng.randint(-2, 2) * v
        values = dict(zip(unknowns, vec))
    out = {label: sympy.ImmutableMatrix(m) for label, m in maps.items()}
    out.update({label: sympy.ImmutableMatrix(m.subs(values)) for label, m in star.items()})
    return PiRep(Q, tuple(dim), out)


def test_simple_modules_are_nilpotent():
    for i in KR.vertices:
        assert is_nilpotent(simple(KR, i))


def test_kronecker_examples():
    M = make_rep(KR, (1, 1), {"x": [[1]]})
    assert is_nilpotent(M) and nilpotent_by_paths(M)
    with pytest.raises(RepError):
        make_rep(KR, (1, 1), {"x": [[1]], "x*": [[1]]})
    N = make_rep(KR, (1, 1), {"x": [[1]], "y": [[1]], "x*": [[1]], "y*": [[-1]]})
    assert not is_nilpotent(N) and not nilpotent_by_paths(N)


def test_shape_is_checked():
    with pytest.raises(RepError):
        make_rep(KR, (1, 1), {"x": [[1, 0]]})


def test_torsion_flags():
    for i in KR.vertices:
        flags = torsion_membership(simple(KR, i), i)
        assert not flags.in_T
        other = simple(KR, 1 - i)
        flags = torsion_membership(other, i)
        assert flags.in_T and flags.in_F


@pytest.mark.parametrize("seed", range(10))
def test_reflection_dimension_and_inverse(seed):
    rng = random.Random(seed)
    i = seed % 2
    M = random_in_torsion(KR, i, (3, 3), rng)
    S = reflect(M, i, "S")
    assert S.dim == reflect_dim(KR, i, M.dim)
    assert is_nilpotent(S)
    assert are_isomorphic(reflect(S, i, "S'"), M, seed=seed) is True


def test_reflection_is_identity_without_support():
    # in A3, σ_0 has V_2 = 0 and vertex 2 has no nonzero neighbour
    A3 = builtin_quiver("A3")
    M = simple(A3, 0)
    assert reflect(M, 2, "S") == M
    assert reflect(M, 2, "S'") == M


def test_isomorphism_separates_and_gives_up():
    A = make_rep(KR, (1, 1), {"x": [[1]]})
    B = make_rep(KR, (1, 1), {"y": [[1]]})
    C = make_rep(KR, (1, 1), {"x": [[2]]})
    assert are_isomorphic(A, C) is True
    assert are_isomorphic(A, B) is False
    assert are_isomorphic(A, make_rep(KR, (1, 1), {"x*": [[1]]})) is False
    big = make_rep(KR, (4, 3), {})
    assert are_isomorphic(big, big) == "undecided"


@settings(max_examples=40, deadline=None)
@given(st.tuples(st.integers(0, 2), st.integers(0, 2)), st.integers(0, 10_000), st.booleans())
def test_nilpotency_agrees_with_path_oracle(dim, seed, structured):
    rng = random.Random(seed)
    M = random_nilpotent(KR, dim, rng) if structured else random_rep(KR, dim, rng)
    assert is_nilpotent(M) == nilpotent_by_paths(M)
    if structured:
        assert is_nilpotent(M)


def test_path_oracle_sees_both_outcomes():
    rng = random.Random(3)
    seen = {nilpotent_by_paths(random_rep(KR, (1, 1), rng)) for _ in range(30)}
    assert seen == {True, False}


def test_text_round_trip():
    M = random_nilpotent(KR, (2, 3), random.Random(5))
    assert parse_rep(KR, dump_rep(M)) == M
