from __future__ import annotations

import random

import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import cubic_relation_value, elt_to_sympy, rational_shuffle, shuffle_symbols
from quiverlab.poly import Poly
from quiverlab.quiver import builtin_quiver, finite_quiver
from quiverlab.shuffle import (ShuffleAlgebra, ShuffleError, ade_twist_form, check_relation, coha_product,
                               deserialize, euler_twist_form, is_twist, random_element, serialize,
                               twist_iso, twist_sign)


def test_single_vertex_square_of_unit_generator():
    A = ShuffleAlgebra(finite_quiver("A", 1))
    out = A.shuffle_mul(A.generator(0, 0), A.generator(0, 0))
    assert out.weight == (2,)
    assert out.poly == Poly.const(A.nvars((2,)), -2)


def test_kronecker_generator_product():
    Q = builtin_quiver("A1~")
    A = ShuffleAlgebra(Q)
    out = A.shuffle_mul(A.generator(1, 0), A.generator(0, 0))
    eps, hbar, z = shuffle_symbols(Q, (1, 1))
    t = z[1][0] - z[0][0]
    assert sympy.expand(elt_to_sympy(A, out) - (t + eps["x"]) * (t + eps["y"])) == 0


def test_unit_is_two_sided():
    A = ShuffleAlgebra(builtin_quiver("A2~"))
    P = random_element(A, (1, 2, 0), random.Random(1))
    assert A.shuffle_mul(A.unit(), P) == P
    assert A.shuffle_mul(P, A.unit()) == P


def test_generator_degree():
    A = ShuffleAlgebra(builtin_quiver("A1~"))
    assert A.generator(0, 0).poly == Poly.const(A.nvars((1, 0)), 1)
    assert A.vertical_degree(A.generator(0, 3)) == -6


@pytest.mark.parametrize("tag,weights", [
    ("A1~", [(1, 0), (0, 1), (1, 1)]),
    ("A2~", [(1, 0, 0), (0, 1, 1), (1, 1, 0)]),
    ("A1", [(1,), (2,)]),
])
def test_product_matches_rational_oracle(tag, weights):
    Q = builtin_quiver(tag)
    A = ShuffleAlgebra(Q)
    rng = random.Random(tag)
    for _ in range(4):
        P = random_element(A, rng.choice(weights), rng)
        R = random_element(A, rng.choice(weights), rng)
        want = rational_shuffle(Q, elt_to_sympy(A, P), P.weight, elt_to_sympy(A, R), R.weight)
        assert sympy.expand(want - elt_to_sympy(A, A.shuffle_mul(P, R))) == 0


def test_associativity_on_random_triples():
    A = ShuffleAlgebra(builtin_quiver("A2~"))
    rng = random.Random(5)
    for _ in range(3):
        P, R, S = (random_element(A, rng.choice([(1, 0, 0), (0, 1, 0), (0, 0, 1)]), rng) for _ in range(3))
        assert A.shuffle_mul(A.shuffle_mul(P, R), S) == A.shuffle_mul(P, A.shuffle_mul(R, S))


def test_quadratic_commutator_of_first_modes():
    # x_{i,1} x_{i,0} − x_{i,0} x_{i,1}: compare with the rational oracle
    Q = finite_quiver("A", 1)
    A = ShuffleAlgebra(Q)
    g0, g1 = A.generator(0, 0), A.generator(0, 1)
    got = A.shuffle_mul(g1, g0) - A.shuffle_mul(g0, g1)
    z, = shuffle_symbols(Q, (1,))[2]
    a = rational_shuffle(Q, z[0], (1,), sympy.Integer(1), (1,))
    b = rational_shuffle(Q, sympy.Integer(1), (1,), z[0], (1,))
    assert sympy.expand(elt_to_sympy(A, got) - (a - b)) == 0


def test_relation_examples():
    A1 = ShuffleAlgebra(finite_quiver("A", 1))
    assert check_relation(A1, "quadratic-same", (0,), (0, 0))[0]
    assert check_relation(A1, "quadratic-same", (0,), (1, 0))[0]
    K = ShuffleAlgebra(builtin_quiver("A1~"))
    assert check_relation(K, "serre", (1, 0), (0, 0, 0, 0))[0]
    assert check_relation(K, "quadratic-mixed", (0, 1), (1, 2))[0]


def test_cubic_relation_defect_agrees_with_independent_route():
    # The cleared cubic relation does not vanish; a term-by-term evaluation
    # through iterated rational shuffles gives the same nonzero defect.
    Q = builtin_quiver("A2~")
    A = ShuffleAlgebra(Q)
    edge = A.arrows_between(1, 2)[0]
    ok, diff = check_relation(A, "cubic", (1, 2), (0, 0, 0), edge)
    independent = cubic_relation_value(Q, 1, 2, edge, (0, 0, 0))
    assert not ok
    assert independent != 0
    assert sympy.expand(independent - elt_to_sympy(A, diff)) == 0


def test_mutated_kernel_breaks_quadratic_relation():
    A = ShuffleAlgebra(finite_quiver("A", 1), zeta_hbar_sign=-1)
    assert not check_relation(A, "quadratic-same", (0,), (1, 0))[0]


def test_relation_argument_errors():
    A = ShuffleAlgebra(builtin_quiver("A2~"))
    with pytest.raises(ShuffleError):
        check_relation(A, "serre", (1, 1), (0, 0, 0))
    with pytest.raises(ShuffleError):
        check_relation(A, "bogus", (1,), (0,))


def test_tautological_action():
    A = ShuffleAlgebra(builtin_quiver("A1~"))
    assert A.taut_action(1, 1, A.generator(1, 0)) == A.generator(1, 1)
    assert A.taut_action(0, 2, A.generator(1, 3)).poly.is_zero()


@settings(max_examples=10, deadline=None)
@given(st.integers(0, 10_000))
def test_power_sum_acts_as_derivation(seed):
    A = ShuffleAlgebra(finite_quiver("A", 1))
    rng = random.Random(seed)
    P = random_element(A, (rng.randint(1, 2),), rng)
    R = random_element(A, (rng.randint(1, 2),), rng)
    lhs = A.taut_action(0, 1, A.shuffle_mul(P, R))
    rhs = A.shuffle_mul(A.taut_action(0, 1, P), R) + A.shuffle_mul(P, A.taut_action(0, 1, R))
    assert lhs == rhs


def test_twist_forms():
    Q = builtin_quiver("A1~")
    theta, omega = euler_twist_form(Q), ade_twist_form(Q)
    assert is_twist(Q, theta) and is_twist(Q, omega)
    for i in Q.vertices:
        assert twist_sign(omega, Q.simple_root(i)) == 1


def test_twist_isomorphism_on_random_pairs():
    Q = builtin_quiver("A1~")
    A = ShuffleAlgebra(Q)
    theta, omega = euler_twist_form(Q), ade_twist_form(Q)
    rng = random.Random(11)
    differ = 0
    for _ in range(20):
        P = random_element(A, rng.choice([(1, 0), (0, 1), (1, 1)]), rng)
        R = random_element(A, rng.choice([(1, 0), (0, 1), (1, 1)]), rng)
        lhs = twist_iso(theta, omega, coha_product(A, theta, P, R))
        rhs = coha_product(A, omega, twist_iso(theta, omega, P), twist_iso(theta, omega, R))
        assert lhs == rhs
        differ += coha_product(A, theta, P, R) != coha_product(A, omega, P, R)
    assert differ > 0  # the two twisted products are genuinely different


def test_serialization_round_trip():
    A = ShuffleAlgebra(builtin_quiver("A1~"))
    P = random_element(A, (1, 1), random.Random(3))
    assert deserialize(A, serialize(A, P)) == P
