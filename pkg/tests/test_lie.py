from __future__ import annotations

from itertools import product

import pytest

from quiverlab.lie import LieError, SimpleLie
from quiverlab.quiver import finite_quiver


def _jacobi(g: SimpleLie, a, b, c):
    A, B, C = ({a: 1}, {b: 1}, {c: 1})
    total = {}
    for x, y, z in ((A, B, C), (B, C, A), (C, A, B)):
        for k, v in g.bracket(x, g.bracket(y, z)).items():
            total[k] = total.get(k, 0) + v
    return {k: v for k, v in total.items() if v}


def test_sl2_triple():
    g = SimpleLie(finite_quiver("A", 1))
    e, f, h = ("e", (1,)), ("e", (-1,)), ("h", 0)
    assert g.bracket({e: 1}, {f: 1}) == {h: 1}
    assert g.bracket({h: 1}, {e: 1}) == {e: 2}
    assert g.bracket({h: 1}, {f: 1}) == {f: -2}


def test_a2_simple_bracket_is_plus_or_minus_sum():
    g = SimpleLie(finite_quiver("A", 2))
    out = g.bracket({("e", (1, 0)): 1}, {("e", (0, 1)): 1})
    assert list(out) == [("e", (1, 1))] and abs(out[("e", (1, 1))]) == 1


@pytest.mark.parametrize("kind,n,dim", [("A", 1, 3), ("A", 2, 8), ("A", 3, 15), ("D", 4, 28), ("E", 6, 78)])
def test_dimensions(kind, n, dim):
    assert SimpleLie(finite_quiver(kind, n)).dimension == dim


@pytest.mark.parametrize("kind,n", [("A", 2), ("A", 3), ("D", 4)])
def test_jacobi_and_invariance_exhaustive(kind, n):
    g = SimpleLie(finite_quiver(kind, n))
    for a, b, c in product(g.basis, repeat=3):
        assert not _jacobi(g, a, b, c), (a, b, c)
        # ([a, b], c) = (a, [b, c])
        assert g.form(g.bracket({a: 1}, {b: 1}), {c: 1}) == g.form({a: 1}, g.bracket({b: 1}, {c: 1}))


def test_antisymmetry_e6():
    g = SimpleLie(finite_quiver("E", 6))
    for a, b in product(g.basis, repeat=2):
        ab, ba = g.bracket({a: 1}, {b: 1}), g.bracket({b: 1}, {a: 1})
        assert ab == {k: -v for k, v in ba.items()}


def test_rejects_affine_input():
    from quiverlab.quiver import builtin_quiver
    with pytest.raises(LieError):
        SimpleLie(builtin_quiver("A2~"))
