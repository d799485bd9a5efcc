from __future__ import annotations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from quiverlab.loop import EllipticLie, LoopElt, LoopError, bracket_ell, e_sym, h_sym, reflect_weight
from quiverlab.quiver import builtin_quiver, coroot
from quiverlab.weyl import BraidWord

A1 = EllipticLie(builtin_quiver("A1~"))
A2 = EllipticLie(builtin_quiver("A2~"))
E, F, H = e_sym((1,)), e_sym((-1,)), h_sym(0)


def b(sym):
    return LoopElt.basis(sym)


def test_first_central_case():
    out = bracket_ell(A1, b(e_sym((1,), 1)), b(e_sym((-1,), -1)))
    assert out == LoopElt({H: 1, ("c", 0): 1})


def test_central_elements_commute():
    for c in (("c", 1), ("cc", 2, 1)):
        for sym in A2.basis_window(range(-1, 2), range(2)):
            assert bracket_ell(A2, b(c), b(sym)).is_zero()


def test_cartan_modes_pair_into_central_terms():
    # [h s^k t^l, h s^{-k} t^n] only has the c term; at k = 0 it vanishes
    assert bracket_ell(A1, b(h_sym(0, 0, 1)), b(h_sym(0, 0, 1))).is_zero()
    out = bracket_ell(A1, b(h_sym(0, 2, 0)), b(h_sym(0, -2, 1)))
    assert out == LoopElt({("c", 1): 4})


def test_affine_coroot():
    # [x_0^+, x_0^-] = −h_φ + c_0
    assert A1.h(0) == LoopElt({H: -1, ("c", 0): 1})
    assert A2.h(0) == LoopElt({h_sym(0): -1, h_sym(1): -1, ("c", 0): 1})


symbols = st.builds(
    lambda kind, r, i, k, m: e_sym(r, k, m) if kind == "e" else h_sym(i, k, m),
    st.sampled_from(["e", "h"]),
    st.sampled_from(A2.finite.roots),
    st.integers(0, 1), st.integers(-2, 2), st.integers(0, 2))


@settings(max_examples=150, deadline=None)
@given(symbols, symbols, symbols)
def test_antisymmetry_and_jacobi(x, y, z):
    X, Y, Z = b(x), b(y), b(z)
    assert bracket_ell(A2, X, Y) == -bracket_ell(A2, Y, X)
    jac = (bracket_ell(A2, X, bracket_ell(A2, Y, Z)) + bracket_ell(A2, Y, bracket_ell(A2, Z, X))
           + bracket_ell(A2, Z, bracket_ell(A2, X, Y)))
    assert jac.is_zero()


def test_braid_operator_on_sl2():
    assert A1.braid_T(1, b(E)) == -b(F)
    assert A1.braid_T(1, b(F)) == -b(E)
    assert A1.braid_T(1, b(H)) == -b(H)


@settings(max_examples=60, deadline=None)
@given(symbols, st.integers(0, 2))
def test_braid_operator_moves_weights_and_inverts(sym, i):
    v = b(sym)
    out = A2.braid_T(i, v)
    expected = reflect_weight(A2.quiver, i, A2.weight(sym))
    assert all(A2.weight(s) == expected for s in out.terms if s[0] != "c" and s[0] != "cc")
    assert A2.braid_T(i, out, inverse=True) == v


@settings(max_examples=40, deadline=None)
@given(symbols, symbols, st.integers(0, 2))
def test_braid_operator_is_bracket_preserving(x, y, i):
    T = lambda v: A2.braid_T(i, v)
    assert T(bracket_ell(A2, b(x), b(y))) == bracket_ell(A2, T(b(x)), T(b(y)))


def test_braid_relations_on_truncated_window():
    window = A2.basis_window(range(-2, 3), range(2))
    for v in map(b, window):
        assert A2.apply_word(BraidWord.parse([1, 2, 1]), v) == A2.apply_word(BraidWord.parse([2, 1, 2]), v)
        assert A2.apply_word(BraidWord.parse([2, 3, 2]), v) == A2.apply_word(BraidWord.parse([3, 2, 3]), v)


def test_kronecker_translation():
    lam = coroot(A1.quiver, 1)
    for n in range(-3, 4):
        assert A1.translation_L(lam, b(e_sym((1,), n))) == b(e_sym((1,), n - 2))
        assert A1.translation_L(lam, b(e_sym((-1,), n))) == b(e_sym((-1,), n + 2))
        # Cartan modes are fixed up to a central correction
        out = A1.translation_L(lam, b(h_sym(0, n, 1)))
        assert {k: v for k, v in out.terms.items() if k[0] == "h"} == {h_sym(0, n, 1): 1}
        assert all(k[0] in ("h", "c", "cc") for k in out.terms)
    assert A1.translation_L((0, 0), b(E)) == b(E)


def test_translation_shift_and_sign_pattern_on_a2():
    # the s-shift always matches the closed formula; the sign matches it
    # up to a factor ±1 that depends only on the root
    lam = coroot(A2.quiver, 1)
    for root in A2.finite.roots:
        signs = set()
        for n in range(-3, 4):
            got = A2.translation_L(lam, b(e_sym(root, n)))
            want = A2.translation_formula(lam, b(e_sym(root, n)))
            (s_got, c_got), = got.terms.items()
            (s_want, c_want), = want.terms.items()
            assert s_got == s_want
            signs.add(c_got / c_want)
        assert len(signs) == 1
    # on α_1 itself the formula holds exactly
    assert A2.translation_L(lam, b(e_sym((1, 0), 0))) == b(e_sym((1, 0), -2))


def test_translations_commute_and_compose():
    l1, l2 = coroot(A2.quiver, 1), coroot(A2.quiver, 2)
    l12 = tuple(a + c for a, c in zip(l1, l2))
    for sym in A2.basis_window(range(-1, 2), range(1), central=False):
        v = b(sym)
        a = A2.translation_L(l1, A2.translation_L(l2, v))
        assert a == A2.translation_L(l2, A2.translation_L(l1, v))
        assert a == A2.translation_L(l12, v)


def test_symbol_text_round_trip():
    for sym in A2.basis_window(range(-1, 2), range(2)):
        assert A2.parse_symbol(A2.symbol_text(sym)) == sym
    with pytest.raises(LoopError):
        A2.parse_symbol("e[5,5]s^0 t^0")
