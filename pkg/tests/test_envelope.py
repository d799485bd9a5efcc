from __future__ import annotations

import random
from fractions import Fraction

import pytest

from quiverlab.envelope import (EnvAlgebra, EnvConfigError, EnvElt, EnvError, SlopeIdealSpec,
                                completion_order, identity_env, limit_multiply, pbw_count,
                                slope_order, theta_family, theta_Y, theta_Z, verify_identity_A1)
from quiverlab.loop import EllipticLie, e_sym, h_sym
from quiverlab.quiver import builtin_quiver
from quiverlab.series import TruncationWindow, coha_character

A1 = EllipticLie(builtin_quiver("A1~"))
A2 = EllipticLie(builtin_quiver("A2~"))
E1, F = e_sym((1,), -1), e_sym((-1,), 0)


@pytest.fixture(scope="module")
def slope_env():
    return EnvAlgebra(A1, slope_order(A1, (1, -1)))


@pytest.fixture(scope="module")
def comp_env():
    return EnvAlgebra(A1, completion_order(A1))


def test_ordered_monomial_is_normal(slope_env):
    assert slope_env.is_normal((F, E1))
    assert slope_env.normalize_word([F, E1]) == EnvElt({(F, E1): 1})


def test_straightening_of_e_past_f(slope_env):
    # (e s^-1) f = f (e s^-1) + [e s^-1, f] and [e s^-1, f] = h s^-1
    assert slope_env.normalize_word([E1, F]) == EnvElt({(F, E1): 1, (h_sym(0, -1),): 1})


def test_pbw_count_matches_character_at_one_weight():
    ch = coha_character(A1.quiver, TruncationWindow.total(2, 3, 3))
    for d, t in [((1, 2), 0), ((1, 1), 1), ((2, 1), 0)]:
        assert pbw_count(A1, d, t) == ch[(d, -t)]
    assert pbw_count(A1, (1, 0), 0) == ch[((1, 0), 0)] == 1
    assert pbw_count(A1, (0, 0), 0) == 1


def test_slope_projection(slope_env):
    env = identity_env(A1)
    spec = SlopeIdealSpec((-1, 1), None, Fraction(0))
    x = env.normalize_word([F, E1]) + env.symbol(h_sym(0, -1), 3)
    once = env.slope_project(spec, x)
    assert env.slope_project(spec, once) == once
    # f has slope 1 under θ = (−1, 1), outside (−∞, 0]
    assert env.slope_project(spec, env.symbol(F)).is_zero()
    with pytest.raises(EnvConfigError):
        slope_env.slope_project(spec, x)


def test_empty_slope_interval_rejected():
    with pytest.raises(EnvConfigError):
        SlopeIdealSpec((1, 0), Fraction(1), Fraction(0))


def _random_negative(env, rng, n=20):
    neg = [s for s in env.lie.basis_window(range(-2, 1), range(1), central=False)
           if env.lie.is_negative_symbol(s)]
    return [env.normalize_word([rng.choice(neg) for _ in range(rng.randint(1, 2))], rng.randint(1, 3))
            for _ in range(n)]


def test_truncated_braid_monoid_property(slope_env):
    for x in _random_negative(slope_env, random.Random(0)):
        for i, j in [(0, 1), (1, 0)]:
            whole = slope_env.project_negative(slope_env.braid_T(i, slope_env.braid_T(j, x)))
            assert slope_env.truncated_word([i, j], x) == whole


def test_truncated_braid_commuting_vertices():
    L = EllipticLie(builtin_quiver("A3~"))
    env = EnvAlgebra(L, slope_order(L, (1, 0, 0, -1)))
    for x in _random_negative(env, random.Random(1), n=8):
        assert env.truncated_word([1, 3], x) == env.truncated_word([3, 1], x)


def test_truncated_braid_needs_slope_order(comp_env):
    with pytest.raises(EnvConfigError):
        comp_env.truncated_braid(0, comp_env.symbol(F))


def test_theta_images(comp_env):
    assert theta_Y(comp_env, 1, 1) == comp_env.symbol(h_sym(0, -1))
    assert theta_Y(comp_env, 1, 2) == comp_env.symbol(h_sym(0, -2), -1)
    z = theta_Z(comp_env, 1, 1, 0)
    assert z == comp_env.symbol(E1, -1)
    # deeper lifts only add terms with Cartan factors
    extra = theta_Z(comp_env, 1, 1, 2) - z
    assert all(any(s[0] == "h" for s in w) for w in extra.terms)
    with pytest.raises(EnvError):
        theta_Y(comp_env, 0, 1)


def test_identities_up_to_order_five():
    env = identity_env(A1)
    for which in ("h", "e"):
        ok, wit = verify_identity_A1(A1, which, 5, env)
        assert ok, wit
    with pytest.raises(EnvError):
        verify_identity_A1(A2, "h", 1)


def test_limit_multiplication(comp_env):
    one = theta_family(comp_env, "1", 1, 0)
    y = theta_family(comp_env, "Y", 1, 1)
    z, _ = limit_multiply(comp_env, one, y, 1)
    assert z == theta_Y(comp_env, 1, 1)
    yy, depth = limit_multiply(comp_env, y, y, 1)
    assert yy == EnvElt({(h_sym(0, -1), h_sym(0, -1)): 1})
    assert depth == 0


def test_limit_commutator_shift(comp_env):
    level = 1
    y = theta_family(comp_env, "Y", 1, 1)
    z = theta_family(comp_env, "Z", 1, 0)
    yz, _ = limit_multiply(comp_env, y, z, level)
    zy, _ = limit_multiply(comp_env, z, y, level)
    target, _ = limit_multiply(comp_env, theta_family(comp_env, "Z", 1, 1), theta_family(comp_env, "1", 1, 0), level)
    assert yz - zy == target.scale(-2)
