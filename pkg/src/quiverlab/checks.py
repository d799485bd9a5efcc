"""Batch verifications shared by the command line and the acceptance suite.

Every check returns a list of ``CheckResult`` records, one per instance, so
callers can count failures and print witnesses.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from itertools import product
from typing import Iterable, List, Optional, Sequence, Tuple

from .envelope import (EnvAlgebra, completion_order, identity_env, limit_multiply, pbw_count,
                       theta_family, theta_Y, theta_Z, verify_identity_A1)
from .loop import EllipticLie, LoopElt, e_sym
from .prep_rep import (are_isomorphic, is_nilpotent, random_in_torsion, reflect, reflect_dim)
from .quiver import Quiver, coroot
from .series import TruncationWindow, coha_character, hn_product
from .shuffle import (ShuffleAlgebra, ade_twist_form, check_relation, coha_product,
                      euler_twist_form, random_element, relation_instances, to_text, twist_iso)


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    witness: Optional[str] = None

    def as_dict(self) -> dict:
        return {"name": self.name, "passed": self.passed, "witness": self.witness}


def failures(results: Iterable[CheckResult]) -> List[CheckResult]:
    return [r for r in results if not r.passed]


# ---------------------------------------------------------------- shuffle

def check_relations(Q: Quiver, max_mode: int = 2, zeta_hbar_sign: int = 1) -> List[CheckResult]:
    A = ShuffleAlgebra(Q, zeta_hbar_sign=zeta_hbar_sign)
    out = []
    for kind, idx, modes, edge in relation_instances(A, max_mode):
        ok, diff = check_relation(A, kind, idx, modes, edge)
        name = f"{kind} {list(idx)} modes={list(modes)}" + (f" edge={edge.label}" if edge else "")
        out.append(CheckResult(name, ok, None if ok else to_text(A, diff)))
    return out


def check_twists(Q: Quiver, count: int = 50, seed: int = 0,
                 weights: Sequence[Tuple[int, ...]] = ()) -> List[CheckResult]:
    """φ(P ⋆_Θ R) = φ(P) ⋆_ω φ(R) for the Euler twist Θ and the ADE twist ω."""
    A = ShuffleAlgebra(Q)
    theta, omega = euler_twist_form(Q), ade_twist_form(Q)
    n = Q.num_vertices
    pool = list(weights) or [Q.simple_root(i) for i in range(n)] + [(1,) * n]
    rng = random.Random(seed)
    out = []
    for k in range(count):
        P = random_element(A, rng.choice(pool), rng)
        R = random_element(A, rng.choice(pool), rng)
        lhs = twist_iso(theta, omega, coha_product(A, theta, P, R))
        rhs = coha_product(A, omega, twist_iso(theta, omega, P), twist_iso(theta, omega, R))
        ok = lhs == rhs
        out.append(CheckResult(f"pair {k} weights {list(P.weight)},{list(R.weight)}", ok,
                               None if ok else to_text(A, lhs - rhs)))
    return out


# ---------------------------------------------------------------- series and counting

def check_character_pbw(Q: Quiver, max_total: int, max_qdeg: int = 4) -> List[CheckResult]:
    L = EllipticLie(Q)
    window = TruncationWindow.total(Q.num_vertices, max_total, max_qdeg)
    ch = coha_character(Q, window)
    out = []
    for d in window.weights():
        for k in range(-max_qdeg, max_qdeg + 1):
            a, b = ch[(d, k)], pbw_count(L, d, -k)
            out.append(CheckResult(f"d={list(d)} k={k}", a == b,
                                   None if a == b else f"character {a} vs PBW count {b}"))
    return out


def check_hn(Q: Quiver, theta: Sequence[int], max_total: int, max_qdeg: int = 4,
             dim_a: int = 2) -> List[CheckResult]:
    window = TruncationWindow.total(Q.num_vertices, max_total, max_qdeg)
    lhs, rhs = coha_character(Q, window, dim_a), hn_product(Q, theta, window, dim_a)
    out = []
    for d in window.weights():
        for k in range(-max_qdeg, max_qdeg + 1):
            a, b = lhs[(d, k)], rhs[(d, k)]
            out.append(CheckResult(f"d={list(d)} k={k}", a == b,
                                   None if a == b else f"character {a} vs HN product {b}"))
    return out


# ---------------------------------------------------------------- loop algebra

def check_braid_relations(Q: Quiver, s_max: int = 2, t_max: int = 1) -> List[CheckResult]:
    """Braid relations of T_i as linear maps on a window of the loop algebra."""
    L = EllipticLie(Q)
    C = Q.cartan_matrix()
    window = L.basis_window(range(-s_max, s_max + 1), range(t_max + 1))
    out = []
    for i in Q.vertices:
        for j in range(i + 1, Q.num_vertices):
            if C[i][j] == 0:
                word_a, word_b = (i, j), (j, i)
            elif C[i][j] == -1:
                word_a, word_b = (i, j, i), (j, i, j)
            else:
                continue
            bad = None
            for sym in window:
                v = LoopElt.basis(sym)
                a, b = v, v
                for g in reversed(word_a):
                    a = L.braid_T(g, a)
                for g in reversed(word_b):
                    b = L.braid_T(g, b)
                if a != b:
                    bad = L.symbol_text(sym)
                    break
            out.append(CheckResult(f"T{i}T{j} pair ({len(word_a)} letters)", bad is None,
                                   None if bad is None else f"fails on {bad}"))
    return out


def check_translation(Q: Quiver, s_max: int = 3, t_max: int = 0) -> List[CheckResult]:
    """L_λ(x s^n) = (−1)^⟨λ,α⟩ x s^{n−⟨λ,α⟩} for λ = α̌_i on root vectors."""
    L = EllipticLie(Q)
    out = []
    for i in range(1, Q.num_vertices):
        lam = coroot(Q, i)
        for root in L.finite.roots:
            for n in range(-s_max, s_max + 1):
                for m in range(t_max + 1):
                    v = LoopElt.basis(e_sym(root, n, m))
                    got, want = L.translation_L(lam, v), L.translation_formula(lam, v)
                    ok = got == want
                    name = f"lambda=coroot {i} on {L.symbol_text(e_sym(root, n, m))}"
                    out.append(CheckResult(name, ok, None if ok else
                                           f"got {_loop_text(L, got)}, formula gives {_loop_text(L, want)}"))
    return out


def _loop_text(L: EllipticLie, v: LoopElt) -> str:
    if v.is_zero():
        return "0"
    return " + ".join(f"{c}*{L.symbol_text(s)}" for s, c in sorted(v.terms.items(), key=repr))


# ---------------------------------------------------------------- enveloping algebra

def check_identities(max_order: int = 5) -> List[CheckResult]:
    from .quiver import builtin_quiver
    L = EllipticLie(builtin_quiver("A1~"))
    env = identity_env(L)
    out = []
    for which in ("h", "e"):
        for order in range(1, max_order + 1):
            ok, wit = verify_identity_A1(L, which, order, env)
            out.append(CheckResult(f"{which}-series order {order}", ok,
                                   None if ok else f"coefficient {wit[0]}: {env.to_text(wit[1])}"))
    return out


def check_theta_bracket(Q: Quiver, max_index: int = 3, depth: int = 4) -> List[CheckResult]:
    """[Θ(Y(j,d)), Θ(Z(i,n))] = −a_ji Θ(Z(i,n+d)) on Z-lifts of fixed depth."""
    L = EllipticLie(Q)
    env = EnvAlgebra(L, completion_order(L))
    C = L.finite.cartan
    out = []
    for i in range(1, L.rank + 1):
        for j in range(1, L.rank + 1):
            for d in range(1, max_index + 1):
                for n in range(0, max_index + 1):
                    lhs = env.commutator(theta_Y(env, j, d), theta_Z(env, i, n, depth))
                    rhs = theta_Z(env, i, n + d, depth).scale(-C[j - 1][i - 1])
                    ok = lhs == rhs
                    out.append(CheckResult(f"[Y({j},{d}), Z({i},{n})]", ok,
                                           None if ok else env.to_text(lhs - rhs)))
    return out


def check_limit_stabilization(Q: Quiver, max_index: int = 2,
                              levels: Sequence[int] = (0, 1, 2)) -> List[CheckResult]:
    L = EllipticLie(Q)
    env = EnvAlgebra(L, completion_order(L))
    classes = [("Y", i, n) for i in range(1, L.rank + 1) for n in range(1, max_index + 1)]
    classes += [("Z", i, n) for i in range(1, L.rank + 1) for n in range(0, max_index + 1)]
    out = []
    for a, b in product(classes, repeat=2):
        for level in levels:
            name = f"{a[0]}({a[1]},{a[2]}) * {b[0]}({b[1]},{b[2]}) level {level}"
            try:
                _, depth = limit_multiply(env, theta_family(env, *a), theta_family(env, *b), level)
            except Exception as exc:  # EnvPrecisionError carries the bound
                out.append(CheckResult(name, False, str(exc)))
            else:
                out.append(CheckResult(name, True, f"stable from depth {depth}"))
    return out


# ---------------------------------------------------------------- modules

def check_reflections(Q: Quiver, count: int = 100, max_dim: Optional[Sequence[int]] = None,
                      seed: int = 0) -> List[CheckResult]:
    """dim S_i(M) = s_i(dim M), S_i(M) nilpotent and S'_i S_i(M) ≅ M for M ∈ T^{s_i}."""
    max_dim = tuple(max_dim) if max_dim else (3,) * Q.num_vertices
    rng = random.Random(seed)
    out = []
    for k in range(count):
        i = k % Q.num_vertices
        M = random_in_torsion(Q, i, max_dim, rng)
        S = reflect(M, i, "S")
        problems = []
        if S.dim != reflect_dim(Q, i, M.dim):
            problems.append(f"dim {list(S.dim)} != s_i(dim) {list(reflect_dim(Q, i, M.dim))}")
        if not is_nilpotent(S):
            problems.append("S_i(M) is not nilpotent")
        iso = are_isomorphic(M, reflect(S, i, "S'"), seed=seed + k)
        if iso is not True:
            problems.append(f"S'_i S_i(M) isomorphic to M: {iso}")
        out.append(CheckResult(f"module {k} dim {list(M.dim)} vertex {i}", not problems,
                               "; ".join(problems) or None))
    return out
