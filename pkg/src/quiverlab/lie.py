"""Finite simply-laced Lie algebras built from an ADE quiver.

Structure constants come from the sign cocycle ε(α, β) = (−1)^⟨α,β⟩ of the
Euler form, which gives [E_α, E_β] = ε(α, β) E_{α+β}.  We work in the rescaled
basis X_α = σ(α) E_α (σ = +1 on positive roots, −1 on negative ones), for which
[X_α, X_{−α}] = h_α and the invariant form has (X_α, X_{−α}) = 1.

Basis keys are ``("e", root)`` with ``root`` a tuple in simple-root coordinates
and ``("h", i)`` with ``i`` a vertex of the finite quiver.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Dict, List, Sequence, Tuple

from .quiver import DimVector, Quiver, QuiverError, positive_real_roots

Key = Tuple
Vector = Dict[Key, Fraction]


class LieError(QuiverError):
    pass


def _add(u: Sequence[int], v: Sequence[int]) -> DimVector:
    return tuple(a + b for a, b in zip(u, v))


def _neg(u: Sequence[int]) -> DimVector:
    return tuple(-a for a in u)


def is_positive(root: Sequence[int]) -> bool:
    return all(x >= 0 for x in root)


class SimpleLie:
    """The simple Lie algebra of a finite ADE quiver in a Chevalley basis."""

    def __init__(self, Qf: Quiver):
        self.quiver = Qf
        self.rank = Qf.num_vertices
        C = Qf.cartan_matrix()
        for k in range(1, self.rank + 1):
            if _leading_minor(C, k) <= 0:
                raise LieError("quiver is not of finite ADE type")
        self.cartan = C
        self.positive_roots: List[DimVector] = positive_real_roots(Qf, 10 * self.rank * self.rank + 10)
        self.roots: List[DimVector] = self.positive_roots + [_neg(r) for r in self.positive_roots]
        self.root_set = frozenset(self.roots)
        self.highest_root = max(self.positive_roots, key=sum)
        self.basis: List[Key] = [("e", r) for r in self.roots] + [("h", i) for i in range(self.rank)]
        self._bracket_cache: Dict[Tuple[Key, Key], Vector] = {}

    @property
    def dimension(self) -> int:
        return len(self.basis)

    def pairing(self, u: Sequence[int], v: Sequence[int]) -> int:
        return self.quiver.symmetric_form(u, v)

    def epsilon(self, a: Sequence[int], b: Sequence[int]) -> int:
        return -1 if self.quiver.euler_form(a, b) % 2 else 1

    def sigma(self, root: Sequence[int]) -> int:
        return 1 if is_positive(root) else -1

    def coroot(self, root: Sequence[int]) -> Vector:
        """h_α = Σ α_i h_i (simply laced, so coroots are roots)."""
        return {("h", i): Fraction(c) for i, c in enumerate(root) if c}

    def weight(self, key: Key) -> DimVector:
        return key[1] if key[0] == "e" else (0,) * self.rank

    def bracket_basis(self, a: Key, b: Key) -> Vector:
        cached = self._bracket_cache.get((a, b))
        if cached is not None:
            return cached
        out: Vector = {}
        if a[0] == "h" and b[0] == "h":
            pass
        elif a[0] == "h":
            c = self.cartan[a[1]]
            val = sum(c[j] * x for j, x in enumerate(b[1]))
            if val:
                out[b] = Fraction(val)
        elif b[0] == "h":
            out = {k: -v for k, v in self.bracket_basis(b, a).items()}
        else:
            alpha, beta = a[1], b[1]
            total = _add(alpha, beta)
            if not any(total):
                out = self.coroot(alpha)
            elif total in self.root_set:
                sign = self.sigma(alpha) * self.sigma(beta) * self.sigma(total) * self.epsilon(alpha, beta)
                out[("e", total)] = Fraction(sign)
        self._bracket_cache[(a, b)] = out
        return out

    def bracket(self, u: Vector, v: Vector) -> Vector:
        out: Vector = {}
        for a, x in u.items():
            for b, y in v.items():
                for k, c in self.bracket_basis(a, b).items():
                    out[k] = out.get(k, 0) + x * y * c
        return {k: c for k, c in out.items() if c}

    def form_basis(self, a: Key, b: Key) -> int:
        if a[0] == "h" and b[0] == "h":
            return self.cartan[a[1]][b[1]]
        if a[0] == "e" and b[0] == "e" and not any(_add(a[1], b[1])):
            return 1
        return 0

    def form(self, u: Vector, v: Vector) -> Fraction:
        return sum((x * y * self.form_basis(a, b) for a, x in u.items() for b, y in v.items()),
                   Fraction(0))

    def key_text(self, key: Key) -> str:
        if key[0] == "e":
            return "e[" + ",".join(map(str, key[1])) + "]"
        return f"h[{key[1] + 1}]"


def _leading_minor(C: Sequence[Sequence[int]], k: int) -> Fraction:
    """Determinant of the top-left k×k block by fraction-exact elimination."""
    M = [[Fraction(C[r][c]) for c in range(k)] for r in range(k)]
    det = Fraction(1)
    for col in range(k):
        pivot = next((r for r in range(col, k) if M[r][col]), None)
        if pivot is None:
            return Fraction(0)
        if pivot != col:
            M[col], M[pivot] = M[pivot], M[col]
            det = -det
        det *= M[col][col]
        for r in range(col + 1, k):
            f = M[r][col] / M[col][col]
            for c in range(col, k):
                M[r][c] -= f * M[col][c]
    return det


def build_simple_lie(Qf: Quiver) -> SimpleLie:
    return SimpleLie(Qf)
