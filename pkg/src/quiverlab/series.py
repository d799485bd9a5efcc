"""Truncated series in z^d q^k, plethystic exponentials and character formulas.

Exponent convention: ``q`` tracks half the cohomological degree, so a Lie
element with ``t``-degree ℓ contributes ``q^{-ℓ}``.  Windows bound each
``d_i``, optionally ``|d|``, and ``|k|``.  The character formulas only produce
non-positive ``q`` exponents, for which window truncation commutes with
multiplication.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from math import factorial
from typing import Callable, Dict, Iterable, Iterator, List, Optional, Sequence, Tuple, Union

from sympy.utilities.iterables import multiset_permutations

from .quiver import Quiver, kac_polynomial, slope

Key = Tuple[Tuple[int, ...], int]


class SeriesError(ValueError):
    pass


@dataclass(frozen=True)
class TruncationWindow:
    max_weight: Tuple[int, ...]
    max_qdeg: int
    max_total: Optional[int] = None

    def __post_init__(self) -> None:
        if any(x < 0 for x in self.max_weight) or self.max_qdeg < 0:
            raise SeriesError("window bounds must be nonnegative")
        if self.max_total is not None and self.max_total < 0:
            raise SeriesError("window bounds must be nonnegative")

    @classmethod
    def total(cls, nvertices: int, max_total: int, max_qdeg: int) -> "TruncationWindow":
        return cls((max_total,) * nvertices, max_qdeg, max_total)

    def contains(self, d: Sequence[int], k: int) -> bool:
        if abs(k) > self.max_qdeg:
            return False
        if any(x < 0 or x > m for x, m in zip(d, self.max_weight)):
            return False
        return self.max_total is None or sum(d) <= self.max_total

    def meet(self, other: "TruncationWindow") -> "TruncationWindow":
        if len(self.max_weight) != len(other.max_weight):
            raise SeriesError("windows over different vertex sets")
        totals = [t for t in (self.max_total, other.max_total) if t is not None]
        return TruncationWindow(tuple(min(a, b) for a, b in zip(self.max_weight, other.max_weight)),
                                min(self.max_qdeg, other.max_qdeg),
                                min(totals) if totals else None)

    def weights(self) -> Iterator[Tuple[int, ...]]:
        for d in product(*(range(m + 1) for m in self.max_weight)):
            if self.max_total is None or sum(d) <= self.max_total:
                yield d

    def is_empty(self) -> bool:
        return not any(any(d) for d in self.weights())


class GradedSeries:
    """Finite map ``(d, k) -> Fraction`` standing for Σ c z^d q^k, truncated to a window."""

    __slots__ = ("coeffs", "window")

    def __init__(self, window: TruncationWindow, coeffs: Optional[Dict[Key, Fraction]] = None):
        self.window = window
        self.coeffs: Dict[Key, Fraction] = {}
        for (d, k), c in (coeffs or {}).items():
            d = tuple(d)
            if c and window.contains(d, k):
                self.coeffs[(d, k)] = Fraction(c)

    @classmethod
    def one(cls, window: TruncationWindow) -> "GradedSeries":
        return cls(window, {((0,) * len(window.max_weight), 0): Fraction(1)})

    @classmethod
    def monomial(cls, window: TruncationWindow, d: Sequence[int], k: int = 0,
                 c: Union[int, Fraction] = 1) -> "GradedSeries":
        return cls(window, {(tuple(d), k): Fraction(c)})

    def __getitem__(self, key: Key) -> Fraction:
        d, k = key
        return self.coeffs.get((tuple(d), k), Fraction(0))

    def __eq__(self, other) -> bool:
        return isinstance(other, GradedSeries) and self.coeffs == other.coeffs

    def __repr__(self) -> str:
        return f"GradedSeries({self.to_text()})"

    def _zero(self) -> Tuple[int, ...]:
        return (0,) * len(self.window.max_weight)

    def __add__(self, other: "GradedSeries") -> "GradedSeries":
        w = self.window.meet(other.window)
        out = dict(self.coeffs)
        for key, c in other.coeffs.items():
            out[key] = out.get(key, 0) + c
        return GradedSeries(w, out)

    def __neg__(self) -> "GradedSeries":
        return GradedSeries(self.window, {k: -c for k, c in self.coeffs.items()})

    def __sub__(self, other: "GradedSeries") -> "GradedSeries":
        return self + (-other)

    def scale(self, c: Union[int, Fraction]) -> "GradedSeries":
        return GradedSeries(self.window, {k: v * c for k, v in self.coeffs.items()})

    def __mul__(self, other: "GradedSeries") -> "GradedSeries":
        w = self.window.meet(other.window)
        out: Dict[Key, Fraction] = {}
        for (d1, k1), c1 in self.coeffs.items():
            for (d2, k2), c2 in other.coeffs.items():
                d = tuple(a + b for a, b in zip(d1, d2))
                k = k1 + k2
                if w.contains(d, k):
                    out[(d, k)] = out.get((d, k), 0) + c1 * c2
        return GradedSeries(w, out)

    def __pow__(self, n: int) -> "GradedSeries":
        result = GradedSeries.one(self.window)
        for _ in range(n):
            result = result * self
        return result

    def constant_term(self) -> Fraction:
        return self.coeffs.get((self._zero(), 0), Fraction(0))

    def adams(self, n: int) -> "GradedSeries":
        """ψ_n: z^d q^k ↦ z^{nd} q^{nk}."""
        return GradedSeries(self.window, {(tuple(n * x for x in d), n * k): c
                                          for (d, k), c in self.coeffs.items()})

    def _nilpotency_bound(self) -> int:
        w = self.window
        total = w.max_total if w.max_total is not None else sum(w.max_weight)
        return total + w.max_qdeg + 1

    def exp(self) -> "GradedSeries":
        if self.constant_term():
            raise SeriesError("exp needs a series without constant term")
        result = GradedSeries.one(self.window)
        power = GradedSeries.one(self.window)
        for m in range(1, self._nilpotency_bound() + 1):
            power = power * self
            if not power.coeffs:
                break
            result = result + power.scale(Fraction(1, factorial(m)))
        return result

    def restrict(self, keep: Callable[[Tuple[int, ...], int], bool]) -> "GradedSeries":
        return GradedSeries(self.window, {k: c for k, c in self.coeffs.items() if keep(*k)})

    def to_text(self) -> str:
        if not self.coeffs:
            return "0"
        parts = []
        for (d, k) in sorted(self.coeffs, key=lambda key: (sum(key[0]), key[0], -key[1])):
            c = self.coeffs[(d, k)]
            parts.append(f"{c} * z^({','.join(map(str, d))}) * q^{k}")
        return " + ".join(parts)

    def terms(self) -> List[Tuple[Tuple[int, ...], int, Fraction]]:
        return [(d, k, self.coeffs[(d, k)])
                for (d, k) in sorted(self.coeffs, key=lambda key: (sum(key[0]), key[0], -key[1]))]


def plethystic_exp(f: GradedSeries) -> GradedSeries:
    """Exp(f) = exp(Σ_{n≥1} ψ_n(f)/n)."""
    if f.constant_term():
        raise SeriesError("plethystic exponential needs a zero constant term")
    log = GradedSeries(f.window)
    for n in range(1, f._nilpotency_bound() + 1):
        term = f.adams(n)
        if not term.coeffs:
            break
        log = log + term.scale(Fraction(1, n))
    return log.exp()


def geometric_prefactor(window: TruncationWindow, exponent: int) -> GradedSeries:
    """(1 − q^{-1})^{-exponent} truncated to the window."""
    if exponent < 0:
        raise SeriesError("prefactor exponent must be nonnegative")
    zero = (0,) * len(window.max_weight)
    base = GradedSeries(window, {(zero, -m): Fraction(1) for m in range(window.max_qdeg + 1)})
    return base ** exponent


def kac_numerator_series(Q: Quiver, window: TruncationWindow,
                         keep: Optional[Callable[[Tuple[int, ...]], bool]] = None) -> GradedSeries:
    """Σ_{d≠0} A_d(q^{-1})/(1 − q^{-1}) z^d over the weights of the window."""
    out: Dict[Key, Fraction] = {}
    for d in window.weights():
        if not any(d) or (keep is not None and not keep(d)):
            continue
        poly = kac_polynomial(Q, d)
        for j, a in enumerate(poly):
            if not a:
                continue
            for m in range(window.max_qdeg + 1):
                k = -(j + m)
                out[(d, k)] = out.get((d, k), 0) + a
    return GradedSeries(window, out)


def coha_character(Q: Quiver, window: TruncationWindow, dim_a: int = 0) -> GradedSeries:
    """(1 − q^{-1})^{-dim A} · Exp(Σ_{d≠0} A_d(q^{-1})/(1 − q^{-1}) z^d)."""
    if dim_a not in (0, 1, 2):
        raise SeriesError("torus dimension must be 0, 1 or 2")
    return geometric_prefactor(window, dim_a) * plethystic_exp(kac_numerator_series(Q, window))


@dataclass(frozen=True)
class SlopeInterval:
    """Half-open interval (low, high]; ``None`` stands for an infinite end."""

    low: Optional[Fraction]
    high: Optional[Fraction]

    def __contains__(self, mu: Fraction) -> bool:
        if self.low is not None and mu <= self.low:
            return False
        return self.high is None or mu <= self.high


SlopeSet = Union[None, SlopeInterval, Iterable[Fraction], Callable[[Fraction], bool]]


def slope_predicate(slope_set: SlopeSet) -> Callable[[Fraction], bool]:
    if slope_set is None:
        return lambda mu: True
    if isinstance(slope_set, SlopeInterval):
        return lambda mu: mu in slope_set
    if callable(slope_set):
        return slope_set
    members = frozenset(Fraction(x) for x in slope_set)
    return lambda mu: mu in members


def semistable_character(Q: Quiver, theta: Sequence[int], slope_set: SlopeSet,
                         window: TruncationWindow, prefactor_exponent: int = 0) -> GradedSeries:
    """Character restricted to dimension vectors whose θ-slope lies in ``slope_set``."""
    member = slope_predicate(slope_set)
    numer = kac_numerator_series(Q, window, keep=lambda d: member(slope(theta, d)))
    return geometric_prefactor(window, prefactor_exponent) * plethystic_exp(numer)


def slopes_in_window(theta: Sequence[int], window: TruncationWindow) -> List[Fraction]:
    return sorted({slope(theta, d) for d in window.weights() if any(d)})



def hn_product(Q: Quiver, theta: Sequence[int], window: TruncationWindow, dim_a: int = 0) -> GradedSeries:
    """Prefactor times the product over slopes of the semistable characters.

    The torus prefactor is applied once to the whole product, not per slope.
    """
    out = geometric_prefactor(window, dim_a)
    for mu in slopes_in_window(theta, window):
        out = out * semistable_character(Q, theta, [mu], window)
    return out

# ---------------------------------------------------------------- symmetric functions

Partition = Tuple[int, ...]


def _partition(p: Iterable[int]) -> Partition:
    parts = tuple(sorted((x for x in p if x), reverse=True))
    if any(x < 0 for x in parts):
        raise SeriesError(f"partition {parts} has a negative part")
    return parts


class SymFunc:
    """Rational combination of monomial symmetric functions m_λ."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Optional[Dict[Partition, Fraction]] = None):
        self.coeffs: Dict[Partition, Fraction] = {}
        for lam, c in (coeffs or {}).items():
            lam = _partition(lam)
            if c:
                self.coeffs[lam] = self.coeffs.get(lam, 0) + Fraction(c)
        self.coeffs = {k: v for k, v in self.coeffs.items() if v}

    @classmethod
    def m(cls, lam: Iterable[int], c: Union[int, Fraction] = 1) -> "SymFunc":
        return cls({_partition(lam): Fraction(c)})

    @classmethod
    def power_sum(cls, k: int) -> "SymFunc":
        return cls.m((k,))

    @classmethod
    def elementary(cls, n: int) -> "SymFunc":
        return cls.m((1,) * n)

    def __eq__(self, other) -> bool:
        return isinstance(other, SymFunc) and self.coeffs == other.coeffs

    def __repr__(self) -> str:
        if not self.coeffs:
            return "0"
        return " + ".join(f"{c}*m{list(lam)}" for lam, c in sorted(self.coeffs.items()))

    def __add__(self, other: "SymFunc") -> "SymFunc":
        out = dict(self.coeffs)
        for lam, c in other.coeffs.items():
            out[lam] = out.get(lam, 0) + c
        return SymFunc(out)

    def scale(self, c: Union[int, Fraction]) -> "SymFunc":
        return SymFunc({lam: v * c for lam, v in self.coeffs.items()})

    def __mul__(self, other: "SymFunc") -> "SymFunc":
        return symfunc_mul(self, other)


def monomial_structure_constants(lam: Partition, mu: Partition) -> Dict[Partition, int]:
    """n^ν_{λμ}: number of pairs (a, b), a a rearrangement of λ and b of μ, with a + b = ν."""
    length = len(lam) + len(mu)
    if length == 0:
        return {(): 1}
    a_pad = list(lam) + [0] * (length - len(lam))
    b_pad = list(mu) + [0] * (length - len(mu))
    counts: Dict[Partition, int] = {}
    b_perms = [tuple(p) for p in multiset_permutations(b_pad)]
    for a in multiset_permutations(a_pad):
        for b in b_perms:
            s = [x + y for x, y in zip(a, b)]
            if all(s[i] >= s[i + 1] for i in range(length - 1)):
                nu = _partition(s)
                counts[nu] = counts.get(nu, 0) + 1
    return counts


def symfunc_mul(f: SymFunc, g: SymFunc) -> SymFunc:
    out: Dict[Partition, Fraction] = {}
    for lam, c1 in f.coeffs.items():
        for mu, c2 in g.coeffs.items():
            for nu, n in monomial_structure_constants(lam, mu).items():
                out[nu] = out.get(nu, 0) + c1 * c2 * n
    return SymFunc(out)
