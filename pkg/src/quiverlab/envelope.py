"""PBW normal forms in U(g_ell) and the computations built on them.

An ``EnvElt`` is a rational combination of monomials (tuples of loop basis
symbols).  ``EnvAlgebra`` fixes a total order on symbols and keeps every
monomial in non-decreasing order, straightening with the elliptic bracket.

Two orders are used:

* ``slope_order``: non-negative-weight symbols first, then the negative half
  by increasing θ-slope of −weight.  Slope quotients become monomial filters
  and the projection U(g) → U(n) kills every monomial whose first factor is
  non-negative.
* ``completion_order``: root vectors first by decreasing s-degree, Cartan and
  central symbols last.  Truncating the s-degree of root factors is then a
  quotient by a right ideal, which is the precision used for limit products.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import factorial
from typing import Callable, Dict, Iterable, List, Optional, Sequence, Tuple, Union

from .loop import EllipticLie, LoopElt, Sym, e_sym, h_sym, is_central
from .quiver import CoweightVector, QuiverError, slope

Word = Tuple[Sym, ...]
Number = Union[int, Fraction]


class EnvError(QuiverError):
    pass


class EnvTruncationError(EnvError):
    """Straightening or a series expansion exceeded its configured cap."""


class EnvConfigError(EnvError):
    pass


class EnvPrecisionError(EnvError):
    pass


class EnvElt:
    __slots__ = ("terms",)

    def __init__(self, terms: Optional[Dict[Word, Number]] = None):
        self.terms: Dict[Word, Fraction] = {tuple(w): Fraction(c) for w, c in (terms or {}).items() if c}

    @classmethod
    def one(cls) -> "EnvElt":
        return cls({(): 1})

    def __add__(self, other: "EnvElt") -> "EnvElt":
        out = dict(self.terms)
        for w, c in other.terms.items():
            out[w] = out.get(w, 0) + c
        return EnvElt(out)

    def __neg__(self) -> "EnvElt":
        return EnvElt({w: -c for w, c in self.terms.items()})

    def __sub__(self, other: "EnvElt") -> "EnvElt":
        return self + (-other)

    def scale(self, c: Number) -> "EnvElt":
        return EnvElt({w: v * c for w, v in self.terms.items()})

    def __eq__(self, other) -> bool:
        return isinstance(other, EnvElt) and self.terms == other.terms

    def __repr__(self) -> str:
        return f"EnvElt({self.terms!r})"

    def is_zero(self) -> bool:
        return not self.terms

    def filter(self, keep: Callable[[Word], bool]) -> "EnvElt":
        return EnvElt({w: c for w, c in self.terms.items() if keep(w)})


# ---------------------------------------------------------------- orders

@dataclass(frozen=True)
class PBWOrder:
    name: str
    key: Callable[[Sym], tuple]
    theta: Optional[CoweightVector] = None


def _tiebreak(L: EllipticLie, sym: Sym) -> tuple:
    return (L.weight(sym), L.s_degree(sym), L.t_degree(sym), sym)


def symbol_slope(L: EllipticLie, theta: Sequence[int], sym: Sym) -> Fraction:
    """θ-slope of −weight for a symbol of the negative half."""
    return slope(theta, tuple(-x for x in L.weight(sym)))


def slope_order(L: EllipticLie, theta: Optional[Sequence[int]] = None) -> PBWOrder:
    theta = tuple(theta) if theta is not None else (0,) * L.quiver.num_vertices
    if len(theta) != L.quiver.num_vertices:
        raise EnvConfigError("θ has the wrong number of entries")

    def key(sym: Sym) -> tuple:
        if not L.is_negative_symbol(sym):
            return (0, Fraction(0), _tiebreak(L, sym))
        return (1, symbol_slope(L, theta, sym), _tiebreak(L, sym))

    return PBWOrder("slope", key, theta)


def completion_order(L: EllipticLie) -> PBWOrder:
    def key(sym: Sym) -> tuple:
        if sym[0] == "e":
            return (0, -sym[2], sym[3], sym)
        return (1, 0, 0, _tiebreak(L, sym))

    return PBWOrder("completion", key)


# ---------------------------------------------------------------- the algebra

class EnvAlgebra:
    def __init__(self, L: EllipticLie, order: PBWOrder, cap: int = 2_000_000):
        self.lie = L
        self.order = order
        self.cap = cap
        self._key_cache: Dict[Sym, tuple] = {}
        self._lmul_cache: Dict[Tuple[Sym, Word], Dict[Word, Fraction]] = {}

    def key(self, sym: Sym) -> tuple:
        k = self._key_cache.get(sym)
        if k is None:
            k = self.order.key(sym)
            self._key_cache[sym] = k
        return k

    def is_normal(self, word: Sequence[Sym]) -> bool:
        return all(self.key(a) <= self.key(b) for a, b in zip(word, word[1:]))

    def lmul(self, b: Sym, word: Word) -> Dict[Word, Fraction]:
        """Normal form of b · word for a normal ``word``."""
        if not word or self.key(b) <= self.key(word[0]):
            return {(b,) + word: Fraction(1)}
        cached = self._lmul_cache.get((b, word))
        if cached is not None:
            return cached
        if len(self._lmul_cache) > self.cap:
            raise EnvTruncationError(f"straightening cap {self.cap} exceeded at {b!r} · {word!r}")
        a, tail = word[0], word[1:]
        out: Dict[Word, Fraction] = {}
        # b a tail = a (b tail) + [b, a] tail
        for w, c in self.lmul(b, tail).items():
            for w2, c2 in self.lmul(a, w).items():
                out[w2] = out.get(w2, 0) + c * c2
        for s, c in self.lie.bracket_basis(b, a).items():
            for w, c2 in self.lmul(s, tail).items():
                out[w] = out.get(w, 0) + c * c2
        out = {w: c for w, c in out.items() if c}
        self._lmul_cache[(b, word)] = out
        return out

    def normalize_word(self, word: Sequence[Sym], coeff: Number = 1) -> EnvElt:
        current: Dict[Word, Fraction] = {(): Fraction(coeff)}
        for sym in reversed(tuple(word)):
            nxt: Dict[Word, Fraction] = {}
            for w, c in current.items():
                for w2, c2 in self.lmul(sym, w).items():
                    nxt[w2] = nxt.get(w2, 0) + c * c2
            current = nxt
        return EnvElt(current)

    def normalize(self, x: EnvElt) -> EnvElt:
        out = EnvElt()
        for w, c in x.terms.items():
            out = out + (EnvElt({w: c}) if self.is_normal(w) else self.normalize_word(w, c))
        return out

    def mul(self, x: EnvElt, y: EnvElt) -> EnvElt:
        out: Dict[Word, Fraction] = {}
        for wx, cx in x.terms.items():
            current = {wy: cx * cy for wy, cy in y.terms.items()}
            for sym in reversed(wx):
                nxt: Dict[Word, Fraction] = {}
                for w, c in current.items():
                    for w2, c2 in self.lmul(sym, w).items():
                        nxt[w2] = nxt.get(w2, 0) + c * c2
                current = nxt
            for w, c in current.items():
                out[w] = out.get(w, 0) + c
        return EnvElt(out)

    def product(self, factors: Iterable[EnvElt]) -> EnvElt:
        out = EnvElt.one()
        for f in factors:
            out = self.mul(out, f)
        return out

    def power(self, x: EnvElt, n: int) -> EnvElt:
        return self.product([x] * n)

    def commutator(self, x: EnvElt, y: EnvElt) -> EnvElt:
        return self.mul(x, y) - self.mul(y, x)

    def from_lie(self, v: LoopElt) -> EnvElt:
        return EnvElt({(s,): c for s, c in v.terms.items()})

    def symbol(self, sym: Sym, c: Number = 1) -> EnvElt:
        return EnvElt({(sym,): c})

    # ------------------------------------------------------------ braid operators
    def apply_lie_map(self, f: Callable[[LoopElt], LoopElt], x: EnvElt) -> EnvElt:
        """Extend a Lie algebra map multiplicatively to monomials and renormalize."""
        images: Dict[Sym, EnvElt] = {}
        out = EnvElt()
        for w, c in x.terms.items():
            factors = []
            for s in w:
                if s not in images:
                    images[s] = self.from_lie(f(LoopElt.basis(s)))
                factors.append(images[s])
            out = out + self.product(factors).scale(c)
        return out

    def braid_T(self, i: int, x: EnvElt, inverse: bool = False) -> EnvElt:
        return self.apply_lie_map(lambda v: self.lie.braid_T(i, v, inverse), x)

    def project_negative(self, x: EnvElt) -> EnvElt:
        """pr: U(g) → U(n), killing monomials with a non-negative-weight factor."""
        self._require("slope")
        return x.filter(lambda w: all(self.lie.is_negative_symbol(s) for s in w))

    def truncated_braid(self, i: int, x: EnvElt) -> EnvElt:
        return self.project_negative(self.braid_T(i, x))

    def truncated_word(self, word: Sequence[int], x: EnvElt) -> EnvElt:
        """T̄_{i_1} ∘ ⋯ ∘ T̄_{i_r} (the rightmost index acts first)."""
        for i in reversed(list(word)):
            x = self.truncated_braid(i, x)
        return x

    # ------------------------------------------------------------ quotients
    def _require(self, name: str) -> None:
        if self.order.name != name:
            raise EnvConfigError(f"this operation needs the {name} order, not {self.order.name}")

    def slope_project(self, spec: "SlopeIdealSpec", x: EnvElt) -> EnvElt:
        self._require("slope")
        if tuple(spec.theta) != tuple(self.order.theta):
            raise EnvConfigError("slope ideal and PBW order use different θ")

        def keep(w: Word) -> bool:
            for s in w:
                if not self.lie.is_negative_symbol(s):
                    return False
                if not spec.contains(symbol_slope(self.lie, spec.theta, s)):
                    return False
            return True

        return x.filter(keep)

    def drop_high_modes(self, x: EnvElt, level: int) -> EnvElt:
        """Quotient by the right ideal of root vectors with s-degree > level."""
        self._require("completion")
        return x.filter(lambda w: all(s[0] != "e" or s[2] <= level for s in w))

    # ------------------------------------------------------------ text
    def to_text(self, x: EnvElt) -> str:
        if x.is_zero():
            return "0"
        parts = []
        for w, c in sorted(x.terms.items(), key=lambda kv: (len(kv[0]), [self.key(s) for s in kv[0]])):
            mono = " * ".join(self.lie.symbol_text(s) for s in w) or "1"
            parts.append(f"{c} {mono}")
        return " + ".join(parts)

    def serialize(self, x: EnvElt) -> List[Tuple[List[str], str]]:
        return [([self.lie.symbol_text(s) for s in w], str(c)) for w, c in x.terms.items()]

    def deserialize(self, data: Iterable[Tuple[Sequence[str], str]]) -> EnvElt:
        out = EnvElt()
        for syms, c in data:
            word = [self.lie.parse_symbol(s) for s in syms]
            out = out + self.normalize_word(word, Fraction(c))
        return out


@dataclass(frozen=True)
class SlopeIdealSpec:
    """θ together with the interval (low, high]; ``None`` is an infinite end.

    ``closed_low`` turns the interval into [low, high] (used for singletons).
    """

    theta: CoweightVector
    low: Optional[Fraction]
    high: Optional[Fraction]
    closed_low: bool = False

    def __post_init__(self) -> None:
        if self.low is not None and self.high is not None:
            if self.low > self.high or (self.low == self.high and not self.closed_low):
                raise EnvConfigError("empty slope interval")

    @classmethod
    def singleton(cls, theta: CoweightVector, b: Fraction) -> "SlopeIdealSpec":
        return cls(tuple(theta), Fraction(b), Fraction(b), closed_low=True)

    def contains(self, mu: Fraction) -> bool:
        if self.low is not None:
            if mu < self.low or (mu == self.low and not self.closed_low):
                return False
        return self.high is None or mu <= self.high


# ---------------------------------------------------------------- PBW counting

def negative_half_basis(L: EllipticLie, d: Sequence[int], max_t: int) -> List[Sym]:
    """Basis symbols of n_ell whose −weight is ≤ d componentwise, t-degree ≤ max_t."""
    n = L.quiver.num_vertices
    delta = L.delta
    kmax = max(d[j] // delta[j] for j in range(n)) + 1
    out: List[Sym] = []
    for k in range(-kmax, 1):
        for m in range(max_t + 1):
            cands = [e_sym(r, k, m) for r in L.finite.roots]
            if k < 0:
                cands += [h_sym(i, k, m) for i in range(L.rank)]
                if m >= 1:
                    cands.append(("cc", k, m))
            for s in cands:
                if not L.is_negative_symbol(s):
                    continue
                neg = tuple(-x for x in L.weight(s))
                if all(a <= b for a, b in zip(neg, d)):
                    out.append(s)
    return out


def pbw_count(L: EllipticLie, d: Sequence[int], t_degree: int) -> int:
    """Number of normal PBW monomials of U(n_ell) with weight −d and given t-degree."""
    d = tuple(d)
    if t_degree < 0 or any(x < 0 for x in d):
        return 0
    basis = negative_half_basis(L, d, t_degree)
    data = [(tuple(-x for x in L.weight(s)), L.t_degree(s)) for s in basis]
    memo: Dict[Tuple[int, Tuple[int, ...], int], int] = {}

    def count(idx: int, rest: Tuple[int, ...], t: int) -> int:
        if not any(rest) and t == 0:
            return 1
        if idx == len(data):
            return 0
        key = (idx, rest, t)
        if key in memo:
            return memo[key]
        w, m = data[idx]
        total = 0
        cur, tt = rest, t
        while True:
            total += count(idx + 1, cur, tt)
            cur = tuple(a - b for a, b in zip(cur, w))
            tt -= m
            if tt < 0 or any(x < 0 for x in cur):
                break
        memo[key] = total
        return total

    return count(0, d, t_degree)


# ---------------------------------------------------------------- Θ images

def _finite_index(L: EllipticLie, i: int) -> int:
    if not 1 <= i <= L.rank:
        raise EnvError(f"Θ classes are indexed by finite vertices 1..{L.rank}, not {i}")
    return i - 1


def exp_h_coefficients(env: EnvAlgebra, i: int, depth: int) -> List[EnvElt]:
    """P_0..P_depth with Σ_j P_j u^{-j} = exp(Σ_k h_i s^{-k} u^{-k} / k)."""
    fi = _finite_index(env.lie, i)
    H = [None] + [env.symbol(h_sym(fi, -k)) for k in range(1, depth + 1)]
    P = [EnvElt.one()]
    for j in range(1, depth + 1):
        acc = EnvElt()
        for k in range(1, j + 1):
            acc = acc + env.mul(H[k], P[j - k])
        P.append(acc.scale(Fraction(1, j)))
    return P


def theta_Y(env: EnvAlgebra, i: int, n: int) -> EnvElt:
    """Θ(Y(i, n)) = (−1)^{n−1} h_i s^{−n}."""
    if n < 1:
        raise EnvError("Y(i, n) needs n ≥ 1")
    return env.symbol(h_sym(_finite_index(env.lie, i), -n), (-1) ** (n - 1))


def theta_Z(env: EnvAlgebra, i: int, n: int, depth: int) -> EnvElt:
    """Θ(Z(i, n)) = (−1)^n Σ_{j=0}^{depth} x_i^+ s^{j−n} P_j, cut after ``depth`` Cartan modes."""
    if depth < 0:
        raise EnvTruncationError("depth must be nonnegative")
    fi = _finite_index(env.lie, i)
    root = env.lie.simple_root(fi + 1)
    P = exp_h_coefficients(env, i, depth)
    out = EnvElt()
    for j in range(depth + 1):
        out = out + env.mul(env.symbol(e_sym(root, j - n)), P[j])
    return out.scale((-1) ** (n % 2))


Family = Callable[[int], EnvElt]


def theta_family(env: EnvAlgebra, kind: str, i: int, n: int) -> Family:
    if kind == "Y":
        value = theta_Y(env, i, n)
        return lambda depth: value
    if kind == "Z":
        return lambda depth: theta_Z(env, i, n, depth)
    if kind == "1":
        return lambda depth: EnvElt.one()
    raise EnvError(f"unknown class {kind!r}")


def limit_multiply(env: EnvAlgebra, x: Family, y: Family, level: int,
                   start_depth: int = 0, max_depth: int = 24) -> Tuple[EnvElt, int]:
    """Product at precision ``level`` from lifts at growing depth.

    Returns the stabilized product and the first depth at which two
    consecutive depths agree.
    """
    env._require("completion")
    previous: Optional[EnvElt] = None
    for depth in range(start_depth, max_depth + 1):
        z = env.drop_high_modes(env.mul(env.drop_high_modes(x(depth), level), y(depth)), level)
        if previous is not None and z == previous:
            return z, depth - 1
        previous = z
    raise EnvPrecisionError(f"no stabilization up to depth {max_depth} at level {level}")


# ---------------------------------------------------------------- A_1^(1) identities

def _divided_word(env: EnvAlgebra, letters: Sequence[Tuple[Sym, int]]) -> EnvElt:
    out = EnvElt.one()
    for sym, power in letters:
        out = env.mul(out, env.power(env.symbol(sym), power).scale(Fraction(1, factorial(power))))
    return out


def identity_sides(env: EnvAlgebra, which: str, order: int) -> Tuple[EnvElt, EnvElt]:
    """Both sides of the u^{-order} coefficient, reduced modulo the slope ideal."""
    L = env.lie
    if L.quiver.num_vertices != 2 or L.delta != (1, 1):
        raise EnvError("the identities are stated for the Kronecker quiver A1~")
    spec = SlopeIdealSpec(env.order.theta, None, Fraction(0))
    f = e_sym((-1,), 0)
    e1 = e_sym((1,), -1)
    P = exp_h_coefficients(env, 1, order)
    if which == "h":
        lhs = _divided_word(env, [(f, order), (e1, order)]).scale((-1) ** order)
        rhs = P[order]
    elif which == "e":
        ell = order - 1
        if ell < 0:
            raise EnvError("the e-series starts at order 1")
        lhs = _divided_word(env, [(f, ell), (e1, ell + 1)]).scale((-1) ** ell)
        rhs = EnvElt()
        for k in range(1, order + 1):
            rhs = rhs + env.mul(env.symbol(e_sym((1,), -k)), P[order - k])
    else:
        raise EnvError(f"unknown series {which!r}; use 'h' or 'e'")
    return env.slope_project(spec, lhs), env.slope_project(spec, env.normalize(rhs))


def identity_env(L: EllipticLie) -> EnvAlgebra:
    return EnvAlgebra(L, slope_order(L, (-1, 1)))


def verify_identity_A1(L: EllipticLie, which: str, order: int,
                       env: Optional[EnvAlgebra] = None) -> Tuple[bool, Optional[Tuple[int, EnvElt]]]:
    """Check the coefficients u^{-1} .. u^{-order}; the witness is (order, lhs − rhs)."""
    env = env or identity_env(L)
    for k in range(1, order + 1):
        lhs, rhs = identity_sides(env, which, k)
        if lhs != rhs:
            return False, (k, lhs - rhs)
    return True, None


def is_central_word(word: Word) -> bool:
    return all(is_central(s) for s in word)
