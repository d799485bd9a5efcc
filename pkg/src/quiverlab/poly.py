"""Sparse multivariate polynomials with exact coefficients.

Monomials are fixed-length exponent tuples; coefficients are ``int`` or
``fractions.Fraction``.  Integer inputs stay integers through ring operations,
which keeps shuffle products fast.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Dict, Iterable, Iterator, Mapping, Sequence, Tuple, Union

Coeff = Union[int, Fraction]
Monomial = Tuple[int, ...]


def _normalize(c: Coeff) -> Coeff:
    if isinstance(c, Fraction) and c.denominator == 1:
        return c.numerator
    return c


class Poly:
    """Polynomial in ``nvars`` variables stored as ``{exponents: coefficient}``."""

    __slots__ = ("nvars", "terms")

    def __init__(self, nvars: int, terms: Mapping[Monomial, Coeff] | None = None):
        self.nvars = nvars
        self.terms: Dict[Monomial, Coeff] = {}
        if terms:
            for m, c in terms.items():
                if c:
                    if len(m) != nvars:
                        raise ValueError(f"monomial {m} does not have {nvars} exponents")
                    self.terms[m] = _normalize(c)

    @classmethod
    def const(cls, nvars: int, c: Coeff) -> "Poly":
        return cls(nvars, {(0,) * nvars: c})

    @classmethod
    def var(cls, nvars: int, i: int, power: int = 1) -> "Poly":
        m = [0] * nvars
        m[i] = power
        return cls(nvars, {tuple(m): 1})

    @classmethod
    def _raw(cls, nvars: int, terms: Dict[Monomial, Coeff]) -> "Poly":
        p = cls.__new__(cls)
        p.nvars = nvars
        p.terms = terms
        return p

    def copy(self) -> "Poly":
        return Poly._raw(self.nvars, dict(self.terms))

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __len__(self) -> int:
        return len(self.terms)

    def __iter__(self) -> Iterator[Tuple[Monomial, Coeff]]:
        return iter(self.terms.items())

    def _coerce(self, other) -> "Poly":
        if isinstance(other, Poly):
            if other.nvars != self.nvars:
                raise ValueError(f"variable count mismatch: {self.nvars} vs {other.nvars}")
            return other
        if isinstance(other, (int, Fraction)):
            return Poly.const(self.nvars, other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        out = dict(self.terms)
        for m, c in other.terms.items():
            v = out.get(m, 0) + c
            if v:
                out[m] = _normalize(v)
            else:
                out.pop(m, None)
        return Poly._raw(self.nvars, out)

    __radd__ = __add__

    def __neg__(self) -> "Poly":
        return Poly._raw(self.nvars, {m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        out: Dict[Monomial, Coeff] = {}
        get = out.get
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                m = tuple(a + b for a, b in zip(m1, m2))
                out[m] = get(m, 0) + c1 * c2
        return Poly._raw(self.nvars, {m: _normalize(c) for m, c in out.items() if c})

    __rmul__ = __mul__

    def __pow__(self, n: int) -> "Poly":
        if n < 0:
            raise ValueError("negative power")
        result = Poly.const(self.nvars, 1)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def scale(self, c: Coeff) -> "Poly":
        if not c:
            return Poly(self.nvars)
        return Poly._raw(self.nvars, {m: _normalize(v * c) for m, v in self.terms.items()})

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            other = Poly.const(self.nvars, other)
        if not isinstance(other, Poly):
            return NotImplemented
        return self.nvars == other.nvars and self.terms == other.terms

    def __hash__(self) -> int:
        return hash((self.nvars, frozenset(self.terms.items())))

    def __repr__(self) -> str:
        return f"Poly({self.nvars}, {self.terms!r})"

    def degree(self) -> int:
        return max((sum(m) for m in self.terms), default=-1)

    def is_homogeneous(self) -> bool:
        return len({sum(m) for m in self.terms}) <= 1

    def constant_term(self) -> Coeff:
        return self.terms.get((0,) * self.nvars, 0)

    def permute(self, perm: Sequence[int]) -> "Poly":
        """Rename variable ``i`` to variable ``perm[i]``."""
        out: Dict[Monomial, Coeff] = {}
        n = self.nvars
        for m, c in self.terms.items():
            new = [0] * n
            for i, e in enumerate(m):
                if e:
                    new[perm[i]] = e
            out[tuple(new)] = c
        return Poly._raw(n, out)

    def embed(self, nvars: int, positions: Sequence[int]) -> "Poly":
        """Move variable ``i`` to slot ``positions[i]`` of a larger ring."""
        out: Dict[Monomial, Coeff] = {}
        for m, c in self.terms.items():
            new = [0] * nvars
            for i, e in enumerate(m):
                if e:
                    new[positions[i]] += e
            key = tuple(new)
            out[key] = out.get(key, 0) + c
        return Poly(nvars, out)

    def substitute(self, images: Sequence["Poly"]) -> "Poly":
        """Ring map sending variable ``i`` to ``images[i]``."""
        if len(images) != self.nvars:
            raise ValueError("need one image per variable")
        target = images[0].nvars if images else 0
        cache: Dict[Tuple[int, int], Poly] = {}
        out = Poly(target)
        for m, c in self.terms.items():
            term = Poly.const(target, c)
            for i, e in enumerate(m):
                if e:
                    key = (i, e)
                    if key not in cache:
                        cache[key] = images[i] ** e
                    term = term * cache[key]
            out = out + term
        return out

    def split(self, variables: Sequence[int]) -> Dict[Monomial, "Poly"]:
        """Group by the exponents of ``variables``; values keep only the other slots zeroed."""
        out: Dict[Monomial, Dict[Monomial, Coeff]] = {}
        vs = list(variables)
        for m, c in self.terms.items():
            key = tuple(m[v] for v in vs)
            rest = list(m)
            for v in vs:
                rest[v] = 0
            out.setdefault(key, {})[tuple(rest)] = c
        return {k: Poly._raw(self.nvars, t) for k, t in out.items()}

    def divide_difference(self, a: int, b: int) -> "Poly":
        """Exact quotient by ``x_a - x_b``; raises ``ArithmeticError`` on a remainder."""
        by_a: Dict[int, Dict[Monomial, Coeff]] = {}
        for m, c in self.terms.items():
            rest = list(m)
            e = rest[a]
            rest[a] = 0
            by_a.setdefault(e, {})[tuple(rest)] = c
        if not by_a:
            return Poly(self.nvars)
        top = max(by_a)
        quotient: Dict[Monomial, Coeff] = {}
        carry: Dict[Monomial, Coeff] = {}
        # synthetic division in x_a with coefficients in the other variables
        for k in range(top, 0, -1):
            coeff = dict(by_a.get(k, {}))
            for m, c in carry.items():
                v = coeff.get(m, 0) + c
                if v:
                    coeff[m] = v
                else:
                    coeff.pop(m, None)
            # q_{k-1} = coeff; next carry = x_b * q_{k-1}
            carry = {}
            for m, c in coeff.items():
                qm = list(m)
                qm[a] = k - 1
                quotient[tuple(qm)] = c
                bm = list(m)
                bm[b] += 1
                carry[tuple(bm)] = c
        remainder = dict(by_a.get(0, {}))
        for m, c in carry.items():
            v = remainder.get(m, 0) + c
            if v:
                remainder[m] = v
            else:
                remainder.pop(m, None)
        if remainder:
            raise ArithmeticError(f"x{a} - x{b} does not divide the polynomial")
        return Poly._raw(self.nvars, quotient)

    def to_string(self, names: Sequence[str]) -> str:
        if not self.terms:
            return "0"
        parts = []
        for m in sorted(self.terms, reverse=True):
            c = self.terms[m]
            factors = [n if e == 1 else f"{n}^{e}" for n, e in zip(names, m) if e]
            mono = "*".join(factors)
            if not mono:
                parts.append(str(c))
            elif c == 1:
                parts.append(mono)
            elif c == -1:
                parts.append("-" + mono)
            else:
                parts.append(f"{c}*{mono}")
        return " + ".join(parts).replace("+ -", "- ")


def poly_sum(polys: Iterable[Poly], nvars: int) -> Poly:
    out: Dict[Monomial, Coeff] = {}
    for p in polys:
        for m, c in p.terms.items():
            out[m] = out.get(m, 0) + c
    return Poly(nvars, out)
