"""The elliptic Lie algebra g_f[s^{±1}, t] ⊕ (central part) of an affine quiver.

Basis symbols:

* ``("e", root, k, m)``  the root vector X_root s^k t^m,
* ``("h", i, k, m)``     the Cartan element h_i s^k t^m (i a finite vertex, 0-based),
* ``("c", l)``           the central element c_l = t^l s^{-1} ds,
* ``("cc", k, l)``       the central element c_{k,l} = t^l s^{k-1} ds, k ≠ 0, l ≥ 1.

The bracket is [x a, y b] = [x, y] ab + (x, y) b da reduced modulo exact
forms.  Writing m = k + h and p = l + n for a = s^k t^l, b = s^h t^n:

* m = 0: the central term is k (x, y) c_p,
* m ≠ 0, p = 0: b da is exact and the central term vanishes,
* otherwise it is (kn − lh)/p · (x, y) c_{m,p}.

Affine vertices are numbered as in the quiver: vertex i ≥ 1 is the finite
vertex i − 1, and vertex 0 carries x_0^+ = X_{−φ} s, x_0^- = X_φ s^{-1}.
"""

from __future__ import annotations

from fractions import Fraction
from math import factorial
from typing import Dict, Iterable, List, Optional, Sequence, Tuple, Union

from .lie import SimpleLie, is_positive
from .quiver import CoweightVector, DimVector, Quiver, QuiverError, find_delta
from .weyl import BraidWord, braid_L_lambda

Sym = Tuple
Number = Union[int, Fraction]


class LoopError(QuiverError):
    pass


class LoopElt:
    """Finite rational combination of basis symbols."""

    __slots__ = ("terms",)

    def __init__(self, terms: Optional[Dict[Sym, Number]] = None):
        self.terms: Dict[Sym, Fraction] = {k: Fraction(v) for k, v in (terms or {}).items() if v}

    @classmethod
    def basis(cls, sym: Sym) -> "LoopElt":
        return cls({sym: 1})

    def __add__(self, other: "LoopElt") -> "LoopElt":
        out = dict(self.terms)
        for k, v in other.terms.items():
            out[k] = out.get(k, 0) + v
        return LoopElt(out)

    def __neg__(self) -> "LoopElt":
        return LoopElt({k: -v for k, v in self.terms.items()})

    def __sub__(self, other: "LoopElt") -> "LoopElt":
        return self + (-other)

    def scale(self, c: Number) -> "LoopElt":
        return LoopElt({k: v * c for k, v in self.terms.items()})

    def __eq__(self, other) -> bool:
        return isinstance(other, LoopElt) and self.terms == other.terms

    def __hash__(self) -> int:
        return hash(frozenset(self.terms.items()))

    def is_zero(self) -> bool:
        return not self.terms

    def __repr__(self) -> str:
        return f"LoopElt({self.terms!r})"


def e_sym(root: Sequence[int], k: int = 0, m: int = 0) -> Sym:
    return ("e", tuple(root), k, m)


def h_sym(i: int, k: int = 0, m: int = 0) -> Sym:
    return ("h", i, k, m)


def is_central(sym: Sym) -> bool:
    return sym[0] in ("c", "cc")


class EllipticLie:
    """Bracket, weights and braid operators of the elliptic Lie algebra of ``Q``."""

    def __init__(self, Q: Quiver, x0_sign: int = 1):
        if x0_sign not in (1, -1):
            raise LoopError("x0_sign must be ±1")
        self.quiver = Q
        self.x0_sign = x0_sign
        self.affine = find_delta(Q)
        self.delta = self.affine.delta
        self.finite = SimpleLie(Q.finite_part())
        self.rank = self.finite.rank
        self.phi = self.affine.highest_root[1:]
        if self.phi != self.finite.highest_root:
            raise LoopError("highest root of the finite part does not match δ")
        self._cache: Dict[Tuple[Sym, Sym], Dict[Sym, Fraction]] = {}

    # ------------------------------------------------------------ grading
    def weight(self, sym: Sym) -> DimVector:
        """Horizontal weight in ℤI: α + kδ, with α placed on vertices 1..e."""
        n = self.quiver.num_vertices
        if sym[0] == "c":
            return (0,) * n
        if sym[0] == "cc":
            k = sym[1]
        else:
            k = sym[2]
        base = (0,) + (sym[1] if sym[0] == "e" else (0,) * self.rank)
        return tuple(b + k * d for b, d in zip(base, self.delta))

    def t_degree(self, sym: Sym) -> int:
        if sym[0] == "c":
            return sym[1]
        if sym[0] == "cc":
            return sym[2]
        return sym[3]

    def s_degree(self, sym: Sym) -> int:
        if sym[0] == "c":
            return 0
        if sym[0] == "cc":
            return sym[1]
        return sym[2]

    # ------------------------------------------------------------ bracket
    def bracket_basis(self, a: Sym, b: Sym) -> Dict[Sym, Fraction]:
        key = (a, b)
        cached = self._cache.get(key)
        if cached is not None:
            return cached
        out: Dict[Sym, Fraction] = {}
        if not (is_central(a) or is_central(b)):
            x, k, l = (a[0], a[1]), a[2], a[3]
            y, h, n = (b[0], b[1]), b[2], b[3]
            m, p = k + h, l + n
            for key2, c in self.finite.bracket_basis(x, y).items():
                out[(key2[0], key2[1], m, p)] = c
            form = self.finite.form_basis(x, y)
            if form:
                if m == 0:
                    coeff = Fraction(k * form)
                    target = ("c", p)
                elif p == 0:
                    coeff, target = Fraction(0), None
                else:
                    coeff = Fraction((k * n - l * h) * form, p)
                    target = ("cc", m, p)
                if coeff:
                    out[target] = out.get(target, 0) + coeff
        out = {s: c for s, c in out.items() if c}
        self._cache[key] = out
        return out

    def bracket(self, u: LoopElt, v: LoopElt) -> LoopElt:
        out: Dict[Sym, Fraction] = {}
        for a, x in u.terms.items():
            for b, y in v.terms.items():
                for s, c in self.bracket_basis(a, b).items():
                    out[s] = out.get(s, 0) + x * y * c
        return LoopElt(out)

    # ------------------------------------------------------------ generators
    def _vertex(self, i: int) -> None:
        if not 0 <= i < self.quiver.num_vertices:
            raise LoopError(f"vertex {i} out of range")

    def simple_root(self, i: int) -> DimVector:
        """Finite simple root α_i (i ≥ 1) in finite coordinates."""
        return tuple(1 if j == i - 1 else 0 for j in range(self.rank))

    def x_plus(self, i: int) -> LoopElt:
        self._vertex(i)
        if i == 0:
            return LoopElt({e_sym(tuple(-x for x in self.phi), 1): self.x0_sign})
        return LoopElt.basis(e_sym(self.simple_root(i)))

    def x_minus(self, i: int) -> LoopElt:
        self._vertex(i)
        if i == 0:
            return LoopElt({e_sym(self.phi, -1): self.x0_sign})
        return LoopElt.basis(e_sym(tuple(-x for x in self.simple_root(i))))

    def h(self, i: int) -> LoopElt:
        return self.bracket(self.x_plus(i), self.x_minus(i))

    # ------------------------------------------------------------ braid operators
    def ad_exp(self, x: LoopElt, v: LoopElt, sign: int = 1, cap: int = 16) -> LoopElt:
        """exp(sign · ad x)(v), summed until the iterated brackets vanish."""
        total = v
        term = v
        for n in range(1, cap + 1):
            term = self.bracket(x, term)
            if term.is_zero():
                return total
            total = total + term.scale(Fraction(sign ** n, factorial(n)))
        raise LoopError(f"ad is not nilpotent within {cap} steps on this element")

    def braid_T(self, i: int, v: LoopElt, inverse: bool = False) -> LoopElt:
        """T_i = exp(ad x_i^+) exp(−ad x_i^-) exp(ad x_i^+), or its inverse."""
        xp, xm = self.x_plus(i), self.x_minus(i)
        s = -1 if inverse else 1
        out = self.ad_exp(xp, v, s)
        out = self.ad_exp(xm, out, -s)
        return self.ad_exp(xp, out, s)

    def apply_word(self, word: BraidWord, v: LoopElt) -> LoopElt:
        """Apply T_{g_1}^{e_1} ⋯ T_{g_r}^{e_r}; the rightmost letter acts first."""
        for g, e in reversed(word.letters):
            if not isinstance(g, int):
                raise LoopError(f"diagram automorphism {g!r} has no action on the loop algebra here")
            v = self.braid_T(g, v, inverse=(e == -1))
        return v

    def translation_L(self, lam: CoweightVector, v: LoopElt,
                      autos: Optional[Dict[str, Tuple[int, ...]]] = None,
                      check: bool = False) -> LoopElt:
        """L_λ(v) computed along the braid word of λ.

        With ``check`` the result is compared with the closed formula
        L_λ(x s^n) = (−1)^⟨λ,α⟩ x s^{n−⟨λ,α⟩} on root vectors.
        """
        out = self.apply_word(braid_L_lambda(self.quiver, lam, autos), v)
        if check:
            expected = self.translation_formula(lam, v)
            if expected is not None and expected != out:
                raise LoopError(f"translation formula fails on {v!r}: got {out!r}")
        return out

    def finite_pairing(self, lam: CoweightVector, root: Sequence[int]) -> int:
        return sum(l * r for l, r in zip(lam[1:], root))

    def translation_formula(self, lam: CoweightVector, v: LoopElt) -> Optional[LoopElt]:
        """Closed form of L_λ on root vectors; ``None`` if v has other components."""
        out: Dict[Sym, Fraction] = {}
        for sym, c in v.terms.items():
            if sym[0] != "e":
                return None
            p = self.finite_pairing(lam, sym[1])
            out[e_sym(sym[1], sym[2] - p, sym[3])] = c * (-1) ** (p % 2)
        return LoopElt(out)

    # ------------------------------------------------------------ enumeration and text
    def basis_window(self, s_range: Iterable[int], t_range: Iterable[int],
                     central: bool = True) -> List[Sym]:
        s_vals, t_vals = list(s_range), list(t_range)
        out: List[Sym] = []
        for k in s_vals:
            for m in t_vals:
                out.extend(e_sym(r, k, m) for r in self.finite.roots)
                out.extend(h_sym(i, k, m) for i in range(self.rank))
        if central:
            out.extend(("c", m) for m in t_vals)
            out.extend(("cc", k, m) for k in s_vals for m in t_vals if k and m >= 1)
        return out

    def symbol_text(self, sym: Sym) -> str:
        if sym[0] == "c":
            return f"c[{sym[1]}]"
        if sym[0] == "cc":
            return f"c[{sym[1]},{sym[2]}]"
        head = self.finite.key_text((sym[0], sym[1]))
        return f"{head}s^{sym[2]} t^{sym[3]}"

    def parse_symbol(self, text: str) -> Sym:
        """Inverse of ``symbol_text``."""
        text = text.strip()
        try:
            if text.startswith("c["):
                inner = [int(x) for x in text[2:text.index("]")].split(",")]
                return ("c", inner[0]) if len(inner) == 1 else ("cc", inner[0], inner[1])
            head, rest = text.split("]", 1)
            kind, inner = head.split("[")
            rest = rest.replace(" ", "")
            s_part, t_part = rest.split("t^")
            k, m = int(s_part[2:]), int(t_part)
            if kind == "e":
                root = tuple(int(x) for x in inner.split(","))
                if root not in self.finite.root_set:
                    raise LoopError(f"{root} is not a root")
                return e_sym(root, k, m)
            if kind == "h":
                i = int(inner) - 1
                if not 0 <= i < self.rank:
                    raise LoopError(f"no Cartan generator h[{inner}]")
                return h_sym(i, k, m)
        except (ValueError, IndexError) as exc:
            raise LoopError(f"cannot parse Lie symbol {text!r}") from exc
        raise LoopError(f"cannot parse Lie symbol {text!r}")

    def is_negative_symbol(self, sym: Sym) -> bool:
        w = self.weight(sym)
        return any(w) and all(x <= 0 for x in w)

    def is_positive_root_vector(self, sym: Sym) -> bool:
        return sym[0] == "e" and is_positive(self.weight(sym))


def bracket_ell(L: EllipticLie, a: LoopElt, b: LoopElt) -> LoopElt:
    return L.bracket(a, b)


def reflect_weight(Q: Quiver, i: int, d: Sequence[int]) -> DimVector:
    C = Q.cartan_matrix()
    pairing = sum(C[i][j] * x for j, x in enumerate(d))
    return tuple(x - (pairing if j == i else 0) for j, x in enumerate(d))
