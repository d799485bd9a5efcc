"""Shuffle algebra of a quiver over ℚ[ε_e (e ∈ Ω), ħ].

Variable layout of a weight-``d`` element: ``ε_e`` for the arrows of Ω in
order, then ``ħ``, then ``z_{i,k}`` colour by colour.  Starred parameters are
eliminated by ``ε_{e*} = ħ − ε_e``.

Products are computed as ``Σ_σ sgn(σ) σ(N) / Δ`` where ``N`` is the kernel
numerator times the inputs times the partial Vandermonde factors, and ``Δ`` is
the full colourwise Vandermonde.  The final exact division doubles as the
polynomiality check.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations, permutations, product
from typing import Dict, List, Optional, Sequence, Tuple

from .poly import Coeff, Poly
from .quiver import Arrow, Quiver, find_delta

DimVector = Tuple[int, ...]


class ShuffleError(ValueError):
    pass


class ShuffleConsistencyError(RuntimeError):
    """A symmetrized quotient left a remainder; this signals a bug, not bad input."""


@dataclass(frozen=True)
class ShuffleElt:
    weight: DimVector
    poly: Poly

    def __add__(self, other: "ShuffleElt") -> "ShuffleElt":
        if self.weight != other.weight:
            raise ShuffleError(f"cannot add weights {self.weight} and {other.weight}")
        return ShuffleElt(self.weight, self.poly + other.poly)

    def __sub__(self, other: "ShuffleElt") -> "ShuffleElt":
        if self.weight != other.weight:
            raise ShuffleError(f"cannot subtract weights {self.weight} and {other.weight}")
        return ShuffleElt(self.weight, self.poly - other.poly)

    def __neg__(self) -> "ShuffleElt":
        return ShuffleElt(self.weight, -self.poly)

    def scale(self, c: Coeff) -> "ShuffleElt":
        return ShuffleElt(self.weight, self.poly.scale(c))

    def is_zero(self) -> bool:
        return self.poly.is_zero()


def _sign_of(perm: Sequence[int]) -> int:
    sign = 1
    seen = [False] * len(perm)
    for start in range(len(perm)):
        if seen[start]:
            continue
        length = 0
        j = start
        while not seen[j]:
            seen[j] = True
            j = perm[j]
            length += 1
        if length % 2 == 0:
            sign = -sign
    return sign


class ShuffleAlgebra:
    """Shuffle algebra of ``Q``.

    ``zeta_hbar_sign`` flips ħ inside the same-colour kernel (a deliberate
    mutation used to show the relation checks are not vacuous).
    ``two_parameter`` replaces every ε_e by ε of the first arrow, which is the
    specialization ε_e ↦ ε_1, ε_{e*} ↦ ε_2 = ħ − ε_1.
    """

    def __init__(self, Q: Quiver, zeta_hbar_sign: int = 1, two_parameter: bool = False):
        if zeta_hbar_sign not in (1, -1):
            raise ShuffleError("zeta_hbar_sign must be ±1")
        self.Q = Q
        self.zeta_hbar_sign = zeta_hbar_sign
        self.two_parameter = two_parameter
        self.n_eps = len(Q.arrows)
        self.base = self.n_eps + 1
        self.hbar_index = self.n_eps

    # ---------------------------------------------------------------- layout

    def nvars(self, d: Sequence[int]) -> int:
        return self.base + sum(d)

    def z_index(self, d: Sequence[int], i: int, k: int) -> int:
        """Slot of z_{i,k+1} (``k`` is 0-based)."""
        return self.base + sum(d[:i]) + k

    def variable_names(self, d: Sequence[int]) -> List[str]:
        names = [f"eps_{a.label}" for a in self.Q.arrows] + ["hbar"]
        for i, di in enumerate(d):
            names += [f"z{i}_{k + 1}" for k in range(di)]
        return names

    def coef_const(self, nvars: int, c: Coeff) -> Poly:
        return Poly.const(nvars, c)

    def eps(self, nvars: int, a: Arrow) -> Poly:
        """ε_a in a ring with ``nvars`` variables, starred arrows eliminated."""
        if self.n_eps == 0:
            raise ShuffleError("quiver has no arrows")
        idx = 0 if self.two_parameter else self._arrow_index(a)
        e = Poly.var(nvars, idx)
        if a.starred:
            return Poly.var(nvars, self.hbar_index) - e
        return e

    def hbar(self, nvars: int) -> Poly:
        return Poly.var(nvars, self.hbar_index)

    def _arrow_index(self, a: Arrow) -> int:
        for k, b in enumerate(self.Q.arrows):
            if b.label == (a.label[:-1] if a.starred else a.label):
                return k
        raise ShuffleError(f"unknown arrow {a.label}")

    def arrows_between(self, i: int, j: int) -> List[Arrow]:
        """Arrows i → j in the doubled quiver."""
        return [a for a in self.Q.doubled_arrows() if a.source == i and a.target == j]

    def zeta(self, i: int, j: int, t: Poly) -> Poly:
        """ζ_{i,j}(t) = Π_{e: i→j in Ω̄} (t + ε_e); ``t`` lives in the target ring."""
        out = Poly.const(t.nvars, 1)
        for a in self.arrows_between(i, j):
            out = out * (t + self.eps(t.nvars, a))
        return out

    def _kernel_numerator(self, nv: int, ci: int, a: int, cj: int, b: int) -> Poly:
        """Numerator of the kernel between slot ``a`` (colour ci) and slot ``b`` (colour cj)."""
        diff = Poly.var(nv, a) - Poly.var(nv, b)
        if ci == cj:
            return diff - self.hbar(nv).scale(self.zeta_hbar_sign)
        return self.zeta(ci, cj, diff)

    # ---------------------------------------------------------------- elements

    def element(self, weight: Sequence[int], poly: Poly, check: bool = True) -> ShuffleElt:
        weight = tuple(weight)
        self.Q.check_dim(weight)
        if poly.nvars != self.nvars(weight):
            raise ShuffleError(f"weight {weight} needs {self.nvars(weight)} variables, got {poly.nvars}")
        elt = ShuffleElt(weight, poly)
        if check and not self.is_symmetric(elt):
            raise ShuffleError("polynomial is not symmetric in same-colour variables")
        return elt

    def unit(self) -> ShuffleElt:
        d = (0,) * self.Q.num_vertices
        return ShuffleElt(d, Poly.const(self.nvars(d), 1))

    def zero(self, weight: Sequence[int]) -> ShuffleElt:
        return ShuffleElt(tuple(weight), Poly(self.nvars(weight)))

    def generator(self, i: int, l: int) -> ShuffleElt:
        """Image of x⁻_{i,l}: z_{i,1}^l in weight α_i."""
        if l < 0:
            raise ShuffleError("mode must be nonnegative")
        d = self.Q.simple_root(i)
        return ShuffleElt(d, Poly.var(self.nvars(d), self.z_index(d, i, 0), l))

    def scalar(self, weight: Sequence[int], coef: Poly) -> Poly:
        """Embed a polynomial in (ε, ħ) into the ring of ``weight``."""
        return coef.embed(self.nvars(weight), list(range(self.base)))

    def is_symmetric(self, P: ShuffleElt) -> bool:
        d = P.weight
        n = self.nvars(d)
        for i, di in enumerate(d):
            if di < 2:
                continue
            first = self.z_index(d, i, 0)
            swap = list(range(n))
            swap[first], swap[first + 1] = swap[first + 1], swap[first]
            if P.poly.permute(swap) != P.poly:
                return False
            cycle = list(range(n))
            for k in range(di):
                cycle[first + k] = first + (k + 1) % di
            if P.poly.permute(cycle) != P.poly:
                return False
        return True

    def vertical_degree(self, P: ShuffleElt) -> int:
        """−2(deg P − Σ_{a∈Ω} d_{s(a)} d_{t(a)}); requires a homogeneous polynomial."""
        if P.poly.is_zero():
            raise ShuffleError("zero has no degree")
        if not P.poly.is_homogeneous():
            raise ShuffleError("polynomial is not homogeneous")
        d = P.weight
        shift = sum(d[a.source] * d[a.target] for a in self.Q.arrows)
        return -2 * (P.poly.degree() - shift)

    # ---------------------------------------------------------------- product core

    def _divide_vandermonde(self, N: Poly, d: Sequence[int]) -> Poly:
        try:
            for i, di in enumerate(d):
                for a, b in combinations(range(di), 2):
                    N = N.divide_difference(self.z_index(d, i, a), self.z_index(d, i, b))
        except ArithmeticError as exc:
            raise ShuffleConsistencyError(f"symmetrized sum is not polynomial: {exc}") from None
        return N

    def _partial_vandermonde(self, nv: int, slots: Sequence[int]) -> Poly:
        out = Poly.const(nv, 1)
        for a, b in combinations(slots, 2):
            out = out * (Poly.var(nv, a) - Poly.var(nv, b))
        return out

    def shuffle_mul(self, P: ShuffleElt, R: ShuffleElt) -> ShuffleElt:
        d, e = P.weight, R.weight
        self.Q.check_dim(d, e)
        total = tuple(x + y for x, y in zip(d, e))
        nv = self.nvars(total)
        # P's variables go first within each colour, R's after them
        pos_p = list(range(self.base))
        pos_r = list(range(self.base))
        for i in range(len(d)):
            pos_p += [self.z_index(total, i, k) for k in range(d[i])]
            pos_r += [self.z_index(total, i, d[i] + k) for k in range(e[i])]
        F = P.poly.embed(nv, pos_p) * R.poly.embed(nv, pos_r)
        if F.is_zero():
            return self.zero(total)
        sign = -1 if self.Q.euler_form(d, e) % 2 else 1
        K = Poly.const(nv, sign)
        for i in range(len(d)):
            for j in range(len(d)):
                for k in range(d[i]):
                    for l in range(e[j]):
                        K = K * self._kernel_numerator(nv, i, self.z_index(total, i, k),
                                                       j, self.z_index(total, j, d[j] + l))
        G = K * F
        for i in range(len(d)):
            G = G * self._partial_vandermonde(nv, [self.z_index(total, i, k) for k in range(d[i])])
            G = G * self._partial_vandermonde(nv, [self.z_index(total, i, d[i] + k) for k in range(e[i])])
        N = self._antisymmetrize_shuffles(G, total, d)
        return ShuffleElt(total, self._divide_vandermonde(N, total))

    def _antisymmetrize_shuffles(self, G: Poly, total: Sequence[int], d: Sequence[int]) -> Poly:
        """Σ over colourwise (d_i, e_i)-shuffles of sgn(σ)·σ(G)."""
        nv = G.nvars
        per_colour = []
        for i, n in enumerate(total):
            slots = [self.z_index(total, i, k) for k in range(n)]
            options = []
            for chosen in combinations(range(n), d[i]):
                rest = [k for k in range(n) if k not in chosen]
                order = list(chosen) + rest
                options.append((_sign_of(order), [(slots[k], slots[order[k]]) for k in range(n)]))
            per_colour.append(options)
        acc: Dict[tuple, Coeff] = {}
        for combo in product(*per_colour):
            perm = list(range(nv))
            sign = 1
            for s, pairs in combo:
                sign *= s
                for src, dst in pairs:
                    perm[src] = dst
            for m, c in G.permute(perm).terms.items():
                acc[m] = acc.get(m, 0) + sign * c
        return Poly(nv, acc)

    def _antisymmetrize_full(self, G: Poly, total: Sequence[int]) -> Poly:
        """Σ over the full colourwise symmetric group of sgn(σ)·σ(G)."""
        nv = G.nvars
        per_colour = []
        for i, n in enumerate(total):
            slots = [self.z_index(total, i, k) for k in range(n)]
            per_colour.append([(_sign_of(p), [(slots[k], slots[p[k]]) for k in range(n)])
                               for p in permutations(range(n))])
        acc: Dict[tuple, Coeff] = {}
        for combo in product(*per_colour):
            perm = list(range(nv))
            sign = 1
            for s, pairs in combo:
                sign *= s
                for src, dst in pairs:
                    perm[src] = dst
            for m, c in G.permute(perm).terms.items():
                acc[m] = acc.get(m, 0) + sign * c
        return Poly(nv, acc)

    def word_numerator(self, colours: Sequence[int], F: Poly) -> Tuple[DimVector, Poly]:
        """Antisymmetrized numerator of the product of single-vertex factors.

        ``colours[a]`` is the vertex of factor ``a``; ``F`` is a polynomial in
        the target ring where factor ``a`` owns the slot returned by
        :meth:`word_slots`.  Dividing the result by the full Vandermonde gives
        the iterated shuffle product of the factors.  Numerators of words of
        the same weight may be added before dividing.
        """
        total = self.word_weight(colours)
        return total, self._antisymmetrize_full(self.word_kernel(tuple(colours)) * F, total)

    def word_kernel(self, colours: Tuple[int, ...]) -> Poly:
        """Sign times Π_{a<b} kernel numerator between factors a and b."""
        cache = self.__dict__.setdefault("_kernel_cache", {})
        if colours in cache:
            return cache[colours]
        total = self.word_weight(colours)
        slots = self.word_slots(colours)
        nv = self.nvars(total)
        sign_exp = 0
        for a, b in combinations(range(len(colours)), 2):
            sign_exp += self.Q.euler_form(self.Q.simple_root(colours[a]), self.Q.simple_root(colours[b]))
        K = Poly.const(nv, -1 if sign_exp % 2 else 1)
        for a, b in combinations(range(len(colours)), 2):
            K = K * self._kernel_numerator(nv, colours[a], slots[a], colours[b], slots[b])
        cache[colours] = K
        return K

    def word_weight(self, colours: Sequence[int]) -> DimVector:
        d = [0] * self.Q.num_vertices
        for c in colours:
            d[c] += 1
        return tuple(d)

    def word_slots(self, colours: Sequence[int]) -> List[int]:
        total = self.word_weight(colours)
        seen = [0] * self.Q.num_vertices
        slots = []
        for c in colours:
            slots.append(self.z_index(total, c, seen[c]))
            seen[c] += 1
        return slots

    def finish(self, total: Sequence[int], numerator: Poly) -> ShuffleElt:
        return ShuffleElt(tuple(total), self._divide_vandermonde(numerator, total))

    def word_product(self, letters: Sequence[Tuple[int, int]]) -> ShuffleElt:
        """x⁻_{i1,l1} ⋆ ... ⋆ x⁻_{in,ln} through a single symmetrization."""
        colours = [i for i, _ in letters]
        total = self.word_weight(colours)
        slots = self.word_slots(colours)
        nv = self.nvars(total)
        F = Poly.const(nv, 1)
        for (i, l), s in zip(letters, slots):
            F = F * Poly.var(nv, s, l)
        total, N = self.word_numerator(colours, F)
        return self.finish(total, N)

    # ---------------------------------------------------------------- tautological action

    def taut_action(self, i: int, l: int, P: ShuffleElt) -> ShuffleElt:
        """p_l(z_i) ∩ P: multiply by Σ_k z_{i,k}^l, or by d_i when l = 0."""
        if l < 0:
            raise ShuffleError("power-sum index must be nonnegative")
        d = P.weight
        if l == 0:
            return P.scale(d[i])
        nv = self.nvars(d)
        p = Poly(nv)
        for k in range(d[i]):
            p = p + Poly.var(nv, self.z_index(d, i, k), l)
        return ShuffleElt(d, P.poly * p)

    # ---------------------------------------------------------------- specialization

    def specialize_two_parameter(self, P: ShuffleElt) -> ShuffleElt:
        nv = self.nvars(P.weight)
        images = [Poly.var(nv, k) for k in range(nv)]
        for k in range(1, self.n_eps):
            images[k] = Poly.var(nv, 0)
        return ShuffleElt(P.weight, P.poly.substitute(images))


def shuffle_mul(A: ShuffleAlgebra, P: ShuffleElt, R: ShuffleElt) -> ShuffleElt:
    return A.shuffle_mul(P, R)


def random_element(A: ShuffleAlgebra, weight: Sequence[int], rng, max_degree: int = 2,
                   nterms: int = 2) -> ShuffleElt:
    """Colourwise symmetrization of a few random monomials in the z variables."""
    weight = tuple(weight)
    nv = A.nvars(weight)
    blocks = [list(range(A.z_index(weight, i, 0), A.z_index(weight, i, 0) + di))
              for i, di in enumerate(weight)]
    seed = Poly(nv)
    for _ in range(nterms):
        seed = seed + Poly.const(nv, rng.randint(-3, 3)) * Poly(nv, {tuple(
            rng.randint(0, max_degree) if v >= A.base else 0 for v in range(nv)): 1})
    total = Poly(nv)
    for perms in product(*(permutations(b) for b in blocks)):
        image = list(range(nv))
        for block, perm in zip(blocks, perms):
            for src, dst in zip(block, perm):
                image[src] = dst
        total = total + seed.permute(image)
    return A.element(weight, total)


# ---------------------------------------------------------------- serialization

def serialize(A: ShuffleAlgebra, P: ShuffleElt) -> dict:
    terms = [[list(m), str(c)] for m, c in sorted(P.poly.terms.items())]
    return {"weight": list(P.weight), "variables": A.variable_names(P.weight), "terms": terms}


def deserialize(A: ShuffleAlgebra, data: dict) -> ShuffleElt:
    weight = tuple(int(x) for x in data["weight"])
    nv = A.nvars(weight)
    terms = {}
    for m, c in data["terms"]:
        frac = Fraction(c)
        terms[tuple(int(x) for x in m)] = frac.numerator if frac.denominator == 1 else frac
    return A.element(weight, Poly(nv, terms))


def to_text(A: ShuffleAlgebra, P: ShuffleElt) -> str:
    return f"weight {list(P.weight)}: {P.poly.to_string(A.variable_names(P.weight))}"


# ---------------------------------------------------------------- relations
#
# A relation is a list of terms (coefficient, word).  A word is a list of
# (vertex, formal variable index); the coefficient is a polynomial in
# (ε, ħ, u_0, u_1, ...) with one formal variable per generating series.
# The coefficient of Π u_k^{-m_k-1} of  c(u) x_{i1}(u_{k1}) ... x_{in}(u_{kn})
# is Σ_p c_p x_{i1, m_{k1}+p_{k1}} ... x_{in, m_{kn}+p_{kn}}, and since the
# shuffle image is linear in the monomial Π z_a^{l_a}, it equals the word
# operator applied to Π_a z_a^{m_{k_a}} · c(z_{slot of each formal variable}).

Term = Tuple[Poly, List[Tuple[int, int]]]


class RelationSystem:
    def __init__(self, A: ShuffleAlgebra, nformal: int):
        self.A = A
        self.nformal = nformal
        self.nv = A.base + nformal

    def formal(self, k: int) -> Poly:
        return Poly.var(self.nv, self.A.base + k)

    def const(self, c: Coeff) -> Poly:
        return Poly.const(self.nv, c)

    def hbar(self) -> Poly:
        return self.A.hbar(self.nv)

    def eps(self, a: Arrow) -> Poly:
        return self.A.eps(self.nv, a)

    def zeta(self, i: int, j: int, t: Poly) -> Poly:
        return self.A.zeta(i, j, t)

    def evaluate(self, terms: Sequence[Term], modes: Sequence[int]) -> ShuffleElt:
        """Shuffle image of the requested coefficient of Σ terms."""
        if len(modes) != self.nformal:
            raise ShuffleError(f"expected {self.nformal} modes")
        # words sharing a colour sequence share the kernel: sum their F first
        grouped: Dict[Tuple[int, ...], Poly] = {}
        for coef, word in terms:
            colours = tuple(i for i, _ in word)
            total = self.A.word_weight(colours)
            slots = self.A.word_slots(colours)
            tnv = self.A.nvars(total)
            # formal variable k ↦ z-slot of the factor carrying it
            images = [Poly.var(tnv, v) for v in range(self.A.base)]
            slot_of = {}
            for (i, k), s in zip(word, slots):
                slot_of[k] = s
            for k in range(self.nformal):
                images.append(Poly.var(tnv, slot_of[k]) if k in slot_of else Poly(tnv))
            F = coef.substitute(images)
            for (i, k), s in zip(word, slots):
                F = F * Poly.var(tnv, s, modes[k])
            grouped[colours] = grouped[colours] + F if colours in grouped else F
        if not grouped:
            raise ShuffleError("relation has no terms")
        weights = {self.A.word_weight(c) for c in grouped}
        if len(weights) > 1:
            raise ShuffleError("relation terms have different weights")
        (total,) = weights
        N = Poly(self.A.nvars(total))
        for colours, F in grouped.items():
            if not F.is_zero():
                N = N + self.A.word_numerator(colours, F)[1]
        return self.A.finish(total, N)


def _nested_words(letters: Sequence[Tuple[int, int]], base: Tuple[int, int]) -> List[Tuple[int, List[Tuple[int, int]]]]:
    """Expand [a_1, [a_2, ..., [a_m, b]]] into signed words."""
    words: List[Tuple[int, List[Tuple[int, int]]]] = [(1, [base])]
    for a in reversed(letters):
        nxt = []
        for s, w in words:
            nxt.append((s, [a] + w))
            nxt.append((-s, w + [a]))
        words = nxt
    return words


RELATION_KINDS = ("quadratic-same", "quadratic-mixed", "cubic", "serre")


def relation_terms(A: ShuffleAlgebra, kind: str, indices: Sequence[int],
                   edge: Optional[Arrow] = None) -> Tuple[RelationSystem, List[Term]]:
    """Polynomial form of a relation of the negative half, ready for :meth:`RelationSystem.evaluate`.

    Formal variables: quadratic kinds use (u, w); cubic uses (u, v, w);
    serre uses (u_1..u_m, w).
    """
    Q = A.Q
    if kind == "quadratic-same":
        (i,) = indices
        R = RelationSystem(A, 2)
        u, w, h = R.formal(0), R.formal(1), R.hbar()
        # (u − w + ħ) x_i(u) x_i(w) ≐ (u − w − ħ) x_i(w) x_i(u)
        return R, [(u - w + h, [(i, 0), (i, 1)]), (-(u - w - h), [(i, 1), (i, 0)])]
    if kind == "quadratic-mixed":
        i, j = indices
        if i == j:
            raise ShuffleError("quadratic-mixed needs distinct vertices")
        R = RelationSystem(A, 2)
        u, w, h = R.formal(0), R.formal(1), R.hbar()
        # ζ_ij(u − w − ħ) x_i(u) x_j(w) ≐ ζ_ij(u − w) x_j(w) x_i(u)
        return R, [(R.zeta(i, j, u - w - h), [(i, 0), (j, 1)]),
                   (-R.zeta(i, j, u - w), [(j, 1), (i, 0)])]
    if kind == "cubic":
        i, j = indices
        if i == j:
            raise ShuffleError("the cubic relation is defined only for i ≠ j")
        choices = A.arrows_between(i, j)
        if edge is None:
            if not choices:
                raise ShuffleError(f"no arrow {i} → {j} in the doubled quiver")
            edge = choices[0]
        if edge.source != i or edge.target != j:
            raise ShuffleError(f"edge {edge.label} does not go from {i} to {j}")
        R = RelationSystem(A, 3)
        u, v, w, h = R.formal(0), R.formal(1), R.formal(2), R.hbar()
        ee = R.eps(edge)
        # The printed relation has denominators (v − w − ħ + ε_e) and (u − w + ε_e).
        # Multiplying through by both keeps ≐ (multiplication by a polynomial
        # maps series with vanishing negative-power coefficients to such series):
        #   ζ_ji(w−u) ζ_ji(w−v) (u−w+ε_e)          x_i(u) x_i(v) x_j(w)
        # + (u−v−ħ) ζ_ij(u−w) ζ_ji(w−v)            x_i(v) x_j(w) x_i(u)
        # + ζ_ij(v−w) ζ_ij(u−w) (v−w−ħ+ε_e)        x_j(w) x_i(u) x_i(v)  ≐ 0
        t1 = R.zeta(j, i, w - u) * R.zeta(j, i, w - v) * (u - w + ee)
        t2 = (u - v - h) * R.zeta(i, j, u - w) * R.zeta(j, i, w - v)
        t3 = R.zeta(i, j, v - w) * R.zeta(i, j, u - w) * (v - w - h + ee)
        return R, [(t1, [(i, 0), (i, 1), (j, 2)]),
                   (t2, [(i, 1), (j, 2), (i, 0)]),
                   (t3, [(j, 2), (i, 0), (i, 1)])]
    if kind == "serre":
        i, j = indices
        if i == j:
            raise ShuffleError("the Serre relation needs distinct vertices")
        m = 1 - Q.cartan_matrix()[i][j]
        R = RelationSystem(A, m + 1)
        terms: List[Term] = []
        for sigma in permutations(range(m)):
            letters = [(i, sigma[k]) for k in range(m)]
            for s, word in _nested_words(letters, (j, m)):
                terms.append((R.const(s), word))
        return R, terms
    raise ShuffleError(f"unknown relation kind {kind!r}")


def check_relation(A: ShuffleAlgebra, kind: str, indices: Sequence[int], modes: Sequence[int],
                   edge: Optional[Arrow] = None) -> Tuple[bool, Optional[ShuffleElt]]:
    """Evaluate one coefficient of a relation; returns (holds, nonzero difference or None)."""
    R, terms = relation_terms(A, kind, indices, edge)
    diff = R.evaluate(terms, modes)
    return (True, None) if diff.is_zero() else (False, diff)


def relation_instances(A: ShuffleAlgebra, max_mode: int = 2) -> List[Tuple[str, Tuple[int, ...], Tuple[int, ...], Optional[Arrow]]]:
    """Every quadratic, cubic and Serre instance with all modes ≤ max_mode."""
    Q = A.Q
    n = Q.num_vertices
    out = []
    modes2 = list(product(range(max_mode + 1), repeat=2))
    for i in range(n):
        for md in modes2:
            out.append(("quadratic-same", (i,), md, None))
    for i in range(n):
        for j in range(n):
            if i == j:
                continue
            for md in modes2:
                out.append(("quadratic-mixed", (i, j), md, None))
            for e in A.arrows_between(i, j):
                for md in product(range(max_mode + 1), repeat=3):
                    out.append(("cubic", (i, j), md, e))
            m = 1 - Q.cartan_matrix()[i][j]
            # the Serre sum is symmetric in the u-modes, so sorted tuples suffice
            for md in product(range(max_mode + 1), repeat=m):
                if list(md) != sorted(md):
                    continue
                for s in range(max_mode + 1):
                    out.append(("serre", (i, j), md + (s,), None))
    return out


# ---------------------------------------------------------------- sign twists

TwistForm = Tuple[Tuple[int, ...], ...]


def form_value(theta: TwistForm, d: Sequence[int], e: Sequence[int]) -> int:
    return sum(theta[a][b] * d[a] * e[b] for a in range(len(d)) for b in range(len(e)))


def euler_twist_form(Q: Quiver) -> TwistForm:
    n = Q.num_vertices
    return tuple(tuple(Q.euler_form(Q.simple_root(a), Q.simple_root(b)) for b in range(n)) for a in range(n))


def ade_twist_form(Q: Quiver) -> TwistForm:
    """Θ(α_i, α_j) = ⟨α_i, α_j⟩ on the finite part, with δ in the kernel on both sides."""
    data = find_delta(Q)
    n = Q.num_vertices
    Qf = Q.finite_part()

    def project(d: Sequence[int]) -> Tuple[int, ...]:
        return tuple(d[k] - d[0] * data.delta[k] for k in range(1, n))

    basis = [project(Q.simple_root(a)) for a in range(n)]
    return tuple(tuple(Qf.euler_form(basis[a], basis[b]) for b in range(n)) for a in range(n))


def is_twist(Q: Quiver, theta: TwistForm) -> bool:
    """Θ(d,e) + Θ(e,d) ≡ (d,e) mod 2 on basis pairs."""
    n = Q.num_vertices
    C = Q.cartan_matrix()
    return all((theta[a][b] + theta[b][a] - C[a][b]) % 2 == 0 for a in range(n) for b in range(n))


def twist(A: ShuffleAlgebra, theta: TwistForm, P: ShuffleElt, R: ShuffleElt) -> ShuffleElt:
    """(−1)^{Θ(|P|,|R|)} · P ⋆ R."""
    out = A.shuffle_mul(P, R)
    return -out if form_value(theta, P.weight, R.weight) % 2 else out


def coha_product(A: ShuffleAlgebra, theta: TwistForm, P: ShuffleElt, R: ShuffleElt) -> ShuffleElt:
    """Product twisted by Θ relative to the untwisted algebra.

    The shuffle product already carries (−1)^{⟨d,e⟩}, i.e. it is the
    Euler-form twist; this strips that sign and applies Θ instead.
    """
    exp = form_value(theta, P.weight, R.weight) - A.Q.euler_form(P.weight, R.weight)
    out = A.shuffle_mul(P, R)
    return -out if exp % 2 else out


def twist_sign(omega: TwistForm, gamma: Sequence[int]) -> int:
    """u_γ = (−1)^{Σ_{i<j} γ_i γ_j ω(e_i, e_j)}."""
    n = len(gamma)
    exp = sum(gamma[a] * gamma[b] * omega[a][b] for a in range(n) for b in range(a + 1, n))
    return -1 if exp % 2 else 1


def difference_form(theta: TwistForm, omega: TwistForm) -> TwistForm:
    n = len(theta)
    diff = tuple(tuple(omega[a][b] - theta[a][b] for b in range(n)) for a in range(n))
    for a in range(n):
        if diff[a][a] % 2:
            raise ShuffleError("twists have different symmetrizations (odd diagonal difference)")
        for b in range(n):
            if (diff[a][b] + diff[b][a]) % 2:
                raise ShuffleError("twists have different symmetrizations")
    return diff


def twist_iso(theta: TwistForm, omega: TwistForm, P: ShuffleElt) -> ShuffleElt:
    """Isomorphism from the Θ-twisted to the ω-twisted algebra: P ↦ u_{|P|} P."""
    diff = difference_form(theta, omega)
    return P if twist_sign(diff, P.weight) == 1 else -P
