"""Weyl groups, extended affine Weyl groups, translations and braid words.

Group elements are canonical by their integer matrix acting on ℤI (column
vectors); words are only ever a presentation.  An extended element ``(π, w)``
acts as ``π ∘ w``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, Iterable, List, Optional, Sequence, Tuple, Union

from .quiver import CoweightVector, DimVector, Quiver, QuiverError, find_delta

Matrix = Tuple[Tuple[int, ...], ...]
Letter = Tuple[Union[int, str], int]


class WeylError(QuiverError):
    pass


class FactorizationUnavailable(WeylError):
    """The translation needs a diagram automorphism that is not available."""

    def __init__(self, message: str, action: Matrix):
        super().__init__(message)
        self.action = action


def identity_matrix(n: int) -> Matrix:
    return tuple(tuple(1 if i == j else 0 for j in range(n)) for i in range(n))


def mat_mul(A: Matrix, B: Matrix) -> Matrix:
    n = len(A)
    cols = list(zip(*B))
    return tuple(tuple(sum(a * b for a, b in zip(A[i], c)) for c in cols) for i in range(n))


def mat_apply(A: Matrix, v: Sequence[int]) -> DimVector:
    return tuple(sum(a * x for a, x in zip(row, v)) for row in A)


def permutation_matrix(perm: Sequence[int]) -> Matrix:
    """Matrix sending α_j to α_{perm[j]}."""
    n = len(perm)
    return tuple(tuple(1 if perm[j] == i else 0 for j in range(n)) for i in range(n))


def invert_permutation(perm: Sequence[int]) -> Tuple[int, ...]:
    inv = [0] * len(perm)
    for j, p in enumerate(perm):
        inv[p] = j
    return tuple(inv)


def compose_permutations(p: Sequence[int], q: Sequence[int]) -> Tuple[int, ...]:
    """p ∘ q."""
    return tuple(p[q[j]] for j in range(len(q)))


@dataclass(frozen=True)
class WeylElt:
    action: Matrix

    def __mul__(self, other: "WeylElt") -> "WeylElt":
        return WeylElt(mat_mul(self.action, other.action))

    def __call__(self, d: Sequence[int]) -> DimVector:
        return mat_apply(self.action, d)

    def conjugate_by(self, perm: Sequence[int]) -> "WeylElt":
        """π⁻¹ w π."""
        P = permutation_matrix(perm)
        Pinv = permutation_matrix(invert_permutation(perm))
        return WeylElt(mat_mul(Pinv, mat_mul(self.action, P)))


def identity(Q: Quiver) -> WeylElt:
    return WeylElt(identity_matrix(Q.num_vertices))


def simple_reflection(Q: Quiver, i: int) -> WeylElt:
    """d ↦ d − (α̌_i, d) α_i."""
    C = Q.cartan_matrix()
    n = Q.num_vertices
    rows = []
    for r in range(n):
        if r == i:
            rows.append(tuple((1 if c == r else 0) - C[i][c] for c in range(n)))
        else:
            rows.append(tuple(1 if c == r else 0 for c in range(n)))
    return WeylElt(tuple(rows))


def word_element(Q: Quiver, word: Iterable[int]) -> WeylElt:
    w = identity(Q)
    for i in word:
        w = w * simple_reflection(Q, i)
    return w


@dataclass(frozen=True)
class ExtWeylElt:
    auto: Tuple[int, ...]
    weyl: WeylElt

    @property
    def action(self) -> Matrix:
        return mat_mul(permutation_matrix(self.auto), self.weyl.action)

    def __mul__(self, other: "ExtWeylElt") -> "ExtWeylElt":
        return ExtWeylElt(compose_permutations(self.auto, other.auto),
                          self.weyl.conjugate_by(other.auto) * other.weyl)

    def __call__(self, d: Sequence[int]) -> DimVector:
        return mat_apply(self.action, d)


def validate_automorphism(Q: Quiver, perm: Sequence[int]) -> Tuple[int, ...]:
    perm = tuple(perm)
    n = Q.num_vertices
    if sorted(perm) != list(range(n)):
        raise WeylError(f"{perm} is not a permutation of the vertices")
    C = Q.cartan_matrix()
    for i in range(n):
        for j in range(n):
            if C[perm[i]][perm[j]] != C[i][j]:
                raise WeylError(f"{perm} does not preserve the Cartan matrix")
    return perm


def automorphism_group(Q: Quiver, generators: Optional[Dict[str, Sequence[int]]] = None
                       ) -> Dict[str, Tuple[int, ...]]:
    """Named diagram automorphisms closed under composition.

    Without ``generators``, type A_n^(1) ships the rotations ``rot1..rotn``
    (``j ↦ j+k mod n+1``); other quivers get only the identity.
    """
    n = Q.num_vertices
    ident = tuple(range(n))
    group: Dict[str, Tuple[int, ...]] = {"id": ident}
    if generators is None:
        tag = Q.type_tag or ""
        if tag.startswith("A") and tag.endswith("~"):
            for k in range(1, n):
                group[f"rot{k}"] = validate_automorphism(Q, tuple((j + k) % n for j in range(n)))
        return group
    gens = {name: validate_automorphism(Q, p) for name, p in generators.items()}
    group.update(gens)
    frontier = list(gens.items())
    while frontier:
        new = []
        for name, p in frontier:
            for gname, g in gens.items():
                q = compose_permutations(g, p)
                if q not in group.values():
                    qname = f"{gname}.{name}"
                    group[qname] = q
                    new.append((qname, q))
        frontier = new
    return group


def _auto_name(group: Dict[str, Tuple[int, ...]], perm: Tuple[int, ...]) -> Optional[str]:
    for name, p in group.items():
        if p == perm:
            return name
    return None


class BraidWord:
    """Word in braid generators ``T_i`` and diagram automorphisms, freely reduced."""

    __slots__ = ("letters",)

    def __init__(self, letters: Iterable[Letter] = ()):
        out: List[Letter] = []
        for gen, e in letters:
            if e not in (1, -1):
                raise WeylError(f"exponent {e} must be ±1")
            if gen == "id":
                continue
            if out and out[-1][0] == gen and out[-1][1] == -e:
                out.pop()
            else:
                out.append((gen, e))
        self.letters: Tuple[Letter, ...] = tuple(out)

    def __len__(self) -> int:
        return len(self.letters)

    def __eq__(self, other) -> bool:
        return isinstance(other, BraidWord) and self.letters == other.letters

    def __hash__(self) -> int:
        return hash(self.letters)

    def __repr__(self) -> str:
        return f"BraidWord({list(self.letters)!r})"

    def __mul__(self, other: "BraidWord") -> "BraidWord":
        return BraidWord(self.letters + other.letters)

    def inverse(self) -> "BraidWord":
        return BraidWord((g, -e) for g, e in reversed(self.letters))

    def generator_indices(self) -> List[int]:
        return [g for g, _ in self.letters if isinstance(g, int)]

    def serialize(self) -> List[Union[int, str]]:
        out: List[Union[int, str]] = []
        for g, e in self.letters:
            if isinstance(g, int):
                out.append(e * (g + 1))
            else:
                out.append(g if e == 1 else f"{g}^-1")
        return out

    @classmethod
    def parse(cls, tokens: Iterable[Union[int, str]]) -> "BraidWord":
        letters: List[Letter] = []
        for tok in tokens:
            if isinstance(tok, int) or (isinstance(tok, str) and tok.lstrip("+-").isdigit()):
                k = int(tok)
                if k == 0:
                    raise WeylError("braid token 0 is not allowed; generators are ±(i+1)")
                letters.append((abs(k) - 1, 1 if k > 0 else -1))
            elif tok.endswith("^-1"):
                letters.append((tok[:-3], -1))
            else:
                letters.append((tok, 1))
        return cls(letters)


def weyl_image(Q: Quiver, word: BraidWord, autos: Optional[Dict[str, Tuple[int, ...]]] = None) -> Matrix:
    group = autos if autos is not None else automorphism_group(Q)
    M = identity_matrix(Q.num_vertices)
    for g, e in word.letters:
        if isinstance(g, int):
            M = mat_mul(M, simple_reflection(Q, g).action)
        else:
            if g not in group:
                raise WeylError(f"unknown automorphism {g!r}")
            p = group[g] if e == 1 else invert_permutation(group[g])
            M = mat_mul(M, permutation_matrix(p))
    return M


def _descent(Q: Quiver, M: Matrix, bound: int) -> Tuple[List[int], Matrix]:
    """Strip right descents (smallest index first); returns the letters and the leftover matrix."""
    n = Q.num_vertices
    reflections = [simple_reflection(Q, i).action for i in range(n)]
    record: List[int] = []
    while True:
        for i in range(n):
            col = [M[r][i] for r in range(n)]
            if any(x < 0 for x in col):
                M = mat_mul(M, reflections[i])
                record.append(i)
                break
        else:
            return record, M
        if len(record) > bound:
            raise WeylError(f"descent exceeded the length bound {bound}; element is malformed")


def _leftover_permutation(M: Matrix) -> Optional[Tuple[int, ...]]:
    n = len(M)
    perm = [None] * n
    for j in range(n):
        col = [M[r][j] for r in range(n)]
        if sorted(col) != [0] * (n - 1) + [1]:
            return None
        perm[j] = col.index(1)
    return tuple(perm)


def reduced_word(Q: Quiver, w: Union[WeylElt, ExtWeylElt, Matrix],
                 autos: Optional[Dict[str, Tuple[int, ...]]] = None,
                 bound: int = 10_000) -> BraidWord:
    """Minimal-length word: one automorphism letter (if needed) followed by simple reflections."""
    M = w if isinstance(w, tuple) else w.action
    record, rest = _descent(Q, M, bound)
    perm = _leftover_permutation(rest)
    if perm is None:
        raise WeylError("element does not lie in the extended Weyl group")
    letters: List[Letter] = []
    if perm != tuple(range(Q.num_vertices)):
        group = autos if autos is not None else automorphism_group(Q)
        name = _auto_name(group, perm)
        if name is None:
            raise FactorizationUnavailable(f"automorphism {perm} is not available", M)
        letters.append((name, 1))
    letters.extend((i, 1) for i in reversed(record))
    return BraidWord(letters)


def length(Q: Quiver, w: Union[WeylElt, ExtWeylElt, Matrix]) -> int:
    """Number of simple reflections in a reduced word (automorphisms have length 0)."""
    M = w if isinstance(w, tuple) else w.action
    return len(_descent(Q, M, 10_000)[0])


def translation_action(Q: Quiver, lam: CoweightVector) -> Matrix:
    """Matrix of d ↦ d − (λ, d) δ."""
    delta = find_delta(Q).delta
    n = Q.num_vertices
    if len(lam) != n:
        raise WeylError(f"coweight needs {n} entries")
    if sum(l * r for l, r in zip(lam, delta)) != 0:
        raise WeylError("coweight is not finite: (λ, δ) ≠ 0")
    return tuple(tuple((1 if r == c else 0) - delta[r] * lam[c] for c in range(n)) for r in range(n))


def translation_element(Q: Quiver, lam: CoweightVector,
                        autos: Optional[Dict[str, Tuple[int, ...]]] = None) -> ExtWeylElt:
    """t_λ factored as (automorphism, affine Weyl element)."""
    M = translation_action(Q, lam)
    record, rest = _descent(Q, M, 10_000)
    perm = _leftover_permutation(rest)
    if perm is None:
        raise WeylError("translation is not in the extended Weyl group")
    group = autos if autos is not None else automorphism_group(Q)
    if _auto_name(group, perm) is None:
        raise FactorizationUnavailable(f"t_λ needs the automorphism {perm}, which is not available", M)
    # M = P · s_{i_k} ... s_{i_1}, so the Weyl part is the reversed record
    weyl = word_element(Q, reversed(record))
    return ExtWeylElt(perm, weyl)


def _two_rho_finite(Q: Quiver) -> CoweightVector:
    delta = find_delta(Q).delta
    finite = [2] * (Q.num_vertices - 1)
    return (-sum(r * x for r, x in zip(delta[1:], finite)),) + tuple(finite)


def braid_L_lambda(Q: Quiver, lam: CoweightVector,
                   autos: Optional[Dict[str, Tuple[int, ...]]] = None,
                   shift: Optional[int] = None) -> BraidWord:
    """L_λ = T_{λ1} T_{λ2}⁻¹ with λ = λ1 − λ2 and λ2 = N·2ρ̌_f dominant.

    ``shift`` overrides N (it must keep λ1 dominant), which gives different
    decompositions of the same λ.
    """
    n_needed = max(0, -min(lam[1:], default=0))
    N = (n_needed + 1) // 2 if shift is None else shift
    two_rho = _two_rho_finite(Q)
    lam2 = tuple(N * x for x in two_rho)
    lam1 = tuple(a + b for a, b in zip(lam, lam2))
    if any(x < 0 for x in lam1[1:]):
        raise WeylError(f"shift {N} does not make λ + λ2 dominant")
    w1 = reduced_word(Q, translation_action(Q, lam1), autos)
    w2 = reduced_word(Q, translation_action(Q, lam2), autos)
    return w1 * w2.inverse()


def inversion_count(Q: Quiver, w: Matrix, roots: Sequence[DimVector]) -> int:
    """Number of listed positive roots sent to negative roots."""
    return sum(1 for beta in roots if any(x < 0 for x in mat_apply(w, beta)))
