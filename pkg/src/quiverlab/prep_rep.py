"""Representations of the preprojective algebra and reflection functors.

A ``PiRep`` stores one rational matrix per arrow of the doubled quiver,
keyed by arrow label (``x`` and ``x*``).  The preprojective relation at a
vertex i reads Σ_{t(e)=i} ε(e) x_e x_{e*} = 0 with ε = +1 on Ω and −1 on Ω*.

At a vertex i we use Ṽ_i = ⊕_{t(e)=i} V_{s(e)} (summands in doubled-arrow
order), the map ^{(i)}x = Σ ε(e) x_e : Ṽ_i → V_i and x^{(i)} = ⊕ x_{e*} : V_i → Ṽ_i.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple, Union

import sympy
import yaml

from .quiver import Arrow, DimVector, Quiver, QuiverError, QuiverParseError

Matrix = sympy.ImmutableMatrix


class RepError(QuiverError):
    pass


def _zeros(r: int, c: int) -> Matrix:
    return sympy.ImmutableMatrix.zeros(r, c)


@dataclass(frozen=True)
class PiRep:
    quiver: Quiver
    dim: DimVector
    maps: Dict[str, Matrix]

    def __post_init__(self) -> None:
        self.quiver.check_dim(self.dim)
        if any(x < 0 for x in self.dim):
            raise RepError("dimensions must be nonnegative")
        for a in self.quiver.doubled_arrows():
            m = self.maps.get(a.label)
            if m is None:
                raise RepError(f"missing matrix for arrow {a.label}")
            if m.shape != (self.dim[a.target], self.dim[a.source]):
                raise RepError(f"arrow {a.label} needs shape {(self.dim[a.target], self.dim[a.source])}, "
                               f"got {m.shape}")
        bad = relation_defect(self)
        if bad is not None:
            raise RepError(f"preprojective relation fails at vertex {bad}")

    @property
    def total_dim(self) -> int:
        return sum(self.dim)


def make_rep(Q: Quiver, dim: Sequence[int], maps: Dict[str, Sequence[Sequence[Union[int, str, Fraction]]]]) -> PiRep:
    """Build a PiRep from nested lists; missing arrows default to zero maps."""
    dim = tuple(dim)
    out: Dict[str, Matrix] = {}
    for a in Q.doubled_arrows():
        shape = (dim[a.target], dim[a.source])
        if a.label in maps:
            rows = [list(row) for row in maps[a.label]]
            if shape[0] * shape[1] == 0:
                out[a.label] = _zeros(*shape)
                continue
            if len(rows) != shape[0] or any(len(row) != shape[1] for row in rows):
                raise RepError(f"arrow {a.label} needs a {shape[0]}x{shape[1]} matrix")
            out[a.label] = sympy.ImmutableMatrix([[sympy.Rational(str(x)) for x in row] for row in rows])
        else:
            out[a.label] = _zeros(*shape)
    unknown = set(maps) - {a.label for a in Q.doubled_arrows()}
    if unknown:
        raise RepError(f"unknown arrows {sorted(unknown)}")
    return PiRep(Q, dim, out)


def relation_block(Q: Quiver, dim: Sequence[int], maps: Dict[str, Matrix], i: int) -> Matrix:
    total = _zeros(dim[i], dim[i])
    for a in Q.doubled_arrows():
        if a.target == i:
            total = total + a.sign * maps[a.label] * maps[Q.star(a).label]
    return total


def relation_defect(M: PiRep) -> Optional[int]:
    for i in M.quiver.vertices:
        if not relation_block(M.quiver, M.dim, M.maps, i).is_zero_matrix:
            return i
    return None


# ---------------------------------------------------------------- nilpotency

def _column_space(A: Matrix) -> Matrix:
    cols = A.columnspace()
    if not cols:
        return _zeros(A.shape[0], 0)
    return sympy.ImmutableMatrix(sympy.Matrix.hstack(*cols))


def is_nilpotent(M: PiRep) -> bool:
    """Descending chain U_{k+1} = Σ_e x_e(U_k) reaches 0 within total-dim steps."""
    Q = M.quiver
    spaces = [sympy.ImmutableMatrix.eye(d) if d else _zeros(0, 0) for d in M.dim]
    for _ in range(M.total_dim + 1):
        if all(s.shape[1] == 0 for s in spaces):
            return True
        new = []
        for i in Q.vertices:
            blocks = [M.maps[a.label] * spaces[a.source] for a in Q.doubled_arrows()
                      if a.target == i and spaces[a.source].shape[1] and M.dim[i]]
            new.append(_column_space(sympy.Matrix.hstack(*blocks)) if blocks else _zeros(M.dim[i], 0))
        spaces = new
    return all(s.shape[1] == 0 for s in spaces)


def nilpotent_by_paths(M: PiRep) -> bool:
    """Brute force: every path of length total_dim acts by zero."""
    Q = M.quiver
    arrows = Q.doubled_arrows()
    # (end vertex, matrix of the path) for every path of the current length
    paths: List[Tuple[int, Matrix]] = [(i, sympy.ImmutableMatrix.eye(M.dim[i])) for i in Q.vertices]
    for _ in range(M.total_dim):
        paths = [(a.target, M.maps[a.label] * m) for end, m in paths for a in arrows
                 if a.source == end and not m.is_zero_matrix]
    return all(m.is_zero_matrix for _, m in paths)


# ---------------------------------------------------------------- local maps at a vertex

def incoming(Q: Quiver, i: int) -> List[Arrow]:
    return [a for a in Q.doubled_arrows() if a.target == i]


def in_map(M: PiRep, i: int) -> Matrix:
    """^{(i)}x : Ṽ_i → V_i."""
    blocks = [a.sign * M.maps[a.label] for a in incoming(M.quiver, i)]
    if not blocks:
        return _zeros(M.dim[i], 0)
    return sympy.ImmutableMatrix(sympy.Matrix.hstack(*blocks))


def out_map(M: PiRep, i: int) -> Matrix:
    """x^{(i)} : V_i → Ṽ_i."""
    blocks = [M.maps[M.quiver.star(a).label] for a in incoming(M.quiver, i)]
    if not blocks:
        return _zeros(0, M.dim[i])
    return sympy.ImmutableMatrix(sympy.Matrix.vstack(*blocks))


@dataclass(frozen=True)
class TorsionFlags:
    in_T: bool
    in_F: bool


def torsion_membership(M: PiRep, i: int) -> TorsionFlags:
    return TorsionFlags(in_T=in_map(M, i).rank() == M.dim[i],
                        in_F=out_map(M, i).rank() == M.dim[i])


def _replace_vertex(M: PiRep, i: int, new_dim: int, new_in: Matrix, new_out: Matrix) -> PiRep:
    """Rebuild M with V_i of size new_dim; new_in: Ṽ_i → V_i', new_out: V_i' → Ṽ_i."""
    Q = M.quiver
    dim = tuple(new_dim if j == i else d for j, d in enumerate(M.dim))
    maps = dict(M.maps)
    col = 0
    for a in incoming(Q, i):
        width = M.dim[a.source]
        maps[a.label] = sympy.ImmutableMatrix(a.sign * new_in[:, col:col + width])
        maps[Q.star(a).label] = sympy.ImmutableMatrix(new_out[col:col + width, :])
        col += width
    try:
        return PiRep(Q, dim, maps)
    except RepError as exc:
        raise RepError(f"internal error: reflected module is invalid ({exc})") from exc


def reflect(M: PiRep, i: int, direction: str = "S") -> PiRep:
    """S_i replaces V_i by ker(^{(i)}x); S'_i replaces it by coker(x^{(i)})."""
    X_in, X_out = in_map(M, i), out_map(M, i)
    width = X_in.shape[1]
    composite = X_out * X_in  # Ṽ_i → Ṽ_i
    if direction == "S":
        kernel = X_in.nullspace() if width else []
        K = sympy.ImmutableMatrix(sympy.Matrix.hstack(*kernel)) if kernel else _zeros(width, 0)
        # composite lands in ker(^{(i)}x); express it in the kernel basis
        if K.shape[1]:
            coords = (K.T * K).inv() * K.T * composite
        else:
            coords = _zeros(0, width)
        return _replace_vertex(M, i, K.shape[1], sympy.ImmutableMatrix(coords), K)
    if direction in ("S'", "Sp", "S_prime"):
        image = _column_space(X_out) if X_out.shape[1] and width else _zeros(width, 0)
        comp = _complement(image, width)
        basis = sympy.Matrix.hstack(image, comp) if width else sympy.Matrix(0, 0, [])
        if width:
            inv = basis.inv()
            proj = sympy.ImmutableMatrix(inv[image.shape[1]:, :])
        else:
            proj = _zeros(0, 0)
        induced = sympy.ImmutableMatrix(composite * comp) if width else _zeros(0, 0)
        return _replace_vertex(M, i, comp.shape[1], proj, induced)
    raise RepError(f"unknown direction {direction!r}; use S or S'")


def _complement(image: Matrix, n: int) -> Matrix:
    """Standard basis vectors completing the columns of ``image`` to a basis."""
    chosen = sympy.Matrix(image) if image.shape[1] else sympy.Matrix.zeros(n, 0)
    extra = []
    for k in range(n):
        e = sympy.Matrix.zeros(n, 1)
        e[k] = 1
        trial = sympy.Matrix.hstack(chosen, e)
        if trial.rank() > chosen.rank():
            chosen = trial
            extra.append(e)
    return sympy.ImmutableMatrix(sympy.Matrix.hstack(*extra)) if extra else _zeros(n, 0)


def reflect_dim(Q: Quiver, i: int, d: Sequence[int]) -> DimVector:
    C = Q.cartan_matrix()
    pairing = sum(C[i][j] * x for j, x in enumerate(d))
    return tuple(x - pairing if j == i else x for j, x in enumerate(d))


# ---------------------------------------------------------------- isomorphism

def hom_space(M: PiRep, N: PiRep) -> List[List[Matrix]]:
    """Basis of Hom(M, N) as lists of per-vertex matrices."""
    Q = M.quiver
    shapes = [(N.dim[i], M.dim[i]) for i in Q.vertices]
    offsets, total = [], 0
    for r, c in shapes:
        offsets.append(total)
        total += r * c
    if total == 0:
        return []
    symbols = sympy.symbols(f"u0:{total}")
    phis = [sympy.Matrix(r, c, symbols[o:o + r * c]) for (r, c), o in zip(shapes, offsets)]
    equations = []
    for a in Q.doubled_arrows():
        diff = phis[a.target] * M.maps[a.label] - N.maps[a.label] * phis[a.source]
        equations.extend(diff)
    if equations:
        A, _ = sympy.linear_eq_to_matrix(equations, symbols)
        null = A.nullspace()
    else:
        null = [sympy.Matrix.eye(total)[:, k] for k in range(total)]
    basis = []
    for v in null:
        basis.append([sympy.ImmutableMatrix(r, c, list(v[o:o + r * c])) for (r, c), o in zip(shapes, offsets)])
    return basis


def are_isomorphic(M: PiRep, N: PiRep, seed: int = 0, tries: int = 4,
                   max_dim: int = 6) -> Union[bool, str]:
    """True/False for total dimension ≤ max_dim, otherwise "undecided".

    An isomorphism exists iff the determinant of a generic Hom element is a
    nonzero polynomial, which random integer points detect with failure
    probability at most (dim / 10^6) per try.
    """
    if M.dim != N.dim:
        return False
    if M.total_dim > max_dim:
        return "undecided"
    if M.total_dim == 0:
        return True
    basis = hom_space(M, N)
    if not basis:
        return False
    rng = random.Random(seed)
    for _ in range(tries):
        coeffs = [rng.randint(-10**6, 10**6) for _ in basis]
        ok = True
        for i in M.quiver.vertices:
            if M.dim[i] == 0:
                continue
            phi = sum((c * b[i] for c, b in zip(coeffs, basis)), _zeros(M.dim[i], M.dim[i]))
            if phi.det() == 0:
                ok = False
                break
        if ok:
            return True
    return False


# ---------------------------------------------------------------- random modules

def random_nilpotent(Q: Quiver, dim: Sequence[int], rng: random.Random, levels: int = 3,
                     entry_range: int = 3) -> PiRep:
    """Random nilpotent Π_Q-module.

    Each basis vector gets a level; every map strictly lowers the level, so
    the module is nilpotent by construction.  The Ω maps are random; the Ω*
    maps are a random solution of the (linear in x_{e*}) preprojective relation.
    """
    dim = tuple(dim)
    lev = [[rng.randrange(levels) for _ in range(d)] for d in dim]

    def allowed(a: Arrow) -> List[Tuple[int, int]]:
        return [(r, c) for r in range(dim[a.target]) for c in range(dim[a.source])
                if lev[a.target][r] < lev[a.source][c]]

    maps: Dict[str, Matrix] = {}
    for a in Q.arrows:
        m = sympy.zeros(dim[a.target], dim[a.source])
        for r, c in allowed(a):
            m[r, c] = rng.randint(-entry_range, entry_range)
        maps[a.label] = sympy.ImmutableMatrix(m)
    star_vars = []
    star_mats: Dict[str, sympy.Matrix] = {}
    for a in Q.arrows:
        s = Q.star(a)
        m = sympy.zeros(dim[s.target], dim[s.source])
        for r, c in allowed(s):
            v = sympy.Symbol(f"w{len(star_vars)}")
            star_vars.append(v)
            m[r, c] = v
        star_mats[s.label] = m
    all_maps = {**maps, **star_mats}
    equations = []
    for i in Q.vertices:
        equations.extend(relation_block(Q, dim, all_maps, i))
    equations = [e for e in equations if e != 0]
    values: Dict[sympy.Symbol, sympy.Rational] = {}
    if star_vars:
        if equations:
            A, _ = sympy.linear_eq_to_matrix(equations, star_vars)
            null = A.nullspace()
        else:
            null = [sympy.Matrix.eye(len(star_vars))[:, k] for k in range(len(star_vars))]
        vec = sympy.zeros(len(star_vars), 1)
        for v in null:
            vec += rng.randint(-entry_range, entry_range) * v
        values = dict(zip(star_vars, vec))
    for label, m in star_mats.items():
        maps[label] = sympy.ImmutableMatrix(m.subs(values)) if values else sympy.ImmutableMatrix(m)
    return PiRep(Q, dim, maps)


def random_in_torsion(Q: Quiver, i: int, max_dim: Sequence[int], rng: random.Random,
                      attempts: int = 1000) -> PiRep:
    """Rejection-sample a random nilpotent module lying in T^{s_i}."""
    for _ in range(attempts):
        dim = tuple(rng.randint(0, m) for m in max_dim)
        if not any(dim):
            continue
        M = random_nilpotent(Q, dim, rng)
        if torsion_membership(M, i).in_T:
            return M
    raise RepError(f"no module in T^(s_{i}) found in {attempts} attempts")


# ---------------------------------------------------------------- text format

def dump_rep(M: PiRep) -> str:
    data = {"dim": list(M.dim),
            "maps": {label: [[str(x) for x in m.row(r)] for r in range(m.rows)]
                     for label, m in M.maps.items()}}
    return yaml.safe_dump(data, sort_keys=False, default_flow_style=None)


def parse_rep(Q: Quiver, text: str) -> PiRep:
    try:
        data = yaml.safe_load(text)
    except yaml.YAMLError as exc:
        mark = getattr(exc, "problem_mark", None)
        raise QuiverParseError(str(exc), line=(mark.line + 1) if mark else None) from exc
    if not isinstance(data, dict) or "dim" not in data:
        raise QuiverParseError("module file needs a 'dim' field", field_name="dim")
    maps = data.get("maps") or {}
    if not isinstance(maps, dict):
        raise QuiverParseError("'maps' must be a mapping from arrow label to matrix", field_name="maps")
    try:
        return make_rep(Q, [int(x) for x in data["dim"]], maps)
    except (TypeError, ValueError) as exc:
        raise QuiverParseError(f"bad module data: {exc}", field_name="maps") from exc
