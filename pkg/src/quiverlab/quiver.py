"""Quivers without edge loops, their lattices, Euler forms and affine root data.

Dimension vectors and coweights are plain integer tuples indexed by vertex.
For affine quivers vertex 0 is the affine vertex and ``1..e`` span the finite
part.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

import sympy
import yaml

DimVector = Tuple[int, ...]
CoweightVector = Tuple[int, ...]


class QuiverError(ValueError):
    """Malformed quiver data or an operation outside its domain."""


class QuiverParseError(QuiverError):
    def __init__(self, message: str, line: Optional[int] = None, field_name: Optional[str] = None):
        self.line = line
        self.field_name = field_name
        where = []
        if line is not None:
            where.append(f"line {line}")
        if field_name is not None:
            where.append(f"field '{field_name}'")
        prefix = ", ".join(where)
        super().__init__(f"{prefix}: {message}" if prefix else message)


@dataclass(frozen=True)
class Arrow:
    source: int
    target: int
    label: str
    starred: bool = False

    @property
    def sign(self) -> int:
        """+1 on arrows of the original orientation, -1 on starred arrows."""
        return -1 if self.starred else 1


@dataclass(frozen=True)
class Quiver:
    num_vertices: int
    arrows: Tuple[Arrow, ...]
    type_tag: Optional[str] = None

    def __post_init__(self) -> None:
        labels = set()
        for a in self.arrows:
            if a.starred:
                raise QuiverError("quiver arrows must come from the original orientation")
            if not (0 <= a.source < self.num_vertices and 0 <= a.target < self.num_vertices):
                raise QuiverError(f"arrow {a.label} has an endpoint outside 0..{self.num_vertices - 1}")
            if a.source == a.target:
                raise QuiverError(f"arrow {a.label} is an edge loop at vertex {a.source}")
            if a.label in labels:
                raise QuiverError(f"duplicate arrow label {a.label}")
            labels.add(a.label)

    @classmethod
    def from_pairs(cls, num_vertices: int, pairs: Iterable[Sequence[int]],
                   labels: Optional[Sequence[str]] = None, type_tag: Optional[str] = None) -> "Quiver":
        pairs = [tuple(p) for p in pairs]
        if labels is None:
            labels = [f"a{k}" for k in range(len(pairs))]
        arrows = tuple(Arrow(s, t, lab) for (s, t), lab in zip(pairs, labels))
        return cls(num_vertices, arrows, type_tag)

    @property
    def vertices(self) -> range:
        return range(self.num_vertices)

    def doubled_arrows(self) -> Tuple[Arrow, ...]:
        """Ω followed by the reversed arrows e*, in the same order."""
        stars = tuple(Arrow(a.target, a.source, a.label + "*", True) for a in self.arrows)
        return self.arrows + stars

    def star(self, a: Arrow) -> Arrow:
        if a.starred:
            return Arrow(a.target, a.source, a.label[:-1], False)
        return Arrow(a.target, a.source, a.label + "*", True)

    def check_dim(self, *vectors: Sequence[int]) -> None:
        for v in vectors:
            if len(v) != self.num_vertices:
                raise QuiverError(f"dimension vector {tuple(v)} does not match {self.num_vertices} vertices")

    def simple_root(self, i: int) -> DimVector:
        return tuple(1 if j == i else 0 for j in self.vertices)

    def euler_form(self, d: Sequence[int], e: Sequence[int]) -> int:
        self.check_dim(d, e)
        total = sum(x * y for x, y in zip(d, e))
        for a in self.arrows:
            total -= d[a.source] * e[a.target]
        return total

    def symmetric_form(self, d: Sequence[int], e: Sequence[int]) -> int:
        return self.euler_form(d, e) + self.euler_form(e, d)

    def cartan_matrix(self) -> Tuple[Tuple[int, ...], ...]:
        n = self.num_vertices
        return tuple(tuple(self.symmetric_form(self.simple_root(i), self.simple_root(j))
                           for j in range(n)) for i in range(n))

    def arrow_count(self, i: int, j: int) -> int:
        """Number of arrows i -> j in Ω."""
        return sum(1 for a in self.arrows if a.source == i and a.target == j)

    def full_subquiver(self, keep: Sequence[int]) -> "Quiver":
        """Full subquiver on ``keep``, relabelled to 0..len(keep)-1 in the given order."""
        index = {v: k for k, v in enumerate(keep)}
        arrows = tuple(Arrow(index[a.source], index[a.target], a.label)
                       for a in self.arrows if a.source in index and a.target in index)
        return Quiver(len(keep), arrows)

    def finite_part(self) -> "Quiver":
        return self.full_subquiver(list(range(1, self.num_vertices)))


def euler_form(Q: Quiver, d: Sequence[int], e: Sequence[int]) -> int:
    return Q.euler_form(d, e)


@dataclass(frozen=True)
class AffineData:
    delta: DimVector
    marks: DimVector
    coxeter: int
    highest_root: DimVector
    rank: int = field(default=0)


def _form_matrix(Q: Quiver) -> sympy.Matrix:
    return sympy.Matrix(Q.cartan_matrix())


def _is_positive_definite(M: sympy.Matrix) -> bool:
    n = M.shape[0]
    return all(M[:k, :k].det() > 0 for k in range(1, n + 1))


def find_delta(Q: Quiver) -> AffineData:
    """Affine root data computed from the radical of the symmetrized Euler form."""
    C = _form_matrix(Q)
    kernel = C.nullspace()
    if len(kernel) != 1:
        raise QuiverError(f"not affine: the symmetrized form has a radical of dimension {len(kernel)}")
    if Q.num_vertices < 2 or not _is_positive_definite(C[1:, 1:]):
        raise QuiverError("not affine: the form on the finite part is not positive definite")
    v = kernel[0]
    denom = sympy.ilcm(*[sympy.fraction(x)[1] for x in v])
    ints = [int(x * denom) for x in v]
    g = 0
    for x in ints:
        g = sympy.igcd(g, x)
    ints = [x // g for x in ints]
    if ints[0] < 0:
        ints = [-x for x in ints]
    if any(x <= 0 for x in ints):
        raise QuiverError("not affine: the radical generator is not positive")
    if ints[0] != 1:
        raise QuiverError("vertex 0 is not an extending vertex (its mark is not 1)")
    delta = tuple(ints)
    phi = (0,) + delta[1:]
    return AffineData(delta=delta, marks=delta, coxeter=sum(delta), highest_root=phi,
                      rank=Q.num_vertices - 1)


def is_real_root(Q: Quiver, d: Sequence[int]) -> bool:
    return all(x >= 0 for x in d) and any(d) and Q.symmetric_form(d, d) == 2


def kac_polynomial(Q: Quiver, d: Sequence[int]) -> Tuple[int, ...]:
    """Coefficients (constant term first) of Kac's polynomial of an affine quiver."""
    Q.check_dim(d)
    if any(x < 0 for x in d):
        raise QuiverError(f"dimension vector {tuple(d)} has a negative entry")
    if not any(d):
        return ()
    data = find_delta(Q)
    if Q.symmetric_form(d, d) == 2:
        return (1,)
    k = d[0]
    if k > 0 and all(x == k * r for x, r in zip(d, data.delta)):
        return (data.rank, 1)
    return ()


def positive_real_roots(Q: Quiver, max_height: int) -> List[DimVector]:
    """Brute-force enumeration of positive real roots up to a height bound.

    Starts from the simple roots and applies simple reflections that raise the
    height, which reaches every positive real root of a Kac-Moody root system.
    """
    C = Q.cartan_matrix()
    n = Q.num_vertices
    seen = set()
    queue = deque(Q.simple_root(i) for i in range(n))
    seen.update(queue)
    while queue:
        beta = queue.popleft()
        for i in range(n):
            pairing = sum(C[i][j] * beta[j] for j in range(n))
            if pairing < 0:
                new = list(beta)
                new[i] -= pairing
                new = tuple(new)
                if sum(new) <= max_height and new not in seen:
                    seen.add(new)
                    queue.append(new)
    return sorted(seen, key=lambda v: (sum(v), v))


def coweight_pairing(lam: Sequence[int], d: Sequence[int]) -> int:
    if len(lam) != len(d):
        raise QuiverError("coweight and dimension vector lengths differ")
    return sum(x * y for x, y in zip(lam, d))


def rho_check(Q: Quiver) -> CoweightVector:
    return (1,) * Q.num_vertices


def coroot(Q: Quiver, i: int) -> CoweightVector:
    """α̌_i written in the fundamental coweight basis: row i of the Cartan matrix."""
    return Q.cartan_matrix()[i]


def extend_finite_coweight(Q: Quiver, finite: Sequence[int]) -> CoweightVector:
    """Affine coweight (λ_0, λ_1..λ_e) with λ_0 fixed by (λ, δ) = 0."""
    data = find_delta(Q)
    if len(finite) != Q.num_vertices - 1:
        raise QuiverError(f"expected {Q.num_vertices - 1} finite coweight entries")
    lam0 = -sum(r * x for r, x in zip(data.delta[1:], finite))
    return (lam0,) + tuple(finite)


def slope(theta: Sequence[int], d: Sequence[int]) -> Fraction:
    if len(theta) != len(d):
        raise QuiverError("coweight and dimension vector lengths differ")
    denom = sum(d)
    if denom == 0:
        raise QuiverError("slope is undefined for a dimension vector with (ρ̌, d) = 0")
    return Fraction(coweight_pairing(theta, d), denom)


# ---------------------------------------------------------------- builtins

def _chain(n: int, start: int = 1) -> List[Tuple[int, int]]:
    return [(k, k + 1) for k in range(start, start + n - 1)]


def finite_quiver(kind: str, n: int) -> Quiver:
    """Finite ADE quiver on vertices 0..n-1 with a fixed orientation."""
    kind = kind.upper()
    if kind == "A" and n >= 1:
        pairs = _chain(n, 0)
    elif kind == "D" and n >= 4:
        pairs = _chain(n - 2, 0) + [(n - 3, n - 2), (n - 3, n - 1)]
    elif kind == "E" and n in (6, 7, 8):
        pairs = _chain(n - 1, 0) + [(2, n - 1)]
    else:
        raise QuiverError(f"unknown finite type {kind}{n}")
    return Quiver.from_pairs(n, pairs, type_tag=f"{kind}{n}")


def affine_quiver(kind: str, n: int) -> Quiver:
    """Affine ADE quiver of type X_n^(1); vertex 0 is the affine vertex."""
    kind = kind.upper()
    tag = f"{kind}{n}~"
    if kind == "A" and n == 1:
        return Quiver.from_pairs(2, [(1, 0), (1, 0)], labels=["x", "y"], type_tag=tag)
    if kind == "A" and n >= 2:
        pairs = [(k, (k + 1) % (n + 1)) for k in range(n + 1)]
    elif kind == "D" and n >= 4:
        pairs = _chain(n - 2, 1) + [(n - 2, n - 1), (n - 2, n), (0, 2)]
    elif kind == "E" and n == 6:
        pairs = _chain(5, 1) + [(3, 6), (0, 6)]
    elif kind == "E" and n == 7:
        pairs = _chain(7, 0) + [(3, 7)]
    elif kind == "E" and n == 8:
        pairs = _chain(7, 1) + [(3, 8), (7, 0)]
    else:
        raise QuiverError(f"unknown affine type {tag}")
    return Quiver.from_pairs(n + 1, pairs, type_tag=tag)


def builtin_quiver(tag: str) -> Quiver:
    """Look up a quiver by tag such as ``A1~``, ``D4~`` or ``A2``."""
    t = tag.strip()
    affine = t.endswith("~")
    core = t[:-1] if affine else t
    if len(core) < 2 or not core[1:].isdigit():
        raise QuiverError(f"unrecognised quiver tag {tag!r}")
    kind, n = core[0], int(core[1:])
    return affine_quiver(kind, n) if affine else finite_quiver(kind, n)


# ---------------------------------------------------------------- file format

def _node_line(node) -> int:
    return node.start_mark.line + 1


def _scalar_int(node, field_name: str) -> int:
    if not isinstance(node, yaml.ScalarNode):
        raise QuiverParseError("expected an integer", _node_line(node), field_name)
    try:
        return int(node.value)
    except ValueError:
        raise QuiverParseError(f"expected an integer, got {node.value!r}", _node_line(node), field_name) from None


def parse_quiver(text: str) -> Quiver:
    """Parse the YAML quiver description.

    Schema::

        vertices: 2            # integer count
        arrows: [[1, 0], [1, 0]]
        labels: [x, y]         # optional, one per arrow
        type: A1~              # optional tag

    A file holding only ``type`` loads the matching builtin quiver.
    """
    try:
        root = yaml.compose(text)
    except yaml.YAMLError as exc:
        mark = getattr(exc, "problem_mark", None)
        raise QuiverParseError(f"invalid YAML: {getattr(exc, 'problem', exc)}",
                               mark.line + 1 if mark else None) from None
    if root is None or not isinstance(root, yaml.MappingNode):
        raise QuiverParseError("top level must be a mapping", _node_line(root) if root else None)
    fields: Dict[str, object] = {}
    for key, value in root.value:
        if key.value in fields:
            raise QuiverParseError("duplicate field", _node_line(key), key.value)
        if key.value not in ("vertices", "arrows", "labels", "type"):
            raise QuiverParseError("unknown field", _node_line(key), key.value)
        fields[key.value] = value
    tag = fields["type"].value if "type" in fields else None
    if "vertices" not in fields:
        if tag is None:
            raise QuiverParseError("missing field", 1, "vertices")
        try:
            return builtin_quiver(tag)
        except QuiverError as exc:
            raise QuiverParseError(str(exc), _node_line(fields["type"]), "type") from None
    n = _scalar_int(fields["vertices"], "vertices")
    if n <= 0:
        raise QuiverParseError("vertex count must be positive", _node_line(fields["vertices"]), "vertices")
    pairs: List[Tuple[int, int]] = []
    arrows_node = fields.get("arrows")
    if arrows_node is not None:
        if not isinstance(arrows_node, yaml.SequenceNode):
            raise QuiverParseError("expected a list of [source, target] pairs", _node_line(arrows_node), "arrows")
        for item in arrows_node.value:
            if not isinstance(item, yaml.SequenceNode) or len(item.value) != 2:
                raise QuiverParseError("each arrow must be a [source, target] pair", _node_line(item), "arrows")
            pairs.append((_scalar_int(item.value[0], "arrows"), _scalar_int(item.value[1], "arrows")))
    labels = None
    if "labels" in fields:
        lnode = fields["labels"]
        if not isinstance(lnode, yaml.SequenceNode) or len(lnode.value) != len(pairs):
            raise QuiverParseError("labels must list one name per arrow", _node_line(lnode), "labels")
        labels = [str(x.value) for x in lnode.value]
    try:
        return Quiver.from_pairs(n, pairs, labels, tag)
    except QuiverError as exc:
        line = _node_line(arrows_node) if arrows_node is not None else None
        raise QuiverParseError(str(exc), line, "arrows") from None


def dump_quiver(Q: Quiver) -> str:
    data = {
        "vertices": Q.num_vertices,
        "arrows": [[a.source, a.target] for a in Q.arrows],
        "labels": [a.label for a in Q.arrows],
    }
    if Q.type_tag:
        data["type"] = Q.type_tag
    return yaml.safe_dump(data, default_flow_style=None, sort_keys=False)


def load_quiver(path: str) -> Quiver:
    with open(path, encoding="utf-8") as fh:
        return parse_quiver(fh.read())
