"""Finite simplicial complexes, integer chains, weights and boundary operators.

Simplices are stored as strictly increasing vertex tuples; the canonical
orientation of a simplex is its increasing vertex order. Within each
dimension a simplex id is its lexicographic rank.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from numbers import Rational
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple

Simplex = Tuple[int, ...]


class ComplexError(ValueError):
    """Malformed complex, chain or subcomplex."""


def faces(simplex: Simplex) -> List[Simplex]:
    """Codimension-one faces, face i omits vertex i."""
    return [simplex[:i] + simplex[i + 1:] for i in range(len(simplex))]


@dataclass(frozen=True)
class SimplicialComplex:
    simplices: Tuple[Tuple[Simplex, ...], ...]
    vertex_labels: Tuple[int, ...] = ()
    coordinates: Optional[Tuple[Tuple[Fraction, ...], ...]] = None
    _index: Tuple[Dict[Simplex, int], ...] = field(default=(), repr=False, compare=False)

    def __post_init__(self):
        if not self._index:
            object.__setattr__(
                self, "_index", tuple({s: i for i, s in enumerate(ss)} for ss in self.simplices)
            )
        if not self.vertex_labels:
            object.__setattr__(self, "vertex_labels", tuple(range(self.vertex_count)))

    @property
    def dim(self) -> int:
        return len(self.simplices) - 1

    @property
    def vertex_count(self) -> int:
        return len(self.simplices[0]) if self.simplices else 0

    def count(self, n: int) -> int:
        if 0 <= n <= self.dim:
            return len(self.simplices[n])
        return 0

    def simplex(self, n: int, idx: int) -> Simplex:
        return self.simplices[n][idx]

    def index(self, simplex: Sequence[int]) -> int:
        s = tuple(sorted(simplex))
        try:
            return self._index[len(s) - 1][s]
        except (IndexError, KeyError):
            raise ComplexError(f"simplex {s} is not in the complex") from None

    def __contains__(self, simplex) -> bool:
        s = tuple(sorted(simplex))
        n = len(s) - 1
        return 0 <= n <= self.dim and s in self._index[n]

    def top_simplices(self) -> List[Simplex]:
        """Maximal simplices, in dimension then id order."""
        covered = set()
        for n in range(self.dim, 0, -1):
            for s in self.simplices[n]:
                covered.update(faces(s))
        return [s for ss in self.simplices for s in ss if s not in covered]

    def cofaces(self, n: int) -> List[List[int]]:
        """For each (n-1)-simplex, the ids of n-simplices containing it."""
        out: List[List[int]] = [[] for _ in range(self.count(n - 1))]
        idx = self._index[n - 1]
        for j, s in enumerate(self.simplices[n]):
            for f in faces(s):
                out[idx[f]].append(j)
        return out

    def euler_characteristic(self) -> int:
        return sum((-1) ** n * len(ss) for n, ss in enumerate(self.simplices))


def build_complex(top_simplices: Iterable[Sequence[int]], coordinates=None) -> SimplicialComplex:
    """Face closure of the given simplices.

    Vertex labels may be arbitrary non-negative integers; they are compacted
    to ``0..V-1`` in increasing order and the original labels recorded in
    ``vertex_labels``. ``coordinates`` maps an original label to a point.
    """
    seen = set()
    tops = []
    for raw in top_simplices:
        s = tuple(sorted(int(v) for v in raw))
        if not s:
            raise ComplexError("empty simplex")
        if len(set(s)) != len(s):
            raise ComplexError(f"simplex {tuple(raw)} repeats a vertex")
        if s[0] < 0:
            raise ComplexError(f"simplex {tuple(raw)} has a negative vertex")
        if s in seen:
            raise ComplexError(f"duplicate top simplex {s}")
        seen.add(s)
        tops.append(s)
    labels = sorted({v for s in tops for v in s})
    relabel = {v: i for i, v in enumerate(labels)}
    dim = max((len(s) - 1 for s in tops), default=-1)
    layers: List[set] = [set() for _ in range(dim + 1)]
    for s in tops:
        s = tuple(relabel[v] for v in s)
        layers[len(s) - 1].add(s)
    for n in range(dim, 0, -1):
        for s in layers[n]:
            layers[n - 1].update(faces(s))
    coords = None
    if coordinates is not None:
        if isinstance(coordinates, Mapping):
            coords = tuple(tuple(Fraction(x) for x in coordinates[v]) for v in labels)
        else:
            coords = tuple(tuple(Fraction(x) for x in coordinates[v]) for v in labels)
    return SimplicialComplex(
        tuple(tuple(sorted(layer)) for layer in layers), tuple(labels), coords
    )


def cone(X: SimplicialComplex) -> SimplicialComplex:
    """Cone on X with a new apex vertex labelled after all existing ones."""
    apex = X.vertex_count
    tops = [s + (apex,) for ss in X.simplices for s in ss]
    return build_complex(tops)


# --- chains and weights -----------------------------------------------------

def _normalize(v):
    if isinstance(v, Fraction) and v.denominator == 1:
        return int(v.numerator)
    if isinstance(v, bool) or not isinstance(v, Rational):
        raise ComplexError(f"chain coefficient {v!r} is not rational")
    return v


@dataclass(frozen=True)
class Chain:
    """Sparse chain: simplex id -> nonzero coefficient.

    Coefficients are integers for genuine chains; fractional values only
    appear as non-integral LP vertices and are flagged by ``is_integral``.
    """

    dim: int
    coefficients: Mapping[int, object] = field(default_factory=dict)

    def __post_init__(self):
        clean = {int(k): _normalize(v) for k, v in self.coefficients.items() if v != 0}
        object.__setattr__(self, "coefficients", dict(sorted(clean.items())))

    @classmethod
    def from_dense(cls, dim: int, values: Sequence) -> "Chain":
        return cls(dim, {i: v for i, v in enumerate(values) if v != 0})

    @classmethod
    def from_simplices(cls, X: SimplicialComplex, terms) -> "Chain":
        """``terms`` is an iterable of (vertex tuple, coefficient).

        A vertex tuple given out of increasing order contributes with the
        sign of the sorting permutation.
        """
        coeffs: Dict[int, object] = {}
        dim = None
        for verts, coef in terms:
            verts = tuple(verts)
            if dim is None:
                dim = len(verts) - 1
            elif len(verts) - 1 != dim:
                raise ComplexError("mixed dimensions in chain")
            idx = X.index(verts)
            coeffs[idx] = coeffs.get(idx, 0) + _perm_sign(verts) * coef
        if dim is None:
            raise ComplexError("cannot infer dimension of an empty chain")
        return cls(dim, coeffs)

    def __bool__(self):
        return bool(self.coefficients)

    def __eq__(self, other):
        return (
            isinstance(other, Chain)
            and self.dim == other.dim
            and self.coefficients == other.coefficients
        )

    def __hash__(self):
        return hash((self.dim, tuple(self.coefficients.items())))

    def __add__(self, other: "Chain") -> "Chain":
        self._check(other)
        out = dict(self.coefficients)
        for k, v in other.coefficients.items():
            out[k] = out.get(k, 0) + v
        return Chain(self.dim, out)

    def __neg__(self) -> "Chain":
        return Chain(self.dim, {k: -v for k, v in self.coefficients.items()})

    def __sub__(self, other: "Chain") -> "Chain":
        return self + (-other)

    def __mul__(self, scalar) -> "Chain":
        return Chain(self.dim, {k: scalar * v for k, v in self.coefficients.items()})

    __rmul__ = __mul__

    def _check(self, other):
        if not isinstance(other, Chain) or other.dim != self.dim:
            raise ComplexError("chains of different dimensions")

    def get(self, idx: int):
        return self.coefficients.get(idx, 0)

    def support(self) -> List[int]:
        return list(self.coefficients)

    def dense(self, size: int) -> List:
        out = [0] * size
        for k, v in self.coefficients.items():
            out[k] = v
        return out

    @property
    def is_integral(self) -> bool:
        return all(isinstance(v, int) for v in self.coefficients.values())

    def restrict(self, ids) -> "Chain":
        ids = set(ids)
        return Chain(self.dim, {k: v for k, v in self.coefficients.items() if k in ids})


def _perm_sign(verts: Sequence[int]) -> int:
    sign = 1
    v = list(verts)
    for i in range(len(v)):
        for j in range(i + 1, len(v)):
            if v[i] > v[j]:
                sign = -sign
    return sign


@dataclass(frozen=True)
class WeightAssignment:
    dim: int
    weights: Tuple[Fraction, ...]

    def __post_init__(self):
        ws = tuple(Fraction(w) for w in self.weights)
        if any(w < 0 for w in ws):
            raise ComplexError("weights must be nonnegative")
        object.__setattr__(self, "weights", ws)

    def __len__(self):
        return len(self.weights)

    def __getitem__(self, i):
        return self.weights[i]

    def scaled(self, factor) -> "WeightAssignment":
        return WeightAssignment(self.dim, tuple(Fraction(factor) * w for w in self.weights))


def unit_weights(X: SimplicialComplex, n: int) -> WeightAssignment:
    return WeightAssignment(n, (Fraction(1),) * X.count(n))


def l1_norm(c: Chain, w: WeightAssignment) -> Fraction:
    if c.dim != w.dim:
        raise ComplexError(f"chain dimension {c.dim} does not match weights dimension {w.dim}")
    return sum((w[k] * abs(v) for k, v in c.coefficients.items()), Fraction(0))


# --- matrices ---------------------------------------------------------------

@dataclass(frozen=True)
class SparseIntMatrix:
    rows: int
    cols: int
    entries: Mapping[Tuple[int, int], int] = field(default_factory=dict)

    def __post_init__(self):
        clean = {}
        for (i, j), v in self.entries.items():
            if not (0 <= i < self.rows and 0 <= j < self.cols):
                raise ComplexError(f"entry ({i}, {j}) outside {self.rows}x{self.cols}")
            if v:
                clean[(i, j)] = v
        object.__setattr__(self, "entries", clean)

    @classmethod
    def from_dense(cls, rows) -> "SparseIntMatrix":
        rows = [list(r) for r in rows]
        ncols = len(rows[0]) if rows else 0
        return cls(
            len(rows),
            ncols,
            {(i, j): v for i, r in enumerate(rows) for j, v in enumerate(r) if v},
        )

    @classmethod
    def identity(cls, n: int) -> "SparseIntMatrix":
        return cls(n, n, {(i, i): 1 for i in range(n)})

    @property
    def shape(self) -> Tuple[int, int]:
        return self.rows, self.cols

    def triples(self) -> List[Tuple[int, int, int]]:
        return sorted((i, j, v) for (i, j), v in self.entries.items())

    def to_dense(self) -> List[List[int]]:
        out = [[0] * self.cols for _ in range(self.rows)]
        for (i, j), v in self.entries.items():
            out[i][j] = v
        return out

    def transpose(self) -> "SparseIntMatrix":
        return SparseIntMatrix(self.cols, self.rows, {(j, i): v for (i, j), v in self.entries.items()})

    def columns(self) -> List[Dict[int, int]]:
        out: List[Dict[int, int]] = [{} for _ in range(self.cols)]
        for (i, j), v in self.entries.items():
            out[j][i] = v
        return out

    def dot(self, x: Sequence) -> List:
        if len(x) != self.cols:
            raise ComplexError("dimension mismatch")
        out = [0] * self.rows
        for (i, j), v in self.entries.items():
            if x[j]:
                out[i] += v * x[j]
        return out

    def __matmul__(self, other: "SparseIntMatrix") -> "SparseIntMatrix":
        if self.cols != other.rows:
            raise ComplexError("dimension mismatch")
        by_row: Dict[int, List[Tuple[int, int]]] = {}
        for (k, j), v in other.entries.items():
            by_row.setdefault(k, []).append((j, v))
        out: Dict[Tuple[int, int], int] = {}
        for (i, k), a in self.entries.items():
            for j, b in by_row.get(k, ()):
                out[(i, j)] = out.get((i, j), 0) + a * b
        return SparseIntMatrix(self.rows, other.cols, out)

    def submatrix(self, rows: Sequence[int], cols: Sequence[int]) -> List[List[int]]:
        return [[self.entries.get((i, j), 0) for j in cols] for i in rows]

    def hstack(self, other: "SparseIntMatrix") -> "SparseIntMatrix":
        if self.rows != other.rows:
            raise ComplexError("dimension mismatch")
        ent = dict(self.entries)
        ent.update({(i, j + self.cols): v for (i, j), v in other.entries.items()})
        return SparseIntMatrix(self.rows, self.cols + other.cols, ent)


def boundary_matrix(X: SimplicialComplex, n: int) -> SparseIntMatrix:
    """Matrix of the boundary map from n-chains to (n-1)-chains."""
    if not 1 <= n <= X.dim:
        raise ComplexError(f"boundary dimension {n} outside 1..{X.dim}")
    idx = X._index[n - 1]
    ent = {}
    for j, s in enumerate(X.simplices[n]):
        for i, f in enumerate(faces(s)):
            ent[(idx[f], j)] = -1 if i % 2 else 1
    return SparseIntMatrix(X.count(n - 1), X.count(n), ent)


def apply_boundary(X: SimplicialComplex, c: Chain) -> Chain:
    n = c.dim
    if n < 1:
        raise ComplexError("the boundary of a 0-chain is not defined here")
    if n > X.dim:
        raise ComplexError(f"no {n}-simplices in a {X.dim}-complex")
    idx = X._index[n - 1]
    out: Dict[int, object] = {}
    for j, coef in c.coefficients.items():
        for i, f in enumerate(faces(X.simplices[n][j])):
            k = idx[f]
            out[k] = out.get(k, 0) + (-coef if i % 2 else coef)
    return Chain(n - 1, out)


# --- subcomplexes -------------------------------------------------------------

@dataclass(frozen=True)
class Subcomplex:
    parent: SimplicialComplex
    members: Tuple[frozenset, ...]

    @classmethod
    def from_simplices(cls, X: SimplicialComplex, simplices: Iterable[Sequence[int]]) -> "Subcomplex":
        """Face closure of the given simplices inside X."""
        layers = [set() for _ in range(X.dim + 1)]
        stack = [tuple(sorted(s)) for s in simplices]
        while stack:
            s = stack.pop()
            n = len(s) - 1
            idx = X.index(s)
            if idx in layers[n]:
                continue
            layers[n].add(idx)
            if n > 0:
                stack.extend(faces(s))
        return cls(X, tuple(frozenset(l) for l in layers))

    @classmethod
    def empty(cls, X: SimplicialComplex) -> "Subcomplex":
        return cls(X, tuple(frozenset() for _ in range(X.dim + 1)))

    @classmethod
    def full(cls, X: SimplicialComplex) -> "Subcomplex":
        return cls(X, tuple(frozenset(range(X.count(n))) for n in range(X.dim + 1)))

    def __post_init__(self):
        X = self.parent
        for n in range(1, len(self.members)):
            for j in self.members[n]:
                for f in faces(X.simplices[n][j]):
                    if X._index[n - 1][f] not in self.members[n - 1]:
                        raise ComplexError(
                            f"subcomplex is not face-closed: {f} missing below {X.simplices[n][j]}"
                        )

    def ids(self, n: int) -> frozenset:
        return self.members[n] if 0 <= n < len(self.members) else frozenset()

    def contains(self, n: int, idx: int) -> bool:
        return idx in self.ids(n)

    def complement_ids(self, n: int) -> List[int]:
        mem = self.ids(n)
        return [i for i in range(self.parent.count(n)) if i not in mem]

    def union(self, other: "Subcomplex") -> "Subcomplex":
        return Subcomplex(self.parent, tuple(a | b for a, b in zip(self.members, other.members)))

    def as_complex(self) -> SimplicialComplex:
        """The subcomplex as a standalone complex; ``vertex_labels`` holds the parent ids."""
        tops = [self.parent.simplices[n][j] for n in range(len(self.members)) for j in self.members[n]]
        if not tops:
            return SimplicialComplex(())
        coords = None
        if self.parent.coordinates is not None:
            coords = {v: self.parent.coordinates[v] for s in tops for v in s}
        return build_complex(tops, coords)

    def simplex_list(self, n: int) -> List[Simplex]:
        return [self.parent.simplices[n][j] for j in sorted(self.ids(n))]


def relative_ids(X: SimplicialComplex, A: Optional[Subcomplex], n: int) -> List[int]:
    """Ids of n-simplices outside A, i.e. the basis of the relative chain group."""
    if A is None:
        return list(range(X.count(n)))
    return A.complement_ids(n)


def relative_boundary_matrix(X: SimplicialComplex, A: Optional[Subcomplex], n: int) -> SparseIntMatrix:
    """Boundary matrix with the rows and columns of simplices in A deleted."""
    rows = relative_ids(X, A, n - 1)
    cols = relative_ids(X, A, n)
    rpos = {r: i for i, r in enumerate(rows)}
    cpos = {c: j for j, c in enumerate(cols)}
    full = boundary_matrix(X, n)
    ent = {
        (rpos[i], cpos[j]): v
        for (i, j), v in full.entries.items()
        if i in rpos and j in cpos
    }
    return SparseIntMatrix(len(rows), len(cols), ent)


# --- manifold recognition ------------------------------------------------------

CLOSED_3_MANIFOLD = "closed-3-manifold"
MANIFOLD_WITH_BOUNDARY = "3-manifold-with-boundary"
SURFACE = "surface"
NON_MANIFOLD = "non-manifold"


@dataclass(frozen=True)
class ManifoldReport:
    kind: str
    boundary: Optional[Subcomplex] = None
    reason: Optional[str] = None

    @property
    def is_manifold(self) -> bool:
        return self.kind != NON_MANIFOLD


def _graph_shape(vertices: set, edges: List[Tuple[int, int]]) -> Optional[str]:
    """'circle', 'arc' or None for a finite graph."""
    if not vertices:
        return None
    deg = {v: 0 for v in vertices}
    adj: Dict[int, List[int]] = {v: [] for v in vertices}
    for a, b in edges:
        deg[a] += 1
        deg[b] += 1
        adj[a].append(b)
        adj[b].append(a)
    start = next(iter(vertices))
    seen = {start}
    stack = [start]
    while stack:
        for u in adj[stack.pop()]:
            if u not in seen:
                seen.add(u)
                stack.append(u)
    if len(seen) != len(vertices):
        return None
    degrees = sorted(deg.values())
    if all(d == 2 for d in degrees) and len(vertices) >= 3:
        return "circle"
    if len(vertices) == 1 and not edges:
        return None
    if degrees[:2] == [1, 1] and all(d == 2 for d in degrees[2:]):
        return "arc"
    return None


def _link_triangles_shape(tris: List[Tuple[int, int, int]]) -> Optional[str]:
    """'sphere' or 'disk' for a 2-complex given by triangles, else None."""
    if not tris:
        return None
    edge_count: Dict[Tuple[int, int], int] = {}
    verts = set()
    for t in tris:
        verts.update(t)
        for e in combinations(t, 2):
            edge_count[e] = edge_count.get(e, 0) + 1
    if any(c > 2 for c in edge_count.values()):
        return None
    # each vertex link inside the link must be a circle or an arc
    for v in verts:
        es = [tuple(x for x in t if x != v) for t in tris if v in t]
        vs = {x for e in es for x in e}
        shape = _graph_shape(vs, es)
        if shape is None:
            return None
    # connectivity through shared edges
    adj: Dict[int, List[int]] = {i: [] for i in range(len(tris))}
    by_edge: Dict[Tuple[int, int], List[int]] = {}
    for i, t in enumerate(tris):
        for e in combinations(t, 2):
            by_edge.setdefault(e, []).append(i)
    for ts in by_edge.values():
        if len(ts) == 2:
            adj[ts[0]].append(ts[1])
            adj[ts[1]].append(ts[0])
    seen = {0}
    stack = [0]
    while stack:
        for u in adj[stack.pop()]:
            if u not in seen:
                seen.add(u)
                stack.append(u)
    if len(seen) != len(tris):
        return None
    chi = len(verts) - len(edge_count) + len(tris)
    has_boundary = any(c == 1 for c in edge_count.values())
    if chi == 2 and not has_boundary:
        return "sphere"
    if chi == 1 and has_boundary:
        # connected surface with boundary and chi 1: a disk (projective plane has no boundary)
        bverts = {x for e, c in edge_count.items() if c == 1 for x in e}
        bedges = [e for e, c in edge_count.items() if c == 1]
        if _graph_shape(bverts, bedges) == "circle":
            return "disk"
    return None


def check_manifold(M: SimplicialComplex) -> ManifoldReport:
    """Classify M as a 3-manifold (closed or bounded), a surface, or neither."""
    if M.dim == 2:
        return _check_surface(M)
    if M.dim != 3:
        return ManifoldReport(NON_MANIFOLD, reason=f"dimension {M.dim} is not 2 or 3")
    tops = M.top_simplices()
    for s in tops:
        if len(s) != 4:
            return ManifoldReport(NON_MANIFOLD, reason=f"simplex {s} is not in any tetrahedron")
    tri_cof = M.cofaces(3)
    boundary_tris = []
    for i, tets in enumerate(tri_cof):
        if len(tets) > 2:
            return ManifoldReport(NON_MANIFOLD, reason=f"triangle {M.simplices[2][i]} lies in {len(tets)} tetrahedra")
        if len(tets) == 1:
            boundary_tris.append(M.simplices[2][i])
    tets = M.simplices[3]
    vert_tets: Dict[int, List[Simplex]] = {}
    for t in tets:
        for v in t:
            vert_tets.setdefault(v, []).append(t)
    for e in M.simplices[1]:
        link_edges = []
        for t in vert_tets[e[0]]:
            if e[1] in t:
                link_edges.append(tuple(x for x in t if x not in e))
        verts = {x for le in link_edges for x in le}
        if _graph_shape(verts, link_edges) is None:
            return ManifoldReport(NON_MANIFOLD, reason=f"link of edge {e} is not a circle or an arc")
    for v in range(M.vertex_count):
        link = [tuple(x for x in t if x != v) for t in vert_tets.get(v, [])]
        if _link_triangles_shape(link) is None:
            return ManifoldReport(NON_MANIFOLD, reason=f"link of vertex {v} is not a sphere or a disk")
    if not boundary_tris:
        return ManifoldReport(CLOSED_3_MANIFOLD, Subcomplex.empty(M))
    return ManifoldReport(MANIFOLD_WITH_BOUNDARY, Subcomplex.from_simplices(M, boundary_tris))


def _check_surface(M: SimplicialComplex) -> ManifoldReport:
    for s in M.top_simplices():
        if len(s) != 3:
            return ManifoldReport(NON_MANIFOLD, reason=f"simplex {s} is not in any triangle")
    edge_cof = M.cofaces(2)
    boundary_edges = []
    for i, ts in enumerate(edge_cof):
        if len(ts) > 2:
            return ManifoldReport(NON_MANIFOLD, reason=f"edge {M.simplices[1][i]} lies in {len(ts)} triangles")
        if len(ts) == 1:
            boundary_edges.append(M.simplices[1][i])
    vert_tris: Dict[int, List[Simplex]] = {}
    for t in M.simplices[2]:
        for v in t:
            vert_tris.setdefault(v, []).append(t)
    for v in range(M.vertex_count):
        es = [tuple(x for x in t if x != v) for t in vert_tris.get(v, [])]
        vs = {x for e in es for x in e}
        if _graph_shape(vs, es) is None:
            return ManifoldReport(NON_MANIFOLD, reason=f"link of vertex {v} is not a circle or an arc")
    boundary = Subcomplex.from_simplices(M, boundary_edges) if boundary_edges else Subcomplex.empty(M)
    return ManifoldReport(SURFACE, boundary)
