"""Integer linear algebra: Smith normal form, homology, integer systems, longitudes."""
from __future__ import annotations

from dataclasses import dataclass
from math import gcd
from typing import Dict, List, Optional, Sequence, Tuple

from .complex import (
    MANIFOLD_WITH_BOUNDARY,
    Chain,
    ComplexError,
    SimplicialComplex,
    SparseIntMatrix,
    Subcomplex,
    boundary_matrix,
    check_manifold,
)


class NoSolution(Exception):
    """Raised internally; ``solve_integer`` returns ``None`` instead."""


class LongitudeError(ValueError):
    pass


@dataclass(frozen=True)
class SmithDecomposition:
    """``D = U @ M @ V`` with U, V unimodular and D diagonal.

    ``diagonal`` lists the nonzero invariant factors d_1 | d_2 | ... | d_r.
    U and V are None when transforms were not requested.
    """

    diagonal: Tuple[int, ...]
    shape: Tuple[int, int]
    U: Optional[SparseIntMatrix] = None
    V: Optional[SparseIntMatrix] = None

    @property
    def rank(self) -> int:
        return len(self.diagonal)

    @property
    def D(self) -> SparseIntMatrix:
        return SparseIntMatrix(*self.shape, {(i, i): d for i, d in enumerate(self.diagonal)})


@dataclass(frozen=True)
class HomologyGroup:
    betti: int
    torsion: Tuple[int, ...] = ()

    def __str__(self):
        parts = ["Z"] * min(self.betti, 1)
        if self.betti > 1:
            parts = [f"Z^{self.betti}"]
        parts += [f"Z/{t}" for t in self.torsion]
        return " + ".join(parts) if parts else "0"

    @property
    def is_trivial(self) -> bool:
        return self.betti == 0 and not self.torsion


class _Work:
    """Sparse working matrix with row and column indexes."""

    def __init__(self, M: SparseIntMatrix):
        self.rows: Dict[int, Dict[int, int]] = {}
        self.cols: Dict[int, Dict[int, int]] = {}
        for (i, j), v in M.entries.items():
            self.rows.setdefault(i, {})[j] = v
            self.cols.setdefault(j, {})[i] = v

    def _set(self, i, j, v):
        if v:
            self.rows.setdefault(i, {})[j] = v
            self.cols.setdefault(j, {})[i] = v
        else:
            r = self.rows.get(i)
            if r is not None and j in r:
                del r[j]
                if not r:
                    del self.rows[i]
            c = self.cols.get(j)
            if c is not None and i in c:
                del c[i]
                if not c:
                    del self.cols[j]

    def add_row(self, dst, src, q):
        """row dst += q * row src"""
        for j, v in list(self.rows.get(src, {}).items()):
            self._set(dst, j, self.rows.get(dst, {}).get(j, 0) + q * v)

    def add_col(self, dst, src, q):
        """col dst += q * col src"""
        for i, v in list(self.cols.get(src, {}).items()):
            self._set(i, dst, self.cols.get(dst, {}).get(i, 0) + q * v)

    def pivot(self) -> Tuple[int, int, int]:
        best = None
        for i in sorted(self.rows):
            for j, v in self.rows[i].items():
                key = (abs(v), i, j)
                if best is None or key < best:
                    best = key
                    if best[0] == 1:
                        break
            if best is not None and best[0] == 1:
                break
        return best


class _Transform:
    """Dense-by-row sparse bookkeeping for the accumulated row/column operations."""

    def __init__(self, n):
        self.vecs: List[Dict[int, int]] = [{k: 1} for k in range(n)]

    def add(self, dst, src, q):
        d = self.vecs[dst]
        for k, v in self.vecs[src].items():
            nv = d.get(k, 0) + q * v
            if nv:
                d[k] = nv
            else:
                d.pop(k, None)

    def negate(self, k):
        self.vecs[k] = {a: -b for a, b in self.vecs[k].items()}


def _rounded_quotient(a: int, p: int) -> int:
    q = a // p
    r = a - q * p
    if 2 * abs(r) > abs(p):
        q += 1 if (r > 0) == (p > 0) else -1
    return q


def smith_normal_form(M: SparseIntMatrix, transforms: bool = True) -> SmithDecomposition:
    """Smith normal form by least-absolute-value pivoting.

    Row operations are accumulated into U (rows of U act on rows of M) and
    column operations into V. Pivot rows/columns are permuted to the front
    at the end so that D is diagonal.
    """
    m, n = M.shape
    W = _Work(M)
    U = _Transform(m) if transforms else None
    V = _Transform(n) if transforms else None
    pivots: List[Tuple[int, int, int]] = []
    while W.rows:
        _, r, c = W.pivot()
        while True:
            p = W.rows[r][c]
            changed = False
            for i, v in sorted(W.cols[c].items()):
                if i == r:
                    continue
                q = _rounded_quotient(v, p)
                if q:
                    W.add_row(i, r, -q)
                    if U:
                        U.add(i, r, -q)
                if W.rows.get(i, {}).get(c, 0):
                    changed = True
            for j, v in sorted(W.rows[r].items()):
                if j == c:
                    continue
                q = _rounded_quotient(v, p)
                if q:
                    W.add_col(j, c, -q)
                    if V:
                        V.add(j, c, -q)
                if W.rows.get(r, {}).get(j, 0):
                    changed = True
            if changed:
                # a smaller remainder appeared in the pivot row or column
                _, r, c = min(
                    [(abs(v), r, j) for j, v in W.rows[r].items()]
                    + [(abs(v), i, c) for i, v in W.cols[c].items()]
                )
                continue
            bad = None
            for i, row in sorted(W.rows.items()):
                if i == r:
                    continue
                for j, v in row.items():
                    if v % p:
                        bad = i
                        break
                if bad is not None:
                    break
            if bad is None:
                break
            W.add_row(r, bad, 1)
            if U:
                U.add(r, bad, 1)
        p = W.rows[r][c]
        if p < 0:
            W._set(r, c, -p)
            if U:
                U.negate(r)
            p = -p
        W._set(r, c, 0)
        pivots.append((p, r, c))
    diag = tuple(p for p, _, _ in pivots)
    if not transforms:
        return SmithDecomposition(diag, (m, n))
    used_r = [r for _, r, _ in pivots]
    used_c = [c for _, _, c in pivots]
    rset, cset = set(used_r), set(used_c)
    row_order = used_r + [i for i in range(m) if i not in rset]
    col_order = used_c + [j for j in range(n) if j not in cset]
    u_ent = {}
    for new, old in enumerate(row_order):
        for k, v in U.vecs[old].items():
            u_ent[(new, k)] = v
    v_ent = {}
    for new, old in enumerate(col_order):
        for k, v in V.vecs[old].items():
            v_ent[(k, new)] = v
    return SmithDecomposition(diag, (m, n), SparseIntMatrix(m, m, u_ent), SparseIntMatrix(n, n, v_ent))


def rank(M: SparseIntMatrix) -> int:
    return smith_normal_form(M, transforms=False).rank


def homology(X: SimplicialComplex, n: int) -> HomologyGroup:
    """H_n(X; Z) as a Betti number plus invariant factors."""
    if not 0 <= n <= X.dim:
        raise ComplexError(f"homology degree {n} outside 0..{X.dim}")
    rank_n = rank(boundary_matrix(X, n)) if n >= 1 else 0
    if n + 1 <= X.dim:
        snf = smith_normal_form(boundary_matrix(X, n + 1), transforms=False)
        rank_up, torsion = snf.rank, tuple(d for d in snf.diagonal if d > 1)
    else:
        rank_up, torsion = 0, ()
    return HomologyGroup(X.count(n) - rank_n - rank_up, tuple(sorted(torsion)))


def solve_integer(M: SparseIntMatrix, b: Sequence[int], snf: Optional[SmithDecomposition] = None):
    """An integer x with M x = b, or None when no integer solution exists."""
    if len(b) != M.rows:
        raise ComplexError("right-hand side has the wrong length")
    snf = snf or smith_normal_form(M)
    ub = snf.U.dot(list(b))
    y = [0] * M.cols
    for t, d in enumerate(snf.diagonal):
        if ub[t] % d:
            return None
        y[t] = ub[t] // d
    if any(ub[t] for t in range(snf.rank, M.rows)):
        return None
    return snf.V.dot(y)


def integer_kernel(M: SparseIntMatrix, snf: Optional[SmithDecomposition] = None) -> List[List[int]]:
    """A Z-basis of {x : M x = 0}."""
    snf = snf or smith_normal_form(M)
    cols = snf.V.columns()
    out = []
    for t in range(snf.rank, M.cols):
        v = [0] * M.cols
        for i, val in cols[t].items():
            v[i] = val
        out.append(v)
    return out


# --- longitude ------------------------------------------------------------------

def _surface_generators(S: SimplicialComplex) -> List[Dict[Tuple[int, int], int]]:
    """H_1 generators of a closed connected surface by tree-cotree decomposition.

    Each generator is returned as {edge vertex pair: coefficient}.
    """
    edges = S.simplices[1]
    tris = S.simplices[2]
    parent = {0: None}
    tree = set()
    order = [0]
    adj: Dict[int, List[Tuple[int, int]]] = {}
    for (a, b) in edges:
        adj.setdefault(a, []).append((b, (a, b)))
        adj.setdefault(b, []).append((a, (a, b)))
    for v in order:
        for u, e in sorted(adj.get(v, [])):
            if u not in parent:
                parent[u] = (v, e)
                tree.add(e)
                order.append(u)
    # dual spanning tree over edges not in the primal tree
    by_edge: Dict[Tuple[int, int], List[int]] = {}
    for k, t in enumerate(tris):
        for e in ((t[0], t[1]), (t[0], t[2]), (t[1], t[2])):
            by_edge.setdefault(e, []).append(k)
    seen = {0}
    queue = [0]
    cotree = set()
    for k in queue:
        t = tris[k]
        for e in ((t[0], t[1]), (t[0], t[2]), (t[1], t[2])):
            if e in tree:
                continue
            for other in by_edge[e]:
                if other not in seen:
                    seen.add(other)
                    cotree.add(e)
                    queue.append(other)
    leftover = [e for e in edges if e not in tree and e not in cotree]

    def path_to_root(v):
        out = []
        while parent[v] is not None:
            u, e = parent[v]
            out.append((u, v))
            v = u
        return out

    gens = []
    for (a, b) in leftover:
        loop: Dict[Tuple[int, int], int] = {}

        def add(u, v, s):
            key, sign = ((u, v), s) if u < v else ((v, u), -s)
            loop[key] = loop.get(key, 0) + sign

        add(a, b, 1)
        for (u, v) in path_to_root(b):  # b back to root
            add(v, u, 1)
        for (u, v) in path_to_root(a):  # root out to a
            add(u, v, 1)
        gens.append({k: v for k, v in loop.items() if v})
    return gens


def longitude(M: SimplicialComplex, boundary: Optional[Subcomplex] = None) -> Chain:
    """Edge cycle on the boundary torus generating ker(H_1(dM) -> H_1(M))."""
    report = check_manifold(M)
    if report.kind != MANIFOLD_WITH_BOUNDARY:
        raise LongitudeError(f"expected a 3-manifold with boundary, got {report.kind}")
    if boundary is None:
        boundary = report.boundary
    if boundary.members != report.boundary.members:
        raise LongitudeError("the given subcomplex is not the full boundary")
    S = boundary.as_complex()
    msg = "knot not null-homologous or boundary not a torus"
    if S.dim != 2 or homology(S, 0).betti != 1 or homology(S, 1) != HomologyGroup(2):
        raise LongitudeError(msg)
    gens = _surface_generators(S)
    if len(gens) != 2:
        raise LongitudeError(msg)
    vecs = []
    for g in gens:
        v = [0] * M.count(1)
        for e, coef in g.items():
            v[M.index(e)] += coef
        vecs.append(v)
    d2 = boundary_matrix(M, 2)
    snf = smith_normal_form(d2)
    u1, u2 = snf.U.dot(vecs[0]), snf.U.dot(vecs[1])
    # (p, q) with p*z1 + q*z2 in the integer image of d2
    rows = []
    for t in range(snf.rank, d2.rows):
        if u1[t] or u2[t]:
            rows.append((u1[t], u2[t], None))
    for t, d in enumerate(snf.diagonal):
        if d > 1 and (u1[t] % d or u2[t] % d):
            rows.append((u1[t], u2[t], d))
    slack = [k for k, r in enumerate(rows) if r[2] is not None]
    N = {}
    for k, (a, b, d) in enumerate(rows):
        if a:
            N[(k, 0)] = a
        if b:
            N[(k, 1)] = b
        if d is not None:
            N[(k, 2 + slack.index(k))] = d
    Nmat = SparseIntMatrix(len(rows), 2 + len(slack), N)
    kernel = integer_kernel(Nmat) if rows else [[1, 0], [0, 1]]
    proj = [(v[0], v[1]) for v in kernel if v[0] or v[1]]
    gen = _lattice_rank_one_generator(proj)
    if gen is None:
        raise LongitudeError(msg)
    p, q = gen
    lam = [p * a + q * b for a, b in zip(vecs[0], vecs[1])]
    return Chain.from_dense(1, lam)


def _lattice_rank_one_generator(vectors: List[Tuple[int, int]]) -> Optional[Tuple[int, int]]:
    """Generator of the sublattice of Z^2 spanned by ``vectors`` if it has rank 1."""
    if not vectors:
        return None
    a, b = vectors[0]
    for c, d in vectors[1:]:
        if a * d - b * c:
            return None
    g = 0
    # all vectors are multiples of the primitive direction
    pa, pb = a // gcd(a, b), b // gcd(a, b)
    for c, d in vectors:
        k = c // pa if pa else d // pb
        g = gcd(g, k)
    p, q = g * pa, g * pb
    if p < 0 or (p == 0 and q < 0):
        p, q = -p, -q
    return p, q
