"""Exact rational linear programming.

``simplex_solve`` runs a two-phase primal simplex on an integer-preserving
(fraction-free) tableau: the stored tableau ``T`` and a signed common
denominator ``d`` represent the rational tableau ``T / d``, and every pivot
is an exact integer update. Pricing is steepest edge, falling back to
Bland's rule whenever a run of degenerate pivots revisits a basis. Entries live in an int64 numpy
array while they are small and move to Python integers otherwise.
"""
from __future__ import annotations

import heapq
import logging
from dataclasses import dataclass
from fractions import Fraction
from math import floor, ceil, lcm
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple

import numpy as np

from .complex import SparseIntMatrix

log = logging.getLogger(__name__)

OPTIMAL = "optimal"
INFEASIBLE = "infeasible"
UNBOUNDED = "unbounded"
BUDGET_EXHAUSTED = "budget_exhausted"
ABOVE_CUTOFF = "above_cutoff"

_INT64_SAFE = 1 << 30


@dataclass(frozen=True)
class LinearProgram:
    """minimize c.x subject to A x = b, x >= 0 (all rational)."""

    objective: Tuple[Fraction, ...]
    A: Mapping[Tuple[int, int], Fraction]
    rhs: Tuple[Fraction, ...]

    def __post_init__(self):
        object.__setattr__(self, "objective", tuple(Fraction(v) for v in self.objective))
        object.__setattr__(self, "rhs", tuple(Fraction(v) for v in self.rhs))
        A = {}
        for (i, j), v in dict(self.A).items():
            if not (0 <= i < len(self.rhs) and 0 <= j < len(self.objective)):
                raise ValueError(f"constraint entry ({i}, {j}) out of range")
            if v:
                A[(i, j)] = Fraction(v)
        object.__setattr__(self, "A", A)

    @property
    def n_vars(self) -> int:
        return len(self.objective)

    @property
    def n_rows(self) -> int:
        return len(self.rhs)

    def residual(self, x: Sequence[Fraction]) -> List[Fraction]:
        r = [-b for b in self.rhs]
        for (i, j), v in self.A.items():
            r[i] += v * x[j]
        return r

    def value(self, x: Sequence[Fraction]) -> Fraction:
        return sum((c * v for c, v in zip(self.objective, x) if c and v), Fraction(0))


@dataclass
class LPSolution:
    status: str
    values: Tuple[Fraction, ...] = ()
    objective_value: Optional[Fraction] = None
    basis: Tuple[int, ...] = ()
    pivots: int = 0
    nodes: int = 0

    @property
    def is_integral(self) -> bool:
        return all(v.denominator == 1 for v in self.values)

    def integral_on(self, idx: Iterable[int]) -> bool:
        return all(self.values[j].denominator == 1 for j in idx)


class _Tableau:
    """Integer tableau T with common denominator d; the true tableau is T / d.

    d keeps the sign of the last pivot, so callers compare signs through ``sign``.
    """

    def __init__(self, T: np.ndarray):
        self.T = T
        self.d = 1
        self._check(T)

    @property
    def sign(self) -> int:
        return 1 if self.d > 0 else -1

    def _check(self, block):
        if self.T.dtype != object and np.abs(block).max(initial=0) >= _INT64_SAFE:
            self.T = self.T.astype(object)

    def pivot(self, r: int, j: int):
        T, d = self.T, self.d
        p = T[r, j]
        col = T[:, j].copy()
        rowr = T[r].copy()
        nz = np.nonzero(col)[0]
        nz = nz[nz != r]
        if p != d:
            others = np.ones(T.shape[0], dtype=bool)
            others[nz] = False
            others[r] = False
            T[others] = (T[others] * p) // d
        if len(nz):
            T[nz] = (p * T[nz] - np.outer(col[nz], rowr)) // d
        self.d = int(p)
        if T.dtype != object:
            self._check(T if p != d else T[nz])


def _scaled_rows(lp: LinearProgram):
    m, n = lp.n_rows, lp.n_vars
    rows: List[Dict[int, Fraction]] = [dict() for _ in range(m)]
    for (i, j), v in lp.A.items():
        rows[i][j] = v
    A = np.zeros((m, n), dtype=object)
    b = [0] * m
    for i in range(m):
        den = lcm(*(v.denominator for v in rows[i].values()), lp.rhs[i].denominator)
        sgn = -1 if lp.rhs[i] < 0 else 1
        for j, v in rows[i].items():
            A[i, j] = int(sgn * v * den)
        b[i] = int(sgn * lp.rhs[i] * den)
    return A, b


def _steepest(T: np.ndarray, m: int, obj: np.ndarray, cand: np.ndarray) -> int:
    """Position in ``cand`` of the steepest-edge column.

    Floating point only steers the choice; ties go to the lowest index.
    """
    try:
        cols = T[:m, cand].astype(np.float64)
        norms = 1.0 + np.einsum("ij,ij->j", cols, cols)
        score = obj[cand].astype(np.float64) ** 2 / norms
    except OverflowError:
        return int(np.argmin(obj[cand]))  # Dantzig on huge entries
    if not np.all(np.isfinite(score)):
        return int(np.argmin(obj[cand]))
    return int(np.argmax(score))


def simplex_solve(lp: LinearProgram, max_pivots: Optional[int] = None, trace: bool = False) -> LPSolution:
    """Exact two-phase simplex; ties in the ratio test go to the lowest basic index."""
    m, n = lp.n_rows, lp.n_vars
    A, b = _scaled_rows(lp)
    # singleton columns with entry +1 serve as an initial basis where possible
    basis = [-1] * m
    col_nnz = (A != 0).sum(axis=0) if m else np.zeros(n, dtype=int)
    for j in range(n):
        if col_nnz[j] == 1:
            i = int(np.nonzero(A[:, j])[0][0])
            if basis[i] < 0 and A[i, j] == 1:
                basis[i] = j
    art_rows = [i for i in range(m) if basis[i] < 0]
    n_art = len(art_rows)
    width = n + n_art + 1
    T = np.zeros((m + 1, width), dtype=object)
    T[:m, :n] = A
    T[:m, -1] = b
    for k, i in enumerate(art_rows):
        T[i, n + k] = 1
        basis[i] = n + k
    # phase-1 objective row: sum of artificials, priced out
    for i in art_rows:
        T[m] -= T[i]
    T[m, n:n + n_art] = 0
    try:
        tab = _Tableau(T.astype(np.int64))
    except (OverflowError, TypeError):
        tab = _Tableau(T)
    pivots = 0
    active = np.ones(width - 1, dtype=bool)

    def run(limit_cols: np.ndarray) -> str:
        # Steepest-edge pricing. A cycle can only happen inside a run of
        # degenerate pivots, so once a basis repeats in such a run we use
        # Bland's rule until the objective moves again.
        nonlocal pivots
        seen: set = set()
        bland = False
        while True:
            Tt = tab.T
            sg = tab.sign
            obj = Tt[m, :-1] * sg
            cand = np.nonzero((obj < 0) & limit_cols)[0]
            if len(cand) == 0:
                return OPTIMAL
            if not bland:
                key = hash(frozenset(basis))
                if key in seen:
                    bland = True
                seen.add(key)
            if bland:
                j = int(cand[0])
            else:
                j = int(cand[_steepest(Tt, m, obj, cand)])
            colj = Tt[:m, j] * sg
            rows = np.nonzero(colj > 0)[0]
            if len(rows) == 0:
                return UNBOUNDED
            best = None
            for i in rows:
                i = int(i)
                num, den = int(Tt[i, -1]) * sg, int(colj[i])
                if best is None:
                    best = (num, den, basis[i], i)
                    continue
                lhs, rhs = num * best[1], best[0] * den
                if lhs < rhs or (lhs == rhs and basis[i] < best[2]):
                    best = (num, den, basis[i], i)
            r = best[3]
            if best[0] != 0:
                seen.clear()
                bland = False
            if trace:
                log.debug("pivot: x%d enters, x%d leaves (row %d)", j, basis[r], r)
            tab.pivot(r, j)
            basis[r] = j
            pivots += 1
            if max_pivots is not None and pivots >= max_pivots:
                return BUDGET_EXHAUSTED

    if n_art:
        status = run(active)
        if status == BUDGET_EXHAUSTED:
            return LPSolution(BUDGET_EXHAUSTED, pivots=pivots)
        if tab.T[m, -1] != 0:
            return LPSolution(INFEASIBLE, pivots=pivots)
        # drive artificials out of the basis; rows where that fails are redundant
        keep = list(range(m))
        for i in range(m):
            if basis[i] >= n:
                row = tab.T[i, :n]
                nz = np.nonzero(row)[0]
                if len(nz):
                    j = int(nz[0])
                    tab.pivot(i, j)
                    basis[i] = j
                    pivots += 1
                else:
                    keep.remove(i)
        rows_kept = keep + [m]
        tab.T = np.ascontiguousarray(tab.T[rows_kept][:, list(range(n)) + [width - 1]])
        basis = [basis[i] for i in keep]
        m = len(keep)
    # phase 2 objective row: d*c - sum_i c_B(i) * T_i
    den = lcm(*(c.denominator for c in lp.objective)) if n else 1
    cost = [int(c * den) for c in lp.objective]
    obj = np.array(cost + [0], dtype=object) * tab.d
    for i, j in enumerate(basis):
        if cost[j]:
            obj = obj - cost[j] * tab.T[i].astype(object)
    if tab.T.dtype != object and np.abs(obj).max(initial=0) < _INT64_SAFE:
        tab.T[m] = obj.astype(np.int64)
    else:
        tab.T = tab.T.astype(object)
        tab.T[m] = obj
    status = run(np.ones(n, dtype=bool))
    if status != OPTIMAL:
        return LPSolution(status, pivots=pivots)
    values = [Fraction(0)] * n
    for i, j in enumerate(basis):
        values[j] = Fraction(int(tab.T[i, -1]), tab.d)
    return LPSolution(OPTIMAL, tuple(values), lp.value(values), tuple(sorted(basis)), pivots)


# --- branch and bound -------------------------------------------------------------

def _with_bounds(lp: LinearProgram, bounds: Mapping[int, Tuple[int, Optional[int]]]):
    """LP with lo <= x_j <= hi imposed via shifting and slack rows.

    Returns (lp', shift) where x = x'[:n] + shift.
    """
    n, m = lp.n_vars, lp.n_rows
    shift = [0] * n
    for j, (lo, _) in bounds.items():
        shift[j] = lo
    rhs = list(lp.rhs)
    for (i, j), v in lp.A.items():
        if shift[j]:
            rhs[i] -= v * shift[j]
    A = dict(lp.A)
    obj = list(lp.objective)
    extra = 0
    for j, (lo, hi) in sorted(bounds.items()):
        if hi is None:
            continue
        if hi < lo:
            return None, shift
        row = m + extra
        slack = n + extra
        A[(row, j)] = Fraction(1)
        A[(row, slack)] = Fraction(1)
        rhs.append(Fraction(hi - lo))
        extra += 1
    obj += [Fraction(0)] * extra
    # slack columns appear after all structural columns
    return LinearProgram(tuple(obj), A, tuple(rhs)), shift


def branch_and_bound(
    lp: LinearProgram,
    integral_vars: Optional[Iterable[int]] = None,
    max_nodes: int = 1_000_000,
    cutoff: Optional[Fraction] = None,
) -> LPSolution:
    """Best-first branch and bound on the exact LP bound.

    Branches on the lowest-index fractional integral variable; nodes with
    equal bounds are explored in lexicographic order of their branch path.
    With ``cutoff``, nodes whose bound exceeds it are dropped; if that leaves
    no integral point the status is ``ABOVE_CUTOFF`` and ``objective_value``
    is a lower bound on the optimum.
    """
    ivars = sorted(set(range(lp.n_vars) if integral_vars is None else integral_vars))
    n = lp.n_vars
    heap: List = []
    counter = 0
    best: Optional[LPSolution] = None
    nodes = 0
    pivots = 0

    def evaluate(bounds):
        nonlocal pivots
        sub, shift = _with_bounds(lp, bounds)
        if sub is None:
            return None
        sol = simplex_solve(sub)
        pivots += sol.pivots
        if sol.status != OPTIMAL:
            return sol
        vals = tuple(sol.values[j] + shift[j] for j in range(n))
        return LPSolution(OPTIMAL, vals, lp.value(vals), sol.basis, sol.pivots)

    root = evaluate({})
    nodes = 1
    if root is None or root.status != OPTIMAL:
        status = root.status if root is not None else INFEASIBLE
        return LPSolution(status, pivots=pivots, nodes=nodes)
    cut_bound: Optional[Fraction] = None

    def over(bound) -> bool:
        nonlocal cut_bound
        if cutoff is not None and bound > cutoff:
            cut_bound = bound if cut_bound is None else min(cut_bound, bound)
            return True
        return False

    if not over(root.objective_value):
        heapq.heappush(heap, (root.objective_value, (), counter, {}, root))
    while heap:
        bound, path, _, bounds, sol = heapq.heappop(heap)
        if best is not None and bound >= best.objective_value:
            continue
        frac = next((j for j in ivars if sol.values[j].denominator != 1), None)
        if frac is None:
            best = sol
            continue
        v = sol.values[frac]
        lo, hi = bounds.get(frac, (0, None))
        for bit, (nlo, nhi) in enumerate(((lo, floor(v)), (ceil(v), hi))):
            if nodes >= max_nodes:
                return LPSolution(BUDGET_EXHAUSTED, pivots=pivots, nodes=nodes)
            child_bounds = dict(bounds)
            child_bounds[frac] = (nlo, nhi)
            child = evaluate(child_bounds)
            nodes += 1
            if child is None or child.status != OPTIMAL:
                continue
            if best is not None and child.objective_value >= best.objective_value:
                continue
            if over(child.objective_value):
                continue
            counter += 1
            heapq.heappush(heap, (child.objective_value, path + (bit,), counter, child_bounds, child))
    if best is None:
        if cut_bound is not None:
            return LPSolution(ABOVE_CUTOFF, objective_value=cut_bound, pivots=pivots, nodes=nodes)
        return LPSolution(INFEASIBLE, pivots=pivots, nodes=nodes)
    return LPSolution(OPTIMAL, best.values, best.objective_value, best.basis, pivots, nodes)


# --- total unimodularity ------------------------------------------------------------

YES, NO, UNKNOWN = "yes", "no", "unknown"


@dataclass(frozen=True)
class TUReport:
    verdict: str
    witness: Optional[Tuple[Tuple[int, ...], Tuple[int, ...]]] = None
    determinant: Optional[int] = None
    checked: int = 0


def determinant(rows: Sequence[Sequence[int]]) -> int:
    """Exact integer determinant by Bareiss elimination."""
    a = [list(r) for r in rows]
    n = len(a)
    if n == 0:
        return 1
    sign, prev = 1, 1
    for k in range(n - 1):
        if a[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if a[i][k]), None)
            if swap is None:
                return 0
            a[k], a[swap] = a[swap], a[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


def is_totally_unimodular(
    M: SparseIntMatrix,
    budget: int = 8,
    rows: Optional[Sequence[int]] = None,
    cols: Optional[Sequence[int]] = None,
) -> TUReport:
    """Bounded search for a square submatrix with determinant outside {-1, 0, 1}.

    Only submatrices whose row/column bipartite graph is connected are
    examined: the determinant of a disconnected one is a product of the
    determinants of its blocks, so a violating block is always found first.
    ``rows``/``cols`` restrict the search to a sub-block of M.
    """
    rows = sorted(range(M.rows) if rows is None else rows)
    cols = sorted(range(M.cols) if cols is None else cols)
    for (i, j), v in sorted(M.entries.items()):
        if v not in (-1, 0, 1) and i in set(rows) and j in set(cols):
            return TUReport(NO, ((i,), (j,)), v, 1)
    rset, cset = set(rows), set(cols)
    adj: Dict[Tuple[str, int], List[Tuple[str, int]]] = {}
    for (i, j) in M.entries:
        if i in rset and j in cset:
            adj.setdefault(("r", i), []).append(("c", j))
            adj.setdefault(("c", j), []).append(("r", i))
    for lst in adj.values():
        lst.sort()
    limit = min(budget, len(rows), len(cols))
    order = {node: k for k, node in enumerate(sorted(adj))}
    checked = 0

    def test(sub):
        nonlocal checked
        rs = tuple(sorted(x for t, x in sub if t == "r"))
        cs = tuple(sorted(x for t, x in sub if t == "c"))
        checked += 1
        det = determinant(M.submatrix(rs, cs))
        if det not in (-1, 0, 1):
            return TUReport(NO, (rs, cs), det, checked)
        return None

    # enumerate connected node sets (each exactly once) rooted at their minimum node
    for root in sorted(adj):
        rk = order[root]
        stack = [({root}, [u for u in adj[root] if order[u] > rk], 1 if root[0] == "r" else 0, 0 if root[0] == "r" else 1)]
        while stack:
            sub, ext, nr, nc = stack.pop()
            if nr == nc and nr >= 2:
                hit = test(sub)
                if hit:
                    return hit
            ext = list(ext)
            while ext:
                w = ext.pop()
                wr, wc = (nr + 1, nc) if w[0] == "r" else (nr, nc + 1)
                if wr > limit or wc > limit:
                    continue
                neigh = set()
                for u in sub:
                    neigh.update(adj[u])
                new_ext = ext + [
                    u for u in adj[w]
                    if order[u] > rk and u not in sub and u not in neigh and u not in ext
                ]
                stack.append((sub | {w}, new_ext, wr, wc))
    if budget >= min(len(rows), len(cols)):
        return TUReport(YES, checked=checked)
    return TUReport(UNKNOWN, checked=checked)


def lp_from_matrix(objective, M: SparseIntMatrix, rhs) -> LinearProgram:
    return LinearProgram(tuple(objective), {k: Fraction(v) for k, v in M.entries.items()}, tuple(rhs))
