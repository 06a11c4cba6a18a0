"""Optimal homologous / bounding chain problems as exact linear programs."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Optional, Sequence

from .complex import (
    Chain,
    ComplexError,
    SimplicialComplex,
    SparseIntMatrix,
    Subcomplex,
    WeightAssignment,
    apply_boundary,
    boundary_matrix,
    l1_norm,
    relative_boundary_matrix,
    relative_ids,
)
from .homology import homology, smith_normal_form, solve_integer
from .lp import (
    ABOVE_CUTOFF,
    BUDGET_EXHAUSTED,
    INFEASIBLE,
    OPTIMAL,
    LinearProgram,
    LPSolution,
    branch_and_bound,
    simplex_solve,
)

LP_ONLY = "lp"
LP_THEN_ILP = "ilp"


class BudgetExhausted(RuntimeError):
    pass


@dataclass(frozen=True)
class Infeasible:
    reason: str = "not a boundary"

    def __bool__(self):
        return False

    def decide(self, threshold) -> bool:
        return False


@dataclass(frozen=True)
class AboveCutoff:
    """The optimum exceeds ``cutoff``; ``lower_bound`` is a proven bound on it."""
    lower_bound: Fraction
    cutoff: Fraction

    def __bool__(self):
        return False

    def decide(self, threshold) -> bool:
        if Fraction(threshold) >= self.lower_bound:
            raise ValueError("threshold above the proven bound; rerun without a cutoff")
        return False


@dataclass(frozen=True)
class OptimalChain:
    chain: Chain
    norm: Fraction
    integral: bool
    method: str
    certificate: Optional[Chain] = None
    relaxation_norm: Optional[Fraction] = None

    def decide(self, threshold) -> bool:
        """Decision variant: is there a feasible chain of norm <= threshold?"""
        return self.norm <= Fraction(threshold)


def _frac(v) -> Optional[Fraction]:
    return None if v is None else Fraction(v)


def _check_mode(mode):
    if mode not in (LP_ONLY, LP_THEN_ILP):
        raise ValueError(f"unknown mode {mode!r}; expected 'lp' or 'ilp'")


def _check_weights(X, w: WeightAssignment, n: int):
    if w.dim != n or len(w) != X.count(n):
        raise ComplexError(f"weights must cover the {X.count(n)} {n}-simplices")


def _run(lp: LinearProgram, integral_vars: List[int], mode: str, max_nodes: int,
         cutoff: Optional[Fraction] = None, has_integer_point=None):
    """Solve the relaxation, escalating to branch and bound when asked.

    ``has_integer_point`` is consulted before branching; branch and bound
    alone cannot prove that an unbounded integer region is empty.
    """
    relax = simplex_solve(lp)
    if relax.status != OPTIMAL:
        return relax, relax, "lp"
    if relax.integral_on(integral_vars) or mode == LP_ONLY:
        return relax, relax, "lp"
    if has_integer_point is not None and not has_integer_point():
        return LPSolution(INFEASIBLE), relax, "ilp"
    sol = branch_and_bound(lp, integral_vars, max_nodes=max_nodes, cutoff=cutoff)
    if sol.status == BUDGET_EXHAUSTED:
        raise BudgetExhausted(f"branch and bound exceeded {max_nodes} nodes")
    return sol, relax, "ilp"


def _ohcp_core(D: Optional[SparseIntMatrix], a: Sequence[int], weights: Sequence[Fraction],
               mode: str, max_nodes: int, cutoff: Optional[Fraction] = None):
    """min sum w|c| over c = a + D x.

    Returns (c, x or None, method, relax_norm, integral), or an ``AboveCutoff``.
    """
    m = len(a)
    k = D.cols if D is not None else 0
    # variables: c+ (m), c- (m), x+ (k), x- (k)
    A = {}
    for i in range(m):
        A[(i, i)] = Fraction(1)
        A[(i, m + i)] = Fraction(-1)
    if D is not None:
        for (i, j), v in D.entries.items():
            A[(i, 2 * m + j)] = Fraction(-v)
            A[(i, 2 * m + k + j)] = Fraction(v)
    obj = list(weights) + list(weights) + [Fraction(0)] * (2 * k)
    lp = LinearProgram(tuple(obj), A, tuple(Fraction(v) for v in a))
    cvars = list(range(2 * m))
    sol, relax, method = _run(lp, cvars, mode, max_nodes, cutoff)
    if sol.status == ABOVE_CUTOFF:
        return AboveCutoff(sol.objective_value, cutoff)
    if sol.status != OPTIMAL:
        raise RuntimeError(f"homologous-chain program returned {sol.status}")
    c = [sol.values[i] - sol.values[m + i] for i in range(m)]
    x = [sol.values[2 * m + j] - sol.values[2 * m + k + j] for j in range(k)]
    integral = all(v.denominator == 1 for v in c)
    cert = None
    if integral:
        c = [int(v) for v in c]
        if all(v.denominator == 1 for v in x):
            cert = [int(v) for v in x]
        elif D is not None:
            cert = solve_integer(D, [ci - ai for ci, ai in zip(c, a)])
        else:
            cert = []
        if cert is None:
            if mode == LP_THEN_ILP:
                # torsion: c is only a rational boundary away from a
                sol = _torsion_program(D, a, weights, max_nodes, cutoff)
                if sol.status == BUDGET_EXHAUSTED:
                    raise BudgetExhausted(f"branch and bound exceeded {max_nodes} nodes")
                if sol.status == ABOVE_CUTOFF:
                    return AboveCutoff(sol.objective_value, cutoff)
                c = [int(sol.values[i] - sol.values[m + i]) for i in range(m)]
                cert = solve_integer(D, [ci - ai for ci, ai in zip(c, a)])
                method = "ilp"
            else:
                integral = False
    return c, cert, method, relax.objective_value, integral


def _torsion_program(D: SparseIntMatrix, a: Sequence[int], weights: Sequence[Fraction],
                     max_nodes: int, cutoff: Optional[Fraction]):
    """Integer program over c alone for c - a in the integer image of D.

    With U D V diagonal, U (c - a) must vanish beyond the rank and equal
    d_t y_t for each invariant factor d_t > 1. Since c = a is feasible,
    every optimum has |c_i| <= |a|_w / w_i; that box bounds y_t, which is
    shifted to a single nonnegative variable so the search stays finite.
    """
    snf = smith_normal_form(D)
    m = len(a)
    a_norm = sum((w * abs(v) for w, v in zip(weights, a)), Fraction(0))
    cmax = [a_norm / w if w else None for w in weights]
    urows: Dict[int, Dict[int, int]] = {}
    for (t, i), v in snf.U.entries.items():
        urows.setdefault(t, {})[i] = v
    torsion = [t for t, d in enumerate(snf.diagonal) if d > 1]
    tied = torsion + list(range(snf.rank, D.rows))
    q = len(torsion)
    A: Dict = {}
    rhs = []
    for r, t in enumerate(tied):
        row = urows.get(t, {})
        for i, v in row.items():
            A[(r, i)] = Fraction(v)
            A[(r, m + i)] = Fraction(-v)
        ua = sum(v * a[i] for i, v in row.items())
        if r < q:
            if any(cmax[i] is None for i in row):
                raise ComplexError("zero weights leave the torsion search unbounded")
            d = snf.diagonal[t]
            shift = int(sum(abs(v) * (cmax[i] + abs(a[i])) for i, v in row.items()) // d) + 1
            # U_t c - d (y' - shift) = U_t a
            A[(r, 2 * m + r)] = Fraction(-d)
            rhs.append(Fraction(ua - d * shift))
        else:
            rhs.append(Fraction(ua))
    obj = list(weights) + list(weights) + [Fraction(0)] * q
    lp = LinearProgram(tuple(obj), A, tuple(rhs))
    bound = a_norm if cutoff is None else min(a_norm, cutoff)
    sol = branch_and_bound(lp, max_nodes=max_nodes, cutoff=bound)
    if sol.status == ABOVE_CUTOFF and bound == a_norm and (cutoff is None or cutoff >= a_norm):
        raise AssertionError("torsion program lost the feasible point c = a")
    return sol


def solve_ohcp(X: SimplicialComplex, w: WeightAssignment, a: Chain, n: Optional[int] = None,
               mode: str = LP_THEN_ILP, max_nodes: int = 1_000_000, cutoff=None):
    """Minimum-norm chain homologous to ``a`` (c = a + boundary of x).

    With ``cutoff``, branch and bound skips regions whose bound exceeds it and
    may return ``AboveCutoff`` instead of an optimum.
    """
    _check_mode(mode)
    n = a.dim if n is None else n
    if a.dim != n:
        raise ComplexError("chain dimension does not match n")
    _check_weights(X, w, n)
    D = boundary_matrix(X, n + 1) if n + 1 <= X.dim else None
    avec = a.dense(X.count(n))
    if any(not isinstance(v, int) for v in avec):
        raise ComplexError("input chain must be integral")
    res = _ohcp_core(D, avec, w.weights, mode, max_nodes, _frac(cutoff))
    if isinstance(res, AboveCutoff):
        return res
    c, x, method, relax, integral = res
    chain = Chain.from_dense(n, c)
    cert = Chain.from_dense(n + 1, x) if x is not None and D is not None else None
    return OptimalChain(chain, l1_norm(chain, w), integral, method, cert, relax)


def solve_obcp(X: SimplicialComplex, w: WeightAssignment, b: Chain, n: Optional[int] = None,
               mode: str = LP_THEN_ILP, max_nodes: int = 1_000_000, cutoff=None):
    """Minimum-norm n-chain with boundary exactly ``b``; ``Infeasible`` if none."""
    _check_mode(mode)
    n = b.dim + 1 if n is None else n
    if b.dim != n - 1:
        raise ComplexError("boundary chain must have dimension n - 1")
    if n > X.dim:
        # no n-simplices at all: only the zero chain bounds
        if b:
            return Infeasible()
        return OptimalChain(Chain(n, {}), Fraction(0), True, "lp", None, Fraction(0))
    _check_weights(X, w, n)
    D = boundary_matrix(X, n)
    m = D.cols
    A = {}
    for (i, j), v in D.entries.items():
        A[(i, j)] = Fraction(v)
        A[(i, m + j)] = Fraction(-v)
    obj = tuple(w.weights) + tuple(w.weights)
    lp = LinearProgram(obj, A, tuple(Fraction(v) for v in b.dense(D.rows)))
    bvec = b.dense(D.rows)
    sol, relax, method = _run(lp, list(range(2 * m)), mode, max_nodes, _frac(cutoff),
                              lambda: solve_integer(D, bvec) is not None)
    if sol.status == INFEASIBLE:
        return Infeasible()
    if sol.status == ABOVE_CUTOFF:
        return AboveCutoff(sol.objective_value, _frac(cutoff))
    c = [sol.values[j] - sol.values[m + j] for j in range(m)]
    chain = Chain.from_dense(n, c)
    integral = chain.is_integral
    if integral and apply_boundary(X, chain) != b:
        raise AssertionError("bounding-chain certificate failed")
    return OptimalChain(chain, l1_norm(chain, w), integral, method, None, relax.objective_value)


def solve_relative_obcp(X: SimplicialComplex, A: Subcomplex, w: WeightAssignment, b: Chain,
                        n: Optional[int] = None, mode: str = LP_THEN_ILP,
                        max_nodes: int = 1_000_000, check_acyclic: bool = False, cutoff=None):
    """Minimum-norm relative n-cycle c (mod A) with [boundary c] = [b] in H_{n-1}(A).

    Finds some integral c0 with boundary b, then minimises over the relative
    homology class of c0 using the relative boundary matrix. The reduction
    is exact when H_n(X) = 0 (checked if ``check_acyclic``).
    """
    _check_mode(mode)
    n = b.dim + 1 if n is None else n
    _check_weights(X, w, n)
    if any(not A.contains(n - 1, i) for i in b.support()):
        raise ComplexError("b must be supported on the subcomplex A")
    if n - 1 >= 1 and apply_boundary(X, b):
        raise ComplexError("b must be a cycle")
    if check_acyclic and not homology(X, n).is_trivial:
        raise ComplexError(f"H_{n}(X) is nonzero; the relative reduction does not apply")
    c0 = solve_integer(boundary_matrix(X, n), b.dense(X.count(n - 1)))
    if c0 is None:
        return Infeasible()
    cols = relative_ids(X, A, n)
    D = relative_boundary_matrix(X, A, n + 1) if n + 1 <= X.dim else None
    a = [c0[j] for j in cols]
    weights = [w[j] for j in cols]
    res = _ohcp_core(D, a, weights, mode, max_nodes, _frac(cutoff))
    if isinstance(res, AboveCutoff):
        return res
    c, x, method, relax, integral = res
    chain = Chain(n, {cols[i]: v for i, v in enumerate(c) if v})
    cert = None
    if x is not None and D is not None:
        xcols = relative_ids(X, A, n + 1)
        cert = Chain(n + 1, {xcols[j]: v for j, v in enumerate(x) if v})
    if integral and not relative_class_matches(X, A, chain, b):
        raise AssertionError("relative certificate failed")
    return OptimalChain(chain, l1_norm(chain, w), integral, method, cert, relax)


def relative_class_matches(X: SimplicialComplex, A: Subcomplex, c: Chain, b: Chain) -> bool:
    """boundary(c) is supported on A and differs from b by a boundary in A."""
    n = c.dim
    diff = apply_boundary(X, c) - b
    if any(not A.contains(n - 1, i) for i in diff.support()):
        return False
    if not diff:
        return True
    rows = sorted(A.ids(n - 1))
    cols = sorted(A.ids(n))
    rpos = {r: i for i, r in enumerate(rows)}
    cpos = {j: k for k, j in enumerate(cols)}
    full = boundary_matrix(X, n)
    DA = SparseIntMatrix(
        len(rows), len(cols),
        {(rpos[i], cpos[j]): v for (i, j), v in full.entries.items() if i in rpos and j in cpos},
    )
    rhs = [diff.get(r) for r in rows]
    return solve_integer(DA, rhs) is not None


@dataclass(frozen=True)
class EquivalenceReport:
    ohcp: OptimalChain
    obcp: OptimalChain
    equal_norms: bool
    cross_feasible: bool

    @property
    def ok(self) -> bool:
        return self.equal_norms and self.cross_feasible


def verify_equivalence(X: SimplicialComplex, w: WeightAssignment, a: Chain,
                       n: Optional[int] = None, mode: str = LP_THEN_ILP) -> EquivalenceReport:
    """Solve the OHCP for a and the OBCP for its boundary and compare."""
    n = a.dim if n is None else n
    if n < 1:
        raise ComplexError("equivalence needs n >= 1")
    H = homology(X, n)
    if not H.is_trivial:
        raise ComplexError(f"H_{n}(X) = {H} is nonzero; the two problems differ")
    b = apply_boundary(X, a)
    hom = solve_ohcp(X, w, a, n, mode)
    bnd = solve_obcp(X, w, b, n, mode)
    if isinstance(bnd, Infeasible):
        raise AssertionError("the boundary of a chain must be a boundary")
    cross = apply_boundary(X, hom.chain) == b
    if cross and n + 1 <= X.dim:
        diff = (bnd.chain - a).dense(X.count(n))
        cross = solve_integer(boundary_matrix(X, n + 1), diff) is not None
    elif cross:
        cross = bnd.chain == a
    return EquivalenceReport(hom, bnd, hom.norm == bnd.norm, cross)
