"""Reference computations that share no code with the package.

Everything here works on plain vertex tuples and Python integers or
fractions, so a bug in the package cannot hide behind the same bug here.
"""
from __future__ import annotations

import itertools
import math
from collections import deque
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple


def closure(tops) -> Dict[int, List[tuple]]:
    layers: Dict[int, set] = {}
    for s in tops:
        s = tuple(sorted(s))
        for k in range(1, len(s) + 1):
            for f in itertools.combinations(s, k):
                layers.setdefault(k - 1, set()).add(f)
    return {n: sorted(v) for n, v in layers.items()}


def boundary_rows(simplices: Dict[int, List[tuple]], n: int) -> List[List[int]]:
    """Dense matrix of the n-th boundary map in the sorted-tuple basis."""
    rows_basis = simplices.get(n - 1, [])
    index = {s: i for i, s in enumerate(rows_basis)}
    cols = simplices.get(n, [])
    M = [[0] * len(cols) for _ in rows_basis]
    for j, s in enumerate(cols):
        for k in range(len(s)):
            M[index[s[:k] + s[k + 1:]]][j] += (-1) ** k
    return M


def rank(M: Sequence[Sequence[int]], p: Optional[int] = None) -> int:
    """Rank over Q, or over GF(p) when ``p`` is given."""
    if p is None:
        A = [[Fraction(v) for v in r] for r in M]
    else:
        A = [[v % p for v in r] for r in M]
    r = 0
    cols = len(A[0]) if A else 0
    for c in range(cols):
        piv = next((i for i in range(r, len(A)) if A[i][c]), None)
        if piv is None:
            continue
        A[r], A[piv] = A[piv], A[r]
        inv = (1 / A[r][c]) if p is None else pow(A[r][c], p - 2, p)
        for i in range(len(A)):
            if i != r and A[i][c]:
                f = A[i][c] * inv
                A[i] = [(x - f * y) if p is None else (x - f * y) % p for x, y in zip(A[i], A[r])]
        r += 1
    return r


def betti(tops, n: int, p: Optional[int] = None) -> int:
    S = closure(tops)
    dim_n = len(S.get(n, []))
    rk_n = rank(boundary_rows(S, n), p) if n >= 1 and S.get(n) else 0
    rk_up = rank(boundary_rows(S, n + 1), p) if S.get(n + 1) else 0
    return dim_n - rk_n - rk_up


def left_kernel(M: Sequence[Sequence[int]]) -> List[List[Fraction]]:
    """Basis of {y : y^T M = 0} over Q."""
    rows = len(M)
    if not rows:
        return []
    T = [[Fraction(M[i][j]) for i in range(rows)] for j in range(len(M[0]))]
    # null space of T (= M^T)
    A = [list(r) for r in T]
    pivots = []
    r = 0
    for c in range(rows):
        piv = next((i for i in range(r, len(A)) if A[i][c]), None)
        if piv is None:
            continue
        A[r], A[piv] = A[piv], A[r]
        A[r] = [x / A[r][c] for x in A[r]]
        for i in range(len(A)):
            if i != r and A[i][c]:
                f = A[i][c]
                A[i] = [x - f * y for x, y in zip(A[i], A[r])]
        pivots.append(c)
        r += 1
    free = [c for c in range(rows) if c not in pivots]
    basis = []
    for fc in free:
        y = [Fraction(0)] * rows
        y[fc] = Fraction(1)
        for k, pc in enumerate(pivots):
            y[pc] = -A[k][fc]
        basis.append(y)
    return basis


def bounded_min(G: Sequence[Sequence], h: Sequence, weights: Sequence, bound: int = 2):
    """min sum w_j |c_j| over integer c in [-bound, bound]^m with G c = h.

    Meet in the middle: the two halves of the coordinates are enumerated
    separately and joined on the partial value of G c.
    Returns (value, c) or None when the box holds no solution.
    """
    m = len(weights)
    half = m // 2
    rng = range(-bound, bound + 1)

    def table(cols):
        best: Dict[tuple, Tuple[Fraction, tuple]] = {}
        for vals in itertools.product(rng, repeat=len(cols)):
            key = tuple(sum(row[j] * v for j, v in zip(cols, vals)) for row in G)
            cost = sum(Fraction(weights[j]) * abs(v) for j, v in zip(cols, vals))
            if key not in best or cost < best[key][0]:
                best[key] = (cost, vals)
        return best

    left, right = list(range(half)), list(range(half, m))
    tl, tr = table(left), table(right)
    best = None
    for key, (cost, vals) in tl.items():
        need = tuple(hi - k for hi, k in zip(h, key))
        if need in tr:
            total = cost + tr[need][0]
            if best is None or total < best[0]:
                best = (total, vals + tr[need][1])
    return best


def brute_obcp(tops, weights, b: Dict[tuple, int], n: int, bound: int = 2):
    """Bounded exhaustive OBCP: boundary of c must equal b exactly."""
    S = closure(tops)
    D = boundary_rows(S, n)
    rows = S[n - 1]
    h = [b.get(s, 0) for s in rows]
    return bounded_min(D, h, weights, bound)


def brute_ohcp(tops, weights, a: Dict[tuple, int], n: int, bound: int = 2):
    """Bounded exhaustive OHCP over Q-homology (exact when H_n has no torsion).

    c is homologous to a iff y.(c - a) = 0 for every y in the left kernel
    of the (n+1)-th boundary matrix.
    """
    S = closure(tops)
    basis = S[n]
    if S.get(n + 1):
        K = left_kernel(boundary_rows(S, n + 1))
    else:
        K = [[Fraction(int(i == j)) for j in range(len(basis))] for i in range(len(basis))]
    # clear denominators so the join keys are plain integers
    K = [[int(y * lcm_den(row)) for y in row] for row in K]
    av = [a.get(s, 0) for s in basis]
    h = [sum(y * v for y, v in zip(row, av)) for row in K]
    return bounded_min(K, h, weights, bound)


def lcm_den(row) -> int:
    out = 1
    for y in row:
        out = out * Fraction(y).denominator // math.gcd(out, Fraction(y).denominator)
    return out


def grid_shortest_path(N: int) -> int:
    """BFS distance from the left column to the right column of the (N+1)x(N+1)
    triangulated grid with diagonals (i, j)-(i+1, j+1)."""
    start = [(0, j) for j in range(N + 1)]
    dist = {v: 0 for v in start}
    q = deque(start)
    while q:
        i, j = q.popleft()
        if i == N:
            return dist[(i, j)]
        for di, dj in ((1, 0), (-1, 0), (0, 1), (0, -1), (1, 1), (-1, -1)):
            u = (i + di, j + dj)
            if 0 <= u[0] <= N and 0 <= u[1] <= N and u not in dist:
                dist[u] = dist[(i, j)] + 1
                q.append(u)
    raise AssertionError("grid is disconnected")


def one_in_three(n: int, clauses) -> bool:
    """Exhaustive 1-in-3 satisfiability; literals are (variable, negated)."""
    for bits in itertools.product((False, True), repeat=n):
        if all(sum(bits[v] != neg for v, neg in c) == 1 for c in clauses):
            return True
    return False


# fixtures as top simplices
CIRCLE = [(0, 1), (1, 2), (0, 2)]
TETRA_BOUNDARY = [(0, 1, 2), (0, 1, 3), (0, 2, 3), (1, 2, 3)]
TETRA = [(0, 1, 2, 3)]
RP2 = [(0, 1, 2), (0, 2, 3), (0, 3, 4), (0, 4, 5), (0, 1, 5),
       (1, 2, 4), (2, 3, 5), (1, 3, 4), (2, 4, 5), (1, 3, 5)]
TORUS = [  # 7-vertex Moebius torus
    (0, 1, 3), (1, 2, 4), (2, 3, 5), (3, 4, 6), (0, 4, 5), (1, 5, 6), (0, 2, 6),
    (0, 1, 5), (1, 2, 6), (0, 2, 3), (1, 3, 4), (2, 4, 5), (3, 5, 6), (0, 4, 6),
]


def cone_tops(tops, apex: Optional[int] = None):
    if apex is None:
        apex = 1 + max(v for s in tops for v in s)
    return [tuple(s) + (apex,) for s in tops]
