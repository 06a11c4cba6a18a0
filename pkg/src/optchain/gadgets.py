"""Instance generators and brute-force oracles."""
from __future__ import annotations

import hashlib
import json
import math
import random
from dataclasses import dataclass, field
from fractions import Fraction
from importlib import resources
from itertools import permutations, product
from typing import Dict, List, Optional, Sequence, Tuple

from .complex import (
    MANIFOLD_WITH_BOUNDARY,
    Chain,
    ComplexError,
    SimplicialComplex,
    SparseIntMatrix,
    Subcomplex,
    WeightAssignment,
    apply_boundary,
    boundary_matrix,
    build_complex,
    check_manifold,
    cone,
    unit_weights,
)
from .homology import HomologyGroup, homology, solve_integer

Literal = Tuple[int, bool]  # (variable index, negated)


# --- 1-in-3 SAT -------------------------------------------------------------------

@dataclass(frozen=True)
class SatInstance:
    n: int
    clauses: Tuple[Tuple[Literal, Literal, Literal], ...] = ()

    def __post_init__(self):
        cl = tuple(tuple((int(v), bool(neg)) for v, neg in c) for c in self.clauses)
        for k, c in enumerate(cl):
            if len(c) != 3:
                raise ValueError(f"clause {k + 1} has {len(c)} literals, expected 3")
            for v, _ in c:
                if not 0 <= v < self.n:
                    raise ValueError(f"clause {k + 1} uses variable {v + 1} outside 1..{self.n}")
            if len(set(c)) != 3:
                raise ValueError(f"clause {k + 1} repeats a literal")
        object.__setattr__(self, "clauses", cl)

    @property
    def m(self) -> int:
        return len(self.clauses)

    def literals(self) -> List[Literal]:
        return [(u, neg) for u in range(self.n) for neg in (False, True)]

    def occurrences(self, lit: Literal) -> List[int]:
        return [k for k, c in enumerate(self.clauses) if lit in c]

    @classmethod
    def parse(cls, text: str, n: Optional[int] = None) -> "SatInstance":
        """One clause per line, literals as signed 1-based integers.

        Blank lines and lines starting with '#' or 'c ' are ignored; a line
        ``p <n>`` fixes the variable count.
        """
        clauses, lines = [], []
        for lineno, raw in enumerate(text.splitlines(), 1):
            line = raw.strip()
            if not line or line.startswith("#") or line == "c" or line.startswith("c "):
                continue
            toks = line.split()
            if toks[0] == "p":
                try:
                    n = int(toks[-1])
                except ValueError:
                    raise ValueError(f"line {lineno}: bad header {line!r}") from None
                continue
            try:
                lits = [int(t) for t in toks if t != "0"]
            except ValueError:
                raise ValueError(f"line {lineno}: literals must be signed integers") from None
            if len(lits) != 3 or any(l == 0 for l in lits):
                raise ValueError(f"line {lineno}: expected exactly 3 nonzero literals")
            if len(set(lits)) != 3:
                raise ValueError(f"line {lineno}: repeated literal")
            clauses.append(tuple((abs(l) - 1, l < 0) for l in lits))
            lines.append(lineno)
        if n is None:
            n = max((v + 1 for c in clauses for v, _ in c), default=0)
        for lineno, c in zip(lines, clauses):
            if any(v >= n for v, _ in c):
                raise ValueError(f"line {lineno}: variable outside 1..{n}")
        try:
            return cls(n, tuple(clauses))
        except ValueError as exc:
            raise ValueError(f"invalid instance: {exc}") from None

    def dumps(self) -> str:
        lines = [f"p {self.n}"]
        for c in self.clauses:
            lines.append(" ".join(str(-(v + 1) if neg else v + 1) for v, neg in c))
        return "\n".join(lines) + "\n"


SMALL_FORMULA = SatInstance(3, (((1, False), (1, True), (0, True)), ((1, False), (2, False), (2, True))))


def brute_force_1in3(sat: SatInstance, max_vars: int = 24):
    """(satisfiable, witness assignment or None) by exhaustive search."""
    if sat.n > max_vars:
        raise ValueError(f"{sat.n} variables exceed the enumeration limit {max_vars}")
    for bits in product((False, True), repeat=sat.n):
        if all(sum(bits[v] != neg for v, neg in c) == 1 for c in sat.clauses):
            return True, bits
    return False, None


def random_sat(rng: random.Random, n: int, m: int) -> SatInstance:
    if m and n < 2:
        raise ValueError("a clause needs three distinct literals, so n must be at least 2")
    clauses = []
    for _ in range(m):
        while True:
            c = tuple((rng.randrange(n), rng.random() < 0.5) for _ in range(3))
            if len(set(c)) == 3:
                break
        clauses.append(c)
    return SatInstance(n, tuple(clauses))


# --- gadget container ---------------------------------------------------------------

@dataclass
class GadgetInstance:
    complex: SimplicialComplex
    weights: Dict[int, WeightAssignment]
    chains: Dict[str, Chain] = field(default_factory=dict)
    subcomplexes: Dict[str, Subcomplex] = field(default_factory=dict)
    threshold: Optional[Fraction] = None
    metadata: dict = field(default_factory=dict)


# --- planar surfaces and the SAT complex ------------------------------------------

def planar_surface(k: int):
    """Sphere with k triangular holes using exactly 5k - 4 triangles.

    Returns (triangles, circles) on local vertices ``0..3k-1``. Each extra
    hole replaces the lexicographically largest triangle by a 6-triangle
    annulus between it and a new inner 3-cycle.
    """
    if k < 1:
        raise ValueError("a planar surface needs at least one boundary circle")
    tris = [(0, 1, 2)]
    circles = [(0, 1, 2)]
    nxt = 3
    for _ in range(k - 1):
        p, q, r = max(tris)
        tris.remove((p, q, r))
        x, y, z = nxt, nxt + 1, nxt + 2
        nxt += 3
        tris += [(p, q, x), (q, x, y), (q, r, y), (r, y, z), (r, p, z), (p, z, x)]
        circles.append((x, y, z))
    return sorted(tuple(sorted(t)) for t in tris), circles


def _orient(tris: List[Tuple[int, int, int]]) -> List[Tuple[int, int, int]]:
    """Coherently ordered vertex cycles for a connected orientable surface."""
    by_edge: Dict[frozenset, List[int]] = {}
    for k, t in enumerate(tris):
        for e in ((t[0], t[1]), (t[1], t[2]), (t[2], t[0])):
            by_edge.setdefault(frozenset(e), []).append(k)
    out: Dict[int, Tuple[int, int, int]] = {0: tris[0]}
    queue = [0]
    for k in queue:
        a, b, c = out[k]
        for u, v in ((a, b), (b, c), (c, a)):
            for other in by_edge[frozenset((u, v))]:
                if other in out:
                    continue
                w = next(x for x in tris[other] if x not in (u, v))
                out[other] = (v, u, w)  # traverse the shared edge backwards
                queue.append(other)
    if len(out) != len(tris):
        raise ComplexError("surface is not connected")
    return [out[k] for k in range(len(tris))]


def _boundary_cycle(oriented, circle) -> Tuple[int, int, int]:
    """Order of the circle's vertices as it appears in the boundary of the oriented surface."""
    cs = set(circle)
    succ = {}
    for t in oriented:
        for u, v in ((t[0], t[1]), (t[1], t[2]), (t[2], t[0])):
            if u in cs and v in cs:
                succ[u] = v
    start = min(circle)
    return (start, succ[start], succ[succ[start]])


def _subdivide(oriented_coarse, split_edges, split_triangles, new_vertex):
    """Refine coarse triangles that would collide with another surface.

    Edges in ``split_edges`` get a midpoint private to this surface; a
    triangle in ``split_triangles`` without such an edge gets a barycentre.
    Returns (oriented fine triangle, coarse index, pieces in that coarse triangle).
    """
    mid: Dict[frozenset, int] = {}
    out = []
    for ci, (x, y, z) in enumerate(oriented_coarse):
        ring = []  # boundary of the coarse triangle with midpoints inserted
        for u, v in ((x, y), (y, z), (z, x)):
            ring.append(u)
            e = frozenset((u, v))
            if e in split_edges:
                if e not in mid:
                    mid[e] = new_vertex()
                ring.append(mid[e])
        mids = [w for w in ring if w not in (x, y, z)]
        pieces = []
        if not mids:
            if frozenset((x, y, z)) in split_triangles:
                t = new_vertex()
                pieces = [(x, y, t), (y, z, t), (z, x, t)]
            else:
                pieces = [(x, y, z)]
        else:
            ring_list = list(ring)
            while len(ring_list) > 3:
                L = len(ring_list)
                for i in range(L):
                    a, b, c = ring_list[i - 1], ring_list[i], ring_list[(i + 1) % L]
                    # ear a-b-c is allowed when the new diagonal a-c touches a midpoint
                    if a in mids or c in mids:
                        pieces.append((a, b, c))
                        del ring_list[i]
                        break
                else:
                    raise AssertionError("no admissible ear")
            pieces.append(tuple(ring_list))
        for p in pieces:
            out.append((p, ci, len(pieces)))
    return out


def gen_sat_complex(sat: SatInstance) -> GadgetInstance:
    """Two-complex of planar surfaces glued along labelled circles.

    Threshold 1 + 6n + 10m. Coarse triangles (5|dF| - 4 per surface) whose
    interior edges or vertex sets would coincide with another surface's are
    refined with private midpoints, so surfaces meet only along their circles;
    the pieces of a coarse triangle share its unit weight.
    """
    n, m = sat.n, sat.m
    labels = ["K"] + [f"u{i + 1}" for i in range(n)] + [f"c{j + 1}" for j in range(m)]
    label_vertices = {lab: (3 * k, 3 * k + 1, 3 * k + 2) for k, lab in enumerate(labels)}
    counter = [3 * len(labels)]

    def new_vertex():
        counter[0] += 1
        return counter[0] - 1

    surfaces = [("F0", labels)]
    for lit in sat.literals():
        u, neg = lit
        name = f"F_{'~' if neg else ''}u{u + 1}"
        surfaces.append((name, [f"u{u + 1}"] + [f"c{j + 1}" for j in sat.occurrences(lit)]))

    coarse_counts = {}
    circle_orient = {}
    glued = []  # (surface name, oriented coarse triangles on global vertices, circle edges)
    for name, labs in surfaces:
        tris, circles = planar_surface(len(labs))
        coarse_counts[name] = len(tris)
        oriented = _orient(tris)
        vmap = {}
        for lab, circ in zip(labs, circles):
            cyc = _boundary_cycle(oriented, circ)
            L0, L1, L2 = label_vertices[lab]
            target = (L0, L1, L2) if name == "F0" else (L0, L2, L1)
            for a, b in zip(cyc, target):
                vmap[a] = b
            circle_orient.setdefault(lab, {})[name] = tuple(target)
        glob = [tuple(vmap[v] for v in t) for t in oriented]
        bedges = {frozenset((vmap[a], vmap[b])) for c in circles for a, b in ((c[0], c[1]), (c[1], c[2]), (c[0], c[2]))}
        glued.append((name, glob, bedges))
    # interior edges or whole triangles shared by two surfaces must be split
    edge_users: Dict[frozenset, set] = {}
    tri_users: Dict[frozenset, set] = {frozenset(label_vertices["K"]): {"cap"}}
    for name, glob, bedges in glued:
        for t in glob:
            tri_users.setdefault(frozenset(t), set()).add(name)
            for e in (frozenset((t[0], t[1])), frozenset((t[1], t[2])), frozenset((t[0], t[2]))):
                if e not in bedges:
                    edge_users.setdefault(e, set()).add(name)
    split_edges = {e for e, users in edge_users.items() if len(users) > 1}
    split_tris = {t for t, users in tri_users.items() if len(users) > 1}
    fine_tris = []  # (oriented triangle, surface name, weight)
    for name, glob, _ in glued:
        for piece, _, cnt in _subdivide(glob, split_edges, split_tris, new_vertex):
            fine_tris.append((piece, name, Fraction(1, cnt)))
    X = build_complex([t for t, _, _ in fine_tris])
    if X.count(2) != len(fine_tris):
        raise AssertionError("gluing produced duplicate triangles")
    weights = [Fraction(0)] * X.count(2)
    surface_terms: Dict[str, list] = {name: [] for name, _ in surfaces}
    for t, name, w in fine_tris:
        weights[X.index(t)] = w
        surface_terms[name].append((t, 1))
    chains = {f"[{name}]": Chain.from_simplices(X, terms) for name, terms in surface_terms.items()}
    K = label_vertices["K"]
    b = Chain.from_simplices(X, [((K[0], K[1]), 1), ((K[1], K[2]), 1), ((K[2], K[0]), 1)])
    if apply_boundary(X, chains["[F0]"]).restrict(b.support()) != b:
        raise AssertionError("K circle orientation mismatch")
    chains["b"] = b
    threshold = Fraction(1 + 6 * n + 10 * m)
    meta = {
        "kind": "sat",
        "problem": "obcp",
        "chain": "b",
        "dim": 2,
        "n": n,
        "m": m,
        "clauses": [[(-(v + 1) if neg else v + 1) for v, neg in c] for c in sat.clauses],
        "coarse_triangles": coarse_counts,
        "coarse_triangle_total": sum(coarse_counts.values()),
        "labels": {lab: list(v) for lab, v in label_vertices.items()},
        "threshold": str(threshold),
    }
    return GadgetInstance(X, {2: WeightAssignment(2, tuple(weights))}, chains, {}, threshold, meta)


def literal_surface_name(lit: Literal) -> str:
    u, neg = lit
    return f"[F_{'~' if neg else ''}u{u + 1}]"


def eq1_norm(sat: SatInstance, k: Dict[Literal, int]) -> int:
    """Closed-form norm of [F0] + sum k_v [F_v]."""
    n, m = sat.n, sat.m
    kv = sum(abs(k.get(v, 0)) for v in sat.literals())
    clause_sum = sum(sum(abs(k.get(l, 0)) for l in c) for c in sat.clauses)
    return 1 + 5 * n + 5 * m + kv + 5 * clause_sum


def gen_cone_ohcp(sat: SatInstance, verify: bool = True) -> GadgetInstance:
    """Cone on the SAT complex with a triangle capping the K circle.

    Weights: 1 per coarse triangle of X and on the cap, 10 + 6n + 10m on cone
    triangles. The chain ``a`` generates H_2 and has coefficient +1 on the cap
    oriented compatibly with [F0]. Threshold 2 + 6n + 10m.
    """
    base = gen_sat_complex(sat)
    X = base.complex
    n, m = sat.n, sat.m
    CX = cone(X)
    K = tuple(base.metadata["labels"]["K"])
    Y = build_complex(CX.top_simplices() + [K])
    heavy = Fraction(10 + 6 * n + 10 * m)
    xw = base.weights[2]
    weights = []
    for t in Y.simplices[2]:
        if t in X:
            weights.append(xw[X.index(t)])
        elif t == tuple(sorted(K)):
            weights.append(Fraction(1))
        else:
            weights.append(heavy)
    sigma = Y.index(K)
    # orientation of the cap compatible with [F0]: its boundary is -b
    bY = Chain.from_simplices(Y, [((K[0], K[1]), 1), ((K[1], K[2]), 1), ((K[2], K[0]), 1)])
    cap_bd = apply_boundary(Y, Chain(2, {sigma: 1}))
    eps = -1 if cap_bd == bY else 1
    if cap_bd != bY and cap_bd != -bY:
        raise AssertionError("cap does not bound the K circle")
    d2 = boundary_matrix(Y, 2)
    ent = dict(d2.entries)
    ent[(d2.rows, sigma)] = 1
    system = SparseIntMatrix(d2.rows + 1, d2.cols, ent)
    z = solve_integer(system, [0] * d2.rows + [eps])
    if z is None:
        raise AssertionError("no 2-cycle through the cap")
    a = Chain.from_dense(2, z)
    if verify:
        H2 = homology(Y, 2)
        if H2 != HomologyGroup(1):
            raise AssertionError(f"H_2(Y) = {H2}, expected Z")
    # map the surface chains of X into Y
    chains = {"a": a, "b": Chain(1, {Y.index(X.simplex(1, i)): v for i, v in base.chains["b"].coefficients.items()})}
    for name, ch in base.chains.items():
        if name.startswith("[F"):
            chains[name] = Chain(2, {Y.index(X.simplex(2, i)): v for i, v in ch.coefficients.items()})
    chains["[cap]"] = Chain(2, {sigma: eps})
    threshold = Fraction(2 + 6 * n + 10 * m)
    meta = dict(base.metadata)
    meta.update(kind="cone", problem="ohcp", chain="a", threshold=str(threshold), cone_weight=str(heavy))
    return GadgetInstance(Y, {2: WeightAssignment(2, tuple(weights))}, chains, {}, threshold, meta)


# --- toy square ----------------------------------------------------------------------

def gen_grid(N: int) -> GadgetInstance:
    """Triangulated N x N square; L and R are the left and right sides.

    ``b`` is v_R - v_L for the bottom vertices of R and L.
    """
    if N < 1:
        raise ValueError("grid size must be at least 1")
    vid = lambda i, j: i * (N + 1) + j
    tris = []
    for i in range(N):
        for j in range(N):
            tris.append((vid(i, j), vid(i + 1, j), vid(i + 1, j + 1)))
            tris.append((vid(i, j), vid(i, j + 1), vid(i + 1, j + 1)))
    coords = {vid(i, j): (i, j, 0) for i in range(N + 1) for j in range(N + 1)}
    X = build_complex(tris, coords)
    L = Subcomplex.from_simplices(X, [(vid(0, j), vid(0, j + 1)) for j in range(N)])
    R = Subcomplex.from_simplices(X, [(vid(N, j), vid(N, j + 1)) for j in range(N)])
    b = Chain(0, {X.index((vid(N, 0),)): 1, X.index((vid(0, 0),)): -1})
    meta = {"kind": "grid", "N": N, "problem": "relative-obcp", "chain": "b", "subcomplex": "A", "dim": 1}
    return GadgetInstance(
        X, {1: unit_weights(X, 1)}, {"b": b}, {"L": L, "R": R, "A": L.union(R)}, Fraction(N), meta
    )


# --- cube knots ----------------------------------------------------------------------

def freudenthal_cube(N: int) -> SimplicialComplex:
    """[0,N]^3 with six tetrahedra per unit cell along the main diagonal."""
    vid = lambda x, y, z: (x * (N + 1) + y) * (N + 1) + z
    tets = []
    for x, y, z in product(range(N), repeat=3):
        for perm in permutations(range(3)):
            p = [x, y, z]
            verts = [vid(*p)]
            for ax in perm:
                p[ax] += 1
                verts.append(vid(*p))
            tets.append(verts)
    coords = {vid(x, y, z): (x, y, z) for x, y, z in product(range(N + 1), repeat=3)}
    return build_complex(tets, coords)


def hamiltonian_corner_cycle(N: int) -> List[Tuple[int, int, int]]:
    corners = [(0, 0, 0), (1, 0, 0), (1, 1, 0), (0, 1, 0), (0, 1, 1), (1, 1, 1), (1, 0, 1), (0, 0, 1)]
    return [tuple(N * c for c in p) for p in corners]


def _area_standin(sq_area: Fraction) -> Fraction:
    root = math.isqrt(sq_area.numerator), math.isqrt(sq_area.denominator)
    if root[0] ** 2 == sq_area.numerator and root[1] ** 2 == sq_area.denominator:
        return Fraction(root[0], root[1])
    return Fraction(math.sqrt(sq_area)).limit_denominator(100)


def triangle_area_weights(X: SimplicialComplex):
    """Rational triangle areas from vertex coordinates; irrational ones replaced by stand-ins."""
    ws = []
    classes = {}
    for t in X.simplices[2]:
        p, q, r = (X.coordinates[v] for v in t)
        u = [q[i] - p[i] for i in range(3)]
        v = [r[i] - p[i] for i in range(3)]
        cr = (u[1] * v[2] - u[2] * v[1], u[2] * v[0] - u[0] * v[2], u[0] * v[1] - u[1] * v[0])
        sq = Fraction(sum(c * c for c in cr), 4)
        if sq not in classes:
            classes[sq] = _area_standin(sq)
        ws.append(classes[sq])
    meta = {f"sqrt({k})": str(v) for k, v in sorted(classes.items())}
    return WeightAssignment(2, tuple(ws)), meta


def gen_cube_knot(N: int, corner_cycle: Optional[Sequence[Sequence[int]]] = None) -> GadgetInstance:
    """Freudenthal cube with a 1-cycle ``b`` along an axis-parallel lattice loop."""
    if N < 1:
        raise ValueError("N must be at least 1")
    loop = [tuple(int(c) for c in p) for p in (corner_cycle or hamiltonian_corner_cycle(N))]
    X = freudenthal_cube(N)
    vid = lambda p: (p[0] * (N + 1) + p[1]) * (N + 1) + p[2]
    terms = []
    for k in range(len(loop)):
        p, q = loop[k], loop[(k + 1) % len(loop)]
        if any(not 0 <= c <= N for c in p):
            raise ComplexError(f"loop point {p} lies outside [0,{N}]^3")
        diff = [q[i] - p[i] for i in range(3)]
        axes = [i for i in range(3) if diff[i]]
        if len(axes) != 1:
            raise ComplexError(f"loop segment {p} -> {q} is not on lattice edges")
        ax = axes[0]
        step = 1 if diff[ax] > 0 else -1
        cur = list(p)
        for _ in range(abs(diff[ax])):
            nxt = list(cur)
            nxt[ax] += step
            terms.append(((vid(cur), vid(nxt)), 1))
            cur = nxt
    if len(loop) < 2:
        raise ComplexError("loop needs at least two points")
    b = Chain.from_simplices(X, terms)
    if apply_boundary(X, b):
        raise ComplexError("loop is not closed")
    w, area_meta = triangle_area_weights(X)
    meta = {
        "kind": "cube-knot", "N": N, "problem": "obcp", "chain": "b", "dim": 2,
        "loop": [list(p) for p in loop], "area_standins": area_meta,
    }
    return GadgetInstance(X, {2: w}, {"b": b}, {}, None, meta)


# --- solid and thickened tori ----------------------------------------------------------

def _prism(a, b):
    return [(a[0], a[1], a[2], b[2]), (a[0], a[1], b[1], b[2]), (a[0], b[0], b[1], b[2])]


def gen_solid_torus(k: int = 4) -> GadgetInstance:
    """Ring of k triangular prisms, three tetrahedra each.

    ``meridian`` is the boundary of the slice-0 triangle; that triangle is a
    meridian disc.
    """
    if k < 3:
        raise ValueError("need at least 3 slices")
    tets = []
    for j in range(k):
        a = (3 * j, 3 * j + 1, 3 * j + 2)
        jn = (j + 1) % k
        tets += _prism(a, (3 * jn, 3 * jn + 1, 3 * jn + 2))
    coords = {}
    for j in range(k):
        th = 2 * math.pi * j / k
        for i in range(3):
            ph = 2 * math.pi * i / 3
            rad = 3 + math.cos(ph)
            pt = (rad * math.cos(th), rad * math.sin(th), math.sin(ph))
            coords[3 * j + i] = tuple(Fraction(c).limit_denominator(1000) for c in pt)
    M = build_complex(tets, coords)
    rep = check_manifold(M)
    disc = Chain(2, {M.index((0, 1, 2)): 1})
    meta = {"kind": "solid-torus", "slices": k, "problem": "spanning-area", "dim": 2}
    return GadgetInstance(
        M, {2: unit_weights(M, 2)}, {"meridian_disc": disc, "meridian": apply_boundary(M, disc)},
        {"boundary": rep.boundary}, None, meta,
    )


def gen_thickened_torus(p: int = 3) -> GadgetInstance:
    """T^2 x I from a p x p torus grid; its boundary is two tori."""
    if p < 3:
        raise ValueError("torus grid needs p >= 3")
    v = lambda i, j: (i % p) * p + (j % p)
    tris = []
    for i in range(p):
        for j in range(p):
            tris.append(tuple(sorted((v(i, j), v(i + 1, j), v(i + 1, j + 1)))))
            tris.append(tuple(sorted((v(i, j), v(i, j + 1), v(i + 1, j + 1)))))
    tets = []
    for t in tris:
        tets += _prism(t, tuple(x + p * p for x in t))
    M = build_complex(tets)
    rep = check_manifold(M)
    meta = {"kind": "thickened-torus", "p": p, "problem": "spanning-area", "dim": 2}
    return GadgetInstance(M, {2: unit_weights(M, 2)}, {}, {"boundary": rep.boundary}, None, meta)


def gen_bounded_sphere(copies: int = 1) -> GadgetInstance:
    """Freudenthal 3-cube whose centre cell carries ``copies`` times the boundary of one tetrahedron."""
    X = freudenthal_cube(3)
    vid = lambda x, y, z: (x * 4 + y) * 4 + z
    tet = (vid(1, 1, 1), vid(2, 1, 1), vid(2, 2, 1), vid(2, 2, 2))
    c = apply_boundary(X, Chain(3, {X.index(tet): copies}))
    w, _ = triangle_area_weights(X)
    meta = {"kind": "bounded-sphere", "copies": copies, "dim": 2}
    return GadgetInstance(X, {2: w}, {"c": c}, {}, None, meta)


# --- Moebius fixture ----------------------------------------------------------------

MOEBIUS_SHA256 = "a05d02d72a2e66a9c539d307316785c3fbb7dfec237e0e44b4f98cc46b9876f6"


def _moebius_bytes() -> bytes:
    return resources.files("optchain.data").joinpath("moebius.json").read_bytes()


def gen_moebius_cube() -> GadgetInstance:
    """Bundled Freudenthal cube whose 2-skeleton contains a Moebius strip.

    ``b`` is the strip's boundary curve; ``strip`` lists its triangles.
    """
    raw = _moebius_bytes()
    digest = hashlib.sha256(raw).hexdigest()
    if digest != MOEBIUS_SHA256:
        raise ComplexError("Moebius fixture checksum mismatch")
    data = json.loads(raw)
    X = build_complex(data["tetrahedra"], {i: p for i, p in enumerate(data["coordinates"])})
    if check_manifold(X).kind != MANIFOLD_WITH_BOUNDARY:
        raise ComplexError("Moebius fixture is not a 3-manifold with boundary")
    for n in (2, 3):
        prod = boundary_matrix(X, n - 1) @ boundary_matrix(X, n)
        if prod.entries:
            raise ComplexError("Moebius fixture fails the boundary-squared check")
    strip = Subcomplex.from_simplices(X, data["strip"])
    S = strip.as_complex()
    edge_use: Dict[tuple, int] = {}
    for t in S.simplices[2]:
        for e in ((t[0], t[1]), (t[0], t[2]), (t[1], t[2])):
            edge_use[e] = edge_use.get(e, 0) + 1
    free = sorted(e for e, k in edge_use.items() if k == 1)
    if S.euler_characteristic() != 0 or max(edge_use.values()) > 2 or len(free) != len(data["boundary_curve"]):
        raise ComplexError("bundled strip is not a Moebius band")
    b = Chain.from_simplices(X, [(tuple(e), 1) for e in data["boundary_curve"]])
    if apply_boundary(X, b):
        raise ComplexError("Moebius boundary curve is not a cycle")
    meta = {"kind": "moebius", "problem": "obcp", "chain": "b", "dim": 2, "sha256": digest}
    return GadgetInstance(X, {2: unit_weights(X, 2)}, {"b": b}, {"strip": strip}, None, meta)
