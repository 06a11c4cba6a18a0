"""Turn integral optimal chains into embedded paths and surfaces.

A 1-chain in a surface becomes parallel strands along its edges, matched
without crossings at every vertex. A 2-chain in a 3-manifold becomes one
triangular sheet per unit coefficient; sheets meeting an edge are glued in
nested pairs around it and the corner curves at each vertex are capped by
discs. Both constructions keep the chain and its norm unchanged.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

from .complex import (
    NON_MANIFOLD,
    SURFACE,
    Chain,
    ComplexError,
    SimplicialComplex,
    Subcomplex,
    WeightAssignment,
    apply_boundary,
    check_manifold,
)


class _DSU:
    def __init__(self, n: int):
        self.parent = list(range(n))

    def find(self, x: int) -> int:
        while self.parent[x] != x:
            self.parent[x] = self.parent[self.parent[x]]
            x = self.parent[x]
        return x

    def union(self, a: int, b: int):
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            self.parent[max(ra, rb)] = min(ra, rb)

    def classes(self, items) -> int:
        return len({self.find(x) for x in items})


def _stack_match(seq: Sequence[Tuple[int, object]]):
    """Non-crossing pairing of adjacent opposite signs; returns (pairs, leftovers)."""
    stack: List[Tuple[int, object]] = []
    pairs = []
    for sign, item in seq:
        if stack and stack[-1][0] == -sign:
            pairs.append((stack.pop()[1], item))
        else:
            stack.append((sign, item))
    return pairs, [item for _, item in stack]


def _require_integral(c: Chain):
    if not c.is_integral:
        raise ComplexError("desingularization needs an integral chain")


# --- paths in surfaces ------------------------------------------------------------------

@dataclass
class StrandFamily:
    """Parallel strands of a 1-chain: arcs between terminal vertices and closed loops.

    Each strand is a vertex sequence traversed in the direction of the chain.
    """
    arcs: List[List[int]] = field(default_factory=list)
    loops: List[List[int]] = field(default_factory=list)
    orientable: bool = True

    def chain(self, X: SimplicialComplex) -> Chain:
        terms = []
        for walk in self.arcs + self.loops:
            terms += [((walk[k], walk[k + 1]), 1) for k in range(len(walk) - 1)]
        return Chain.from_simplices(X, terms) if terms else Chain(1, {})

    def total_length(self) -> int:
        return sum(len(w) - 1 for w in self.arcs + self.loops)


def _vertex_rotations(S: SimplicialComplex):
    """Neighbour order around each vertex, counter-clockwise for a coherent orientation.

    Returns (rotation lists, orientable flag).
    """
    tris = list(S.simplices[2])
    by_edge: Dict[Tuple[int, int], List[int]] = {}
    for k, t in enumerate(tris):
        for e in ((t[0], t[1]), (t[0], t[2]), (t[1], t[2])):
            by_edge.setdefault(e, []).append(k)
    oriented: Dict[int, Tuple[int, int, int]] = {}
    orientable = True
    for seed in range(len(tris)):
        if seed in oriented:
            continue
        oriented[seed] = tris[seed]
        queue = [seed]
        for k in queue:
            a, b, c = oriented[k]
            for u, v in ((a, b), (b, c), (c, a)):
                for other in by_edge[tuple(sorted((u, v)))]:
                    if other == k:
                        continue
                    w = next(x for x in tris[other] if x not in (u, v))
                    want = (v, u, w)
                    if other not in oriented:
                        oriented[other] = want
                        queue.append(other)
                    else:
                        got = oriented[other]
                        i = got.index(v)
                        if got[(i + 1) % 3] != u:
                            orientable = False
    rot: Dict[int, List[int]] = {}
    succ: Dict[int, Dict[int, int]] = {v: {} for v in range(S.vertex_count)}
    for a, b, c in oriented.values():
        succ[a][b] = c
        succ[b][c] = a
        succ[c][a] = b
    for v in range(S.vertex_count):
        nxt = succ[v]
        if not nxt:
            rot[v] = []
            continue
        if orientable:
            targets = set(nxt.values())
            starts = [u for u in nxt if u not in targets]
            order = [min(starts) if starts else min(nxt)]
            while order[-1] in nxt and nxt[order[-1]] != order[0]:
                order.append(nxt[order[-1]])
        else:
            # unoriented link walk; still a valid cyclic order of the neighbours
            nb: Dict[int, List[int]] = {}
            for a, b in nxt.items():
                nb.setdefault(a, []).append(b)
                nb.setdefault(b, []).append(a)
            ends = [u for u in nb if len(nb[u]) == 1]
            order = [min(ends) if ends else min(nb)]
            prev = None
            while True:
                cand = [u for u in nb[order[-1]] if u != prev and u not in order]
                if not cand:
                    break
                prev = order[-1]
                order.append(min(cand))
        seen = set(order)
        order += sorted(u for a, b in nxt.items() for u in (a, b) if u not in seen and not seen.add(u))
        rot[v] = order
    return rot, orientable


def desingularize_1(S: SimplicialComplex, c: Chain, terminals: Optional[Subcomplex] = None) -> StrandFamily:
    """Strands of the integral 1-chain ``c`` in the surface ``S``.

    Strands end at vertices of ``terminals``; elsewhere incoming and outgoing
    strands are matched without crossings in the rotation order.
    """
    if c.dim != 1:
        raise ComplexError("expected a 1-chain")
    _require_integral(c)
    rep = check_manifold(S)
    if rep.kind != SURFACE:
        raise ComplexError(f"ambient complex is not a surface: {rep.reason or rep.kind}")
    term = set(terminals.ids(0)) if terminals is not None else set()
    bd = apply_boundary(S, c)
    if any(v not in term for v in bd.support()):
        raise ComplexError("chain boundary is not supported on the terminal set")
    rot, orientable = _vertex_rotations(S)
    # strand (edge, copy): copies run 0..k-1 counter-clockwise at the low end
    at_vertex: Dict[int, List[Tuple[int, Tuple[int, int]]]] = {}
    for v in {x for e in c.support() for x in S.simplex(1, e)}:
        seq = []
        for u in rot[v]:
            e = S.index((v, u))
            k = c.get(e)
            if not k:
                continue
            lo = min(u, v)
            out = (k > 0) == (v == lo)  # the strand leaves v
            copies = range(abs(k)) if v == lo else range(abs(k) - 1, -1, -1)
            seq += [(1 if out else -1, (e, i)) for i in copies]
        at_vertex[v] = seq
    partner: Dict[Tuple[int, Tuple[int, int]], Tuple[int, int]] = {}
    for v, seq in at_vertex.items():
        if v in term:
            continue
        pairs, left = _stack_match(seq)
        if left:
            raise AssertionError("unbalanced strands at a non-terminal vertex")
        for a, b in pairs:
            partner[(v, a)] = b
            partner[(v, b)] = a

    def head_tail(e):
        lo, hi = S.simplex(1, e)
        return (lo, hi) if c.get(e) > 0 else (hi, lo)

    used = set()

    def walk(strand):
        e, _ = strand
        tail, head = head_tail(e)
        path = [tail, head]
        used.add(strand)
        while head not in term:
            nxt = partner[(head, strand)]
            if nxt in used:
                break
            strand = nxt
            used.add(strand)
            head = head_tail(strand[0])[1]
            path.append(head)
        return path

    fam = StrandFamily(orientable=orientable)
    starts = []
    for v in sorted(term):
        for sign, strand in at_vertex.get(v, []):
            if sign > 0:
                starts.append(strand)
    for strand in starts:
        if strand not in used:
            fam.arcs.append(walk(strand))
    for e in sorted(c.support()):
        for i in range(abs(c.get(e))):
            if (e, i) not in used:
                loop = walk((e, i))
                fam.loops.append(loop)
    return fam


@dataclass
class EmbeddedPath:
    vertices: List[int]
    loops: List[List[int]]

    @property
    def length(self) -> int:
        return len(self.vertices) - 1

    def is_simple(self) -> bool:
        return len(set(self.vertices)) == len(self.vertices)


def extract_embedded_path(fam: StrandFamily, source: Subcomplex, target: Subcomplex) -> EmbeddedPath:
    """Simple path from ``source`` to ``target`` among the strands.

    Revisited vertices are shortcut and the cut-off pieces returned as loops,
    together with any closed strands.
    """
    src, tgt = set(source.ids(0)), set(target.ids(0))
    arc = next((a for a in fam.arcs if a[0] in src and a[-1] in tgt), None)
    if arc is None:
        raise ComplexError("no strand joins the source to the target")
    path: List[int] = []
    loops = [list(l) for l in fam.loops]
    pos: Dict[int, int] = {}
    for v in arc:
        if v in pos:
            cut = path[pos[v]:] + [v]
            loops.append(cut)
            for u in path[pos[v] + 1:]:
                del pos[u]
            path = path[:pos[v] + 1]
        else:
            pos[v] = len(path)
            path.append(v)
    return EmbeddedPath(path, loops)


# --- surfaces in 3-manifolds --------------------------------------------------------------

@dataclass
class EmbeddedSurface:
    """Abstract surface built from unit sheets of a 2-chain.

    ``faces[k] = (triangle id, sign, copy)``; ``gluings`` pair (face, edge)
    sides; ``vertex_curves`` are (manifold vertex, closed, corner nodes),
    each capped to a single vertex of the surface.
    """
    faces: List[Tuple[int, int, int]]
    gluings: List[Tuple[Tuple[int, int], Tuple[int, int]]]
    free_sides: List[Tuple[int, int]]
    vertex_curves: List[Tuple[int, bool, List[Tuple[int, int]]]]
    corner_vertex: Dict[Tuple[int, int], int]
    components: int
    boundary_components: int
    component_stats: List[Dict[str, int]]

    @property
    def V(self) -> int:
        return len(self.vertex_curves)

    @property
    def E(self) -> int:
        return len(self.gluings) + len(self.free_sides)

    @property
    def F(self) -> int:
        return len(self.faces)

    @property
    def euler_characteristic(self) -> int:
        return self.V - self.E + self.F

    @property
    def genus(self) -> int:
        return sum(s["genus"] for s in self.component_stats)

    def face_chain(self) -> Chain:
        coeffs: Dict[int, int] = {}
        for sigma, sign, _ in self.faces:
            coeffs[sigma] = coeffs.get(sigma, 0) + sign
        return Chain(2, coeffs)

    def area(self, w: WeightAssignment) -> Fraction:
        return sum((w[sigma] for sigma, _, _ in self.faces), Fraction(0))

    def to_off(self, M: SimplicialComplex, pull: float = 0.1, spread: float = 0.02) -> str:
        """OFF mesh; each surface vertex sits at its manifold vertex pulled toward
        the barycentres of its faces and shifted by copy index."""
        if M.coordinates is None:
            raise ComplexError("the manifold has no vertex coordinates")
        pts = []
        for mv, _, corners in self.vertex_curves:
            base = [float(t) for t in M.coordinates[mv]]
            acc = [0.0, 0.0, 0.0]
            fs = sorted({f for f, _ in corners})
            for f in fs:
                sigma, _, copy = self.faces[f]
                tri = [[float(t) for t in M.coordinates[v]] for v in M.simplex(2, sigma)]
                for i in range(3):
                    bary = sum(p[i] for p in tri) / 3
                    acc[i] += base[i] + pull * (bary - base[i]) + spread * copy
            pts.append(tuple(a / len(fs) for a in acc))
        lines = ["OFF", f"{len(pts)} {self.F} {self.E}"]
        lines += [f"{x:.6f} {y:.6f} {z:.6f}" for x, y, z in pts]
        for f, (sigma, sign, _) in enumerate(self.faces):
            verts = [self.corner_vertex[(f, v)] for v in M.simplex(2, sigma)]
            if sign < 0:
                verts = [verts[0], verts[2], verts[1]]
            lines.append("3 " + " ".join(map(str, verts)))
        return "\n".join(lines) + "\n"


def _edge_walk(M: SimplicialComplex, e: int, tri_cof, edge_tris, tet_tris):
    """Triangles around edge e in rotation order with the tets before and after each.

    Returns a list of (triangle, tet before or None, tet after or None).
    """
    tris = sorted(edge_tris[e])
    tets_of = {t: sorted(tri_cof[t]) for t in tris}
    tset = set(tris)
    start = tris[0]
    ends = [t for t in tris if len(tets_of[t]) == 1]
    if ends:
        start = min(ends)
        prev = None
    else:
        prev = max(tets_of[start])  # head toward the lower-id tet first
    out = []
    cur = start
    while True:
        nxt_tets = [T for T in tets_of[cur] if T != prev]
        nxt = nxt_tets[0] if nxt_tets else None
        out.append((cur, prev, nxt))
        if nxt is None:
            break
        other = [t for t in tet_tris[nxt] if t in tset and t != cur]
        if len(other) != 1:
            raise ComplexError("edge link is not a circle or an arc")
        cur, prev = other[0], nxt
        if cur == start:
            break
    if len(out) != len(tris):
        raise ComplexError("edge link is not connected")
    return out


def desingularize_2(M: SimplicialComplex, c: Chain, rim: Optional[Chain] = None) -> EmbeddedSurface:
    """Surface carried by the integral 2-chain ``c`` in the 3-manifold ``M``.

    The boundary of ``c`` must lie on the boundary of ``M`` or on the support
    of ``rim`` (for instance a knot drawn in the interior).
    """
    if c.dim != 2:
        raise ComplexError("expected a 2-chain")
    _require_integral(c)
    rep = check_manifold(M)
    if rep.kind == NON_MANIFOLD or M.dim != 3:
        raise ComplexError(f"ambient complex is not a 3-manifold: {rep.reason or rep.kind}")
    bdry = rep.boundary
    open_edges = set(bdry.ids(1)) if bdry is not None else set()
    if rim is not None:
        open_edges |= set(rim.support())
    bd = apply_boundary(M, c)
    if any(e not in open_edges for e in bd.support()):
        raise ComplexError("chain boundary does not lie on the boundary of the manifold")
    tri_cof = M.cofaces(3)
    tet_tris = [[M.index(f) for f in _faces3(t)] for t in M.simplices[3]]
    support = sorted(c.support())
    faces: List[Tuple[int, int, int]] = []
    face_of: Dict[Tuple[int, int], int] = {}
    for sigma in support:
        k = c.get(sigma)
        for i in range(abs(k)):
            face_of[(sigma, i)] = len(faces)
            faces.append((sigma, 1 if k > 0 else -1, i))
    edge_tris: Dict[int, List[int]] = {}
    all_edge_tris = M.cofaces(2)
    touched = sorted({M.index(e) for s in support for e in _faces2(M.simplex(2, s))})
    for e in touched:
        edge_tris[e] = all_edge_tris[e]
    gluings = []
    free = []
    for e in touched:
        lo, hi = M.simplex(1, e)
        seq = []
        for sigma, before, after in _edge_walk(M, e, tri_cof, edge_tris, tet_tris):
            k = c.get(sigma)
            if not k:
                continue
            tets = tri_cof[sigma]
            if len(tets) == 2:
                ascending = after is not None and (before is None or after > before)
            else:
                ascending = after is not None
            inc = _incidence(M.simplex(2, sigma), (lo, hi))
            sign = (1 if k > 0 else -1) * inc
            copies = range(abs(k)) if ascending else range(abs(k) - 1, -1, -1)
            seq += [(sign, face_of[(sigma, i)]) for i in copies]
        pairs, left = _stack_match(seq)
        if left and e not in open_edges:
            raise AssertionError("unbalanced sheets at an interior edge")
        gluings += [((a, e), (b, e)) for a, b in pairs]
        free += [(f, e) for f in left]
    # corner curves: nodes (face, edge, vertex)
    node_id: Dict[Tuple[int, int, int], int] = {}
    nodes = []
    for f, (sigma, _, _) in enumerate(faces):
        for e in _faces2(M.simplex(2, sigma)):
            eid = M.index(e)
            for v in e:
                node_id[(f, eid, v)] = len(nodes)
                nodes.append((f, eid, v))
    adj: List[List[int]] = [[] for _ in nodes]

    def link(a, b):
        adj[a].append(b)
        adj[b].append(a)

    for f, (sigma, _, _) in enumerate(faces):
        tri = M.simplex(2, sigma)
        for v in tri:
            e1, e2 = [M.index(e) for e in _faces2(tri) if v in e]
            link(node_id[(f, e1, v)], node_id[(f, e2, v)])
    for (a, e), (b, _) in gluings:
        for v in M.simplex(1, e):
            link(node_id[(a, e, v)], node_id[(b, e, v)])
    curves = []
    corner_vertex: Dict[Tuple[int, int], int] = {}
    curve_of = [-1] * len(nodes)
    for s in range(len(nodes)):
        if curve_of[s] >= 0:
            continue
        comp = [s]
        curve_of[s] = len(curves)
        for x in comp:
            for y in adj[x]:
                if curve_of[y] < 0:
                    curve_of[y] = len(curves)
                    comp.append(y)
        closed = all(len(adj[x]) == 2 for x in comp)
        curves.append((nodes[s][2], closed, [(nodes[x][0], nodes[x][1]) for x in comp]))
    for x, (f, _, v) in enumerate(nodes):
        corner_vertex[(f, v)] = curve_of[x]
    # components and boundary curves
    dsu = _DSU(len(faces))
    for (a, _), (b, _) in gluings:
        dsu.union(a, b)
    comps = sorted({dsu.find(f) for f in range(len(faces))})
    side_dsu = _DSU(len(free))
    by_curve: Dict[int, List[int]] = {}
    for k, (f, e) in enumerate(free):
        for v in M.simplex(1, e):
            by_curve.setdefault(curve_of[node_id[(f, e, v)]], []).append(k)
    for ks in by_curve.values():
        for k in ks[1:]:
            side_dsu.union(ks[0], k)
    stats = []
    for root in comps:
        fs = [f for f in range(len(faces)) if dsu.find(f) == root]
        fset = set(fs)
        V = sum(1 for cv in curves if cv[2][0][0] in fset)
        E = sum(1 for (a, _), _ in gluings if a in fset) + sum(1 for f, _ in free if f in fset)
        F = len(fs)
        b = side_dsu.classes(k for k, (f, _) in enumerate(free) if f in fset)
        chi = V - E + F
        stats.append({"V": V, "E": E, "F": F, "chi": chi, "boundary": b, "genus": (2 - chi - b) // 2})
    return EmbeddedSurface(
        faces, gluings, free, curves, corner_vertex, len(comps),
        side_dsu.classes(range(len(free))), stats,
    )


def _faces2(tri):
    a, b, c = tri
    return [(a, b), (a, c), (b, c)]


def _faces3(tet):
    a, b, c, d = tet
    return [(b, c, d), (a, c, d), (a, b, d), (a, b, c)]


def _incidence(tri, edge) -> int:
    """Coefficient of the edge in the boundary of the sorted triangle."""
    a, b, c = tri
    return {(b, c): 1, (a, c): -1, (a, b): 1}[tuple(edge)]


def surface_stats(S: EmbeddedSurface) -> Dict[str, int]:
    return {
        "V": S.V,
        "E": S.E,
        "F": S.F,
        "euler_characteristic": S.euler_characteristic,
        "components": S.components,
        "boundary_components": S.boundary_components,
        "genus": S.genus,
    }
