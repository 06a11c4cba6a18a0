from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from conftest import chain, make
from oracles import TETRA
from optchain.complex import Chain, ComplexError, Subcomplex, apply_boundary, l1_norm, unit_weights
from optchain.desingularize import (
    StrandFamily,
    desingularize_1,
    desingularize_2,
    extract_embedded_path,
    surface_stats,
)
from optchain.gadgets import (
    SMALL_FORMULA,
    gen_bounded_sphere,
    gen_cube_knot,
    gen_grid,
    gen_moebius_cube,
    gen_sat_complex,
    gen_solid_torus,
)
from optchain.solver import solve_obcp, solve_relative_obcp


def grid_chain(g, steps):
    """1-chain from ((i, j), (i', j'), coefficient) triples on a grid instance."""
    N = g.metadata["N"]
    vid = lambda p: p[0] * (N + 1) + p[1]
    return chain(g.complex, [((vid(p), vid(q)), k) for p, q, k in steps])


def boundary_of_grid(g):
    N = g.metadata["N"]
    vid = lambda i, j: i * (N + 1) + j
    ring = [(vid(i, 0),) for i in range(N + 1)] + [(vid(i, N),) for i in range(N + 1)]
    ring += [(vid(0, j),) for j in range(N + 1)] + [(vid(N, j),) for j in range(N + 1)]
    return Subcomplex.from_simplices(g.complex, ring)


# --- one-dimensional -----------------------------------------------------------------

def test_single_edge_path():
    g = gen_grid(1)
    c = grid_chain(g, [((0, 0), (1, 0), 1)])
    fam = desingularize_1(g.complex, c, g.subcomplexes["A"])
    assert fam.arcs == [[0, 2]] and not fam.loops
    path = extract_embedded_path(fam, g.subcomplexes["L"], g.subcomplexes["R"])
    assert path.vertices == [0, 2] and path.length == 1


def test_two_by_two_vertex_pattern():
    # weights 2,2,1,1,1,1,1 on the edges around (1,1) and (2,1)
    g = gen_grid(3)
    steps = [
        ((1, 1), (2, 1), 2),
        ((2, 1), (3, 1), 2),
        ((0, 1), (1, 1), 1),
        ((1, 0), (1, 1), 1),
        ((2, 3), (2, 2), 1),
        ((2, 2), (2, 1), 1),
        ((2, 1), (2, 0), 1),
    ]
    c = grid_chain(g, steps)
    X = g.complex
    fam = desingularize_1(X, c, boundary_of_grid(g))
    assert fam.chain(X) == c
    assert fam.total_length() == 9
    assert len(fam.arcs) == 3 and not fam.loops
    starts = sorted(a[0] for a in fam.arcs)
    ends = sorted(a[-1] for a in fam.arcs)
    assert starts == sorted([1 * 4 + 0, 0 * 4 + 1, 2 * 4 + 3])
    assert ends == sorted([3 * 4 + 1, 3 * 4 + 1, 2 * 4 + 0])


def test_doubled_triangle_loop():
    g = gen_grid(3)
    c = grid_chain(g, [((1, 1), (2, 1), 2), ((2, 1), (2, 2), 2), ((2, 2), (1, 1), 2)])
    fam = desingularize_1(g.complex, c)
    assert not fam.arcs and len(fam.loops) == 2
    assert all(len(l) == 4 and l[0] == l[-1] for l in fam.loops)
    assert fam.chain(g.complex) == c


def test_extra_loop_reported_separately():
    g = gen_grid(3)
    X = g.complex
    res = solve_relative_obcp(X, g.subcomplexes["A"], g.weights[1], g.chains["b"], 1)
    loop = grid_chain(g, [((1, 1), (2, 1), 1), ((2, 1), (2, 2), 1), ((2, 2), (1, 1), 1)])
    fam = desingularize_1(X, res.chain + loop, g.subcomplexes["A"])
    path = extract_embedded_path(fam, g.subcomplexes["L"], g.subcomplexes["R"])
    assert path.is_simple() and path.length == 3
    assert len(path.loops) == 1 and len(path.loops[0]) == 4


def test_revisited_vertex_is_shortcut():
    fam = StrandFamily(arcs=[[0, 1, 3, 4, 1, 2]])
    X = make([(0, 1, 3), (1, 3, 4), (1, 2, 4)])
    src = Subcomplex.from_simplices(X, [(0,)])
    dst = Subcomplex.from_simplices(X, [(2,)])
    path = extract_embedded_path(fam, src, dst)
    assert path.vertices == [0, 1, 2]
    assert path.loops == [[1, 3, 4, 1]]


def test_no_arc_is_an_error():
    g = gen_grid(2)
    fam = StrandFamily()
    with pytest.raises(ComplexError):
        extract_embedded_path(fam, g.subcomplexes["L"], g.subcomplexes["R"])


def test_one_dim_errors():
    g = gen_grid(2)
    X = g.complex
    with pytest.raises(ComplexError):
        desingularize_1(X, Chain(1, {0: Fraction(1, 2)}))
    with pytest.raises(ComplexError):
        desingularize_1(X, grid_chain(g, [((0, 0), (1, 0), 1)]))  # open ends, no terminals
    with pytest.raises(ComplexError):
        desingularize_1(make(TETRA), Chain(1, {0: 1}))  # not a surface


@pytest.mark.parametrize("N", [2, 4, 7])
def test_grid_path_is_embedded(N):
    g = gen_grid(N)
    X = g.complex
    res = solve_relative_obcp(X, g.subcomplexes["A"], g.weights[1], g.chains["b"], 1)
    fam = desingularize_1(X, res.chain, g.subcomplexes["A"])
    path = extract_embedded_path(fam, g.subcomplexes["L"], g.subcomplexes["R"])
    assert path.is_simple() and path.length == N


@given(st.lists(st.integers(-2, 2), min_size=3, max_size=3))
def test_strands_partition_cycles(ks):
    # integer combination of three triangle boundaries in the 3x3 grid
    g = gen_grid(3)
    X = g.complex
    tris = [X.simplices[2][i] for i in (0, 5, 11)]
    c = Chain(1, {})
    for t, k in zip(tris, ks):
        c = c + apply_boundary(X, chain(X, [(t, k)]))
    fam = desingularize_1(X, c)
    assert fam.chain(X) == c
    assert fam.total_length() == sum(abs(v) for v in c.coefficients.values())


# --- two-dimensional -----------------------------------------------------------------

def test_single_triangle_surface():
    X = make(TETRA)
    c = chain(X, [((0, 1, 2), 1)])
    S = desingularize_2(X, c)
    st_ = surface_stats(S)
    assert (st_["euler_characteristic"], st_["genus"], st_["boundary_components"]) == (1, 0, 1)
    assert S.area(unit_weights(X, 2)) == 1


@pytest.mark.parametrize("copies", [1, 2, 3])
def test_parallel_spheres(copies):
    g = gen_bounded_sphere(copies)
    S = desingularize_2(g.complex, g.chains["c"])
    assert S.F == 4 * copies
    assert S.components == copies
    assert S.euler_characteristic == 2 * copies
    assert S.genus == 0
    assert S.face_chain() == g.chains["c"]
    assert S.area(g.weights[2]) == l1_norm(g.chains["c"], g.weights[2])


def test_meridian_disc():
    g = gen_solid_torus()
    S = desingularize_2(g.complex, g.chains["meridian_disc"])
    assert (S.euler_characteristic, S.boundary_components, S.genus) == (1, 1, 0)


def test_cube_knot_surface_and_off(tmp_path):
    g = gen_cube_knot(2)
    M, w, b = g.complex, g.weights[2], g.chains["b"]
    res = solve_obcp(M, w, b)
    S = desingularize_2(M, res.chain, rim=b)
    assert S.face_chain() == res.chain
    assert S.area(w) == res.norm
    assert S.boundary_components == 1
    off = S.to_off(M)
    head = off.splitlines()
    assert head[0] == "OFF"
    nv, nf, _ = map(int, head[1].split())
    assert nf == S.F and nv == S.V


def test_rim_required_for_interior_boundary():
    g = gen_moebius_cube()
    M, b = g.complex, g.chains["b"]
    res = solve_obcp(M, unit_weights(M, 2), b)
    with pytest.raises(ComplexError):
        desingularize_2(M, res.chain)


def test_two_dim_errors():
    sat = gen_sat_complex(SMALL_FORMULA)
    with pytest.raises(ComplexError):
        desingularize_2(sat.complex, sat.chains["[F0]"])
    X = make(TETRA)
    with pytest.raises(ComplexError):
        desingularize_2(X, Chain(2, {0: Fraction(1, 2)}))


def test_moebius_optimum_is_an_orientable_surface():
    g = gen_moebius_cube()
    M, b = g.complex, g.chains["b"]
    w = unit_weights(M, 2)
    res = solve_obcp(M, w, b)
    S = desingularize_2(M, res.chain, rim=b)
    assert S.face_chain() == res.chain and S.area(w) == res.norm
    for comp in S.component_stats:
        assert comp["genus"] >= 0
