import random
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from conftest import chain, make, rp2_line
from oracles import CIRCLE, RP2, TETRA, TETRA_BOUNDARY, brute_obcp, brute_ohcp, cone_tops, grid_shortest_path
from optchain.complex import (
    Chain,
    ComplexError,
    Subcomplex,
    WeightAssignment,
    apply_boundary,
    l1_norm,
    unit_weights,
)
from optchain.gadgets import gen_grid
from optchain.solver import (
    AboveCutoff,
    BudgetExhausted,
    Infeasible,
    OptimalChain,
    relative_class_matches,
    solve_obcp,
    solve_ohcp,
    solve_relative_obcp,
    verify_equivalence,
)

DISK = [(0, 1, 2), (0, 2, 3), (0, 3, 4), (0, 4, 1)]  # square fan around vertex 0


def test_obcp_single_triangle():
    X = make(TETRA_BOUNDARY)
    b = apply_boundary(X, chain(X, [((0, 1, 2), 1)]))
    res = solve_obcp(X, unit_weights(X, 2), b)
    assert isinstance(res, OptimalChain)
    assert res.norm == 1 and res.integral
    assert apply_boundary(X, res.chain) == b


def test_obcp_prefers_cheap_side():
    X = make(TETRA_BOUNDARY)
    b = apply_boundary(X, chain(X, [((0, 1, 2), 1)]))
    w = WeightAssignment(2, (10, 1, 1, 1))
    res = solve_obcp(X, w, b)
    assert res.norm == 3
    assert res.chain.get(X.index((0, 1, 2))) == 0


def test_obcp_not_a_boundary():
    X = make(CIRCLE)
    z = chain(X, [((0, 1), 1), ((1, 2), 1), ((0, 2), -1)])
    res = solve_obcp(X, WeightAssignment(2, ()), z, 2)
    assert isinstance(res, Infeasible) and not res
    assert res.reason == "not a boundary"
    assert res.decide(100) is False


def test_obcp_on_rp2_needs_integrality():
    # the non-trivial loop bounds twice but not once
    X = make(RP2)
    w = unit_weights(X, 2)
    total = Chain(2, {i: 1 for i in range(X.count(2))})
    b = apply_boundary(X, total)
    res = solve_obcp(X, w, b)
    assert res.integral and apply_boundary(X, res.chain) == b


def test_ohcp_trivial_class_is_zero():
    X = make(TETRA)
    a = chain(X, [((0, 1, 2), 1), ((0, 1, 3), -1), ((0, 2, 3), 1), ((1, 2, 3), -1)])
    res = solve_ohcp(X, unit_weights(X, 2), a)
    assert res.norm == 0 and not res.chain
    assert res.certificate is not None


def test_ohcp_sphere_class_is_fixed():
    X = make(TETRA_BOUNDARY)
    a = chain(X, [((0, 1, 2), 1)])
    res = solve_ohcp(X, unit_weights(X, 2), a)
    assert res.norm == 1 and res.chain == a


def test_ohcp_loop_in_disk_is_null():
    X = make(DISK)
    loop = chain(X, [((1, 2), 1), ((2, 3), 1), ((3, 4), 1), ((1, 4), -1)])
    res = solve_ohcp(X, unit_weights(X, 1), loop)
    assert res.norm == 0
    assert res.certificate is not None
    assert res.chain == loop + apply_boundary(X, res.certificate)


def test_input_validation():
    X = make([(0, 1)])
    b = chain(X, [((0,), 2)])
    with pytest.raises(ComplexError):
        solve_ohcp(X, unit_weights(X, 0), Chain(0, {0: Fraction(1, 2)}))
    with pytest.raises(ValueError):
        solve_obcp(X, unit_weights(X, 1), b, mode="exact")


def test_weights_must_match():
    X = make(TETRA_BOUNDARY)
    with pytest.raises(ComplexError):
        solve_ohcp(X, unit_weights(X, 1), chain(X, [((0, 1, 2), 1)]))


def test_cutoff_on_decision():
    X = make(TETRA_BOUNDARY)
    b = apply_boundary(X, chain(X, [((0, 1, 2), 1)]))
    w = WeightAssignment(2, (5, 5, 5, 5))
    res = solve_obcp(X, w, b, cutoff=3)
    # the relaxation is integral so the optimum is still reported
    assert isinstance(res, OptimalChain) and res.norm == 5
    assert res.decide(5) and not res.decide(4)
    above = AboveCutoff(Fraction(7, 2), Fraction(3))
    assert not above and above.decide(3) is False
    with pytest.raises(ValueError):
        above.decide(4)


@pytest.mark.parametrize("N", [1, 2, 3, 6])
def test_grid_relative_obcp_matches_bfs(N):
    g = gen_grid(N)
    X = g.complex
    res = solve_relative_obcp(X, g.subcomplexes["A"], g.weights[1], g.chains["b"], 1, mode="lp")
    assert res.integral
    assert res.norm == grid_shortest_path(N) == N
    assert relative_class_matches(X, g.subcomplexes["A"], res.chain, g.chains["b"])


def test_relative_obcp_checks_support():
    g = gen_grid(2)
    X = g.complex
    interior = chain(X, [((4,), 1)])
    with pytest.raises(ComplexError):
        solve_relative_obcp(X, g.subcomplexes["A"], g.weights[1], interior, 1)


def test_rp2_line_is_not_an_integral_boundary():
    X = make(RP2)
    z = rp2_line(X)
    assert isinstance(solve_obcp(X, unit_weights(X, 2), z), Infeasible)


def test_ohcp_with_torsion():
    X = make(RP2)
    w = unit_weights(X, 1)
    z = rp2_line(X)
    # the relaxation collapses the class to zero; over Z the line stays essential
    assert solve_ohcp(X, w, z, mode="lp").norm == 0
    res = solve_ohcp(X, w, z)
    assert res.integral and res.norm == 3 and res.method == "ilp"
    assert res.chain + apply_boundary(X, res.certificate) * -1 == z
    assert solve_ohcp(X, w, z * 2).norm == 0
    assert solve_ohcp(X, w, z * 3).norm == 3
    with pytest.raises(BudgetExhausted):
        solve_ohcp(X, w, z, max_nodes=1)


def test_verify_equivalence_on_cone():
    X = make(cone_tops(TETRA_BOUNDARY))
    w = unit_weights(X, 2)
    a = chain(X, [((0, 1, 2), 1)])
    rep = verify_equivalence(X, w, a)
    assert rep.ok and rep.equal_norms and rep.ohcp.norm == rep.obcp.norm


# --- exhaustive comparison -----------------------------------------------------------

@given(st.integers(0, 10_000))
def test_obcp_matches_enumeration(seed):
    rng = random.Random(seed)
    tops = list({tuple(sorted(rng.sample(range(5), 3))) for _ in range(rng.randint(2, 8))})
    labels = sorted({v for s in tops for v in s})
    tops = [tuple(labels.index(v) for v in s) for s in tops]
    X = make(tops)
    w = WeightAssignment(2, tuple(Fraction(rng.randint(1, 4), rng.choice((1, 2))) for _ in range(X.count(2))))
    c0 = Chain.from_dense(2, [rng.randint(-2, 2) for _ in range(X.count(2))])
    b = apply_boundary(X, c0)
    res = solve_obcp(X, w, b, 2)
    bdict = {X.simplex(1, e): v for e, v in b.coefficients.items()}
    wts_by_tuple = [w[X.index(s)] for s in sorted(X.simplices[2])]
    brute = brute_obcp(tops, wts_by_tuple, bdict, 2)
    assert brute is not None
    assert res.integral and apply_boundary(X, res.chain) == b
    assert res.norm <= brute[0] <= l1_norm(c0, w)
    if all(abs(v) <= 2 for v in res.chain.coefficients.values()):
        assert res.norm == brute[0]


@given(st.integers(0, 10_000))
def test_ohcp_matches_enumeration_on_torsion_free(seed):
    rng = random.Random(seed)
    tops = rng.choice([TETRA_BOUNDARY, cone_tops(CIRCLE), DISK, cone_tops(TETRA_BOUNDARY)])
    X = make(tops)
    n = 2 if X.count(2) <= 12 and rng.random() < 0.5 else 1
    if X.count(n) > 12:
        n = 1 if X.count(1) <= 12 else 2
    w = WeightAssignment(n, tuple(Fraction(rng.randint(1, 5)) for _ in range(X.count(n))))
    a = Chain.from_dense(n, [rng.randint(-1, 1) for _ in range(X.count(n))])
    if n >= 1:
        # keep a a cycle so the class is meaningful
        a = a if not apply_boundary(X, a) else Chain(n, {})
    res = solve_ohcp(X, w, a, n)
    adict = {X.simplex(n, i): v for i, v in a.coefficients.items()}
    wts = [w[X.index(s)] for s in sorted(X.simplices[n])]
    brute = brute_ohcp(tops, wts, adict, n)
    assert res.integral
    assert res.norm <= brute[0]
    if all(abs(v) <= 2 for v in res.chain.coefficients.values()):
        assert res.norm == brute[0]


def test_relative_obcp_rel_boundary_triangle():
    X = make(TETRA_BOUNDARY)
    b = apply_boundary(X, chain(X, [((0, 1, 2), 1)]))
    A = Subcomplex.from_simplices(X, [(0, 1), (1, 2), (0, 2)])
    res = solve_relative_obcp(X, A, unit_weights(X, 2), b, 2)
    assert res.norm == 1
