import itertools
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from conftest import chain, make
from oracles import CIRCLE, RP2, TETRA, TETRA_BOUNDARY, boundary_rows, closure
from optchain.complex import (
    CLOSED_3_MANIFOLD,
    MANIFOLD_WITH_BOUNDARY,
    NON_MANIFOLD,
    SURFACE,
    Chain,
    ComplexError,
    SparseIntMatrix,
    Subcomplex,
    WeightAssignment,
    apply_boundary,
    boundary_matrix,
    build_complex,
    check_manifold,
    cone,
    l1_norm,
    relative_boundary_matrix,
    unit_weights,
)
from optchain.gadgets import freudenthal_cube


def test_closure_counts():
    X = make(TETRA)
    assert [X.count(n) for n in range(4)] == [4, 6, 4, 1]
    assert X.euler_characteristic() == 1


def test_labels_are_compacted():
    X = build_complex([(10, 30, 20)])
    assert X.vertex_labels == (10, 20, 30)
    assert X.simplices[2] == ((0, 1, 2),)


@pytest.mark.parametrize("bad", [[()], [(1, 1)], [(0, 1), (1, 0)], [(-1, 2)]])
def test_build_rejects(bad):
    with pytest.raises(ComplexError):
        build_complex(bad)


def test_boundary_matrix_matches_oracle():
    for tops in (CIRCLE, TETRA_BOUNDARY, RP2, TETRA):
        X = make(tops)
        S = closure(tops)
        for n in range(1, X.dim + 1):
            assert boundary_matrix(X, n).to_dense() == boundary_rows(S, n)


def test_boundary_of_boundary_on_cube():
    X = freudenthal_cube(2)
    for n in (2, 3):
        assert not (boundary_matrix(X, n - 1) @ boundary_matrix(X, n)).entries


def test_chain_orientation_sign():
    X = make(TETRA_BOUNDARY)
    assert chain(X, [((1, 0, 2), 1)]) == -chain(X, [((0, 1, 2), 1)])


def test_chain_arithmetic_and_zero():
    X = make(CIRCLE)
    a = chain(X, [((0, 1), 2), ((1, 2), 1)])
    b = chain(X, [((0, 1), -2)])
    assert (a + b).coefficients == {X.index((1, 2)): 1}
    assert not (a - a)
    assert (a * 3).get(X.index((0, 1))) == 6


def test_chain_rejects_mixed_dimension():
    X = make(TETRA)
    with pytest.raises(ComplexError):
        Chain.from_simplices(X, [((0, 1), 1), ((0, 1, 2), 1)])


def test_boundary_of_triangle():
    X = make(TETRA_BOUNDARY)
    d = apply_boundary(X, chain(X, [((0, 1, 2), 1)]))
    assert d == chain(X, [((1, 2), 1), ((0, 2), -1), ((0, 1), 1)])


def test_weights_and_norm():
    X = make(CIRCLE)
    w = WeightAssignment(1, (Fraction(1, 2), 2, 3))
    c = chain(X, [((0, 1), -2), ((1, 2), 1)])
    assert l1_norm(c, w) == 1 + 3
    with pytest.raises(ValueError):
        WeightAssignment(1, (1, -1, 1))


def test_sparse_matrix_ops():
    M = SparseIntMatrix.from_dense([[1, 0, 2], [0, -1, 0]])
    assert M.transpose().to_dense() == [[1, 0], [0, -1], [2, 0]]
    assert M.dot([1, 2, 3]) == [7, -2]
    assert (M @ SparseIntMatrix.identity(3)).to_dense() == M.to_dense()
    assert M.submatrix([1], [1, 2]) == [[-1, 0]]


def test_subcomplex_closure_and_relative_matrix():
    X = make(TETRA_BOUNDARY)
    A = Subcomplex.from_simplices(X, [(0, 1, 2)])
    assert len(A.ids(1)) == 3 and len(A.ids(0)) == 3
    R = relative_boundary_matrix(X, A, 2)
    # 3 triangles outside A, 3 edges outside A
    assert R.shape == (3, 3)


def test_cone_is_contractible_shape():
    C = cone(make(CIRCLE))
    assert [C.count(n) for n in range(3)] == [4, 6, 3]


def test_manifold_classification():
    assert check_manifold(make(TETRA)).kind == MANIFOLD_WITH_BOUNDARY
    assert check_manifold(make(TETRA_BOUNDARY)).kind == SURFACE
    assert check_manifold(make(RP2)).kind == SURFACE
    two_tets = make([(0, 1, 2, 3), (0, 1, 2, 4), (0, 1, 2, 5)])
    assert check_manifold(two_tets).kind == NON_MANIFOLD
    # boundary of the 4-simplex: the 3-sphere
    S3 = make(list(itertools.combinations(range(5), 4)))
    assert check_manifold(S3).kind == CLOSED_3_MANIFOLD


def test_unit_weights():
    X = make(TETRA)
    assert unit_weights(X, 2).weights == (1, 1, 1, 1)


small_complexes = st.lists(
    st.lists(st.integers(0, 6), min_size=2, max_size=4, unique=True), min_size=1, max_size=8
)


@given(small_complexes)
def test_boundary_squared_is_zero(tops):
    tops = list({tuple(sorted(s)) for s in tops})
    X = build_complex(tops)
    for n in range(2, X.dim + 1):
        assert not (boundary_matrix(X, n - 1) @ boundary_matrix(X, n)).entries


@given(st.lists(st.integers(-3, 3), min_size=4, max_size=4), st.lists(st.integers(-3, 3), min_size=4, max_size=4))
def test_boundary_is_linear(u, v):
    X = make(TETRA_BOUNDARY)
    a, b = Chain.from_dense(2, u), Chain.from_dense(2, v)
    assert apply_boundary(X, a + b) == apply_boundary(X, a) + apply_boundary(X, b)
    assert not apply_boundary(X, apply_boundary(X, a))
