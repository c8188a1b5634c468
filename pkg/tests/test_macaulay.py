import pytest
from sympy import QQ

from src.errors import PreconditionError
from src.exactla import DenseMatrix, rank
from src.macaulay import (
    Bounds,
    build_quotient,
    degree_bounds,
    echelon_rows,
    macaulay_matrix,
    normal_form_matrix,
    override_bounds,
    sylvester_matrix,
)
from src.polycore import Field, evaluate, from_coeff_vector, mono_basis


@pytest.mark.parametrize(
    "degrees, m, at_infinity, k, delta",
    [
        ((2,), 1, True, 1, 2),
        ((2, 2), 2, False, 2, 2),
        ((2, 2), 2, True, 2, 3),
        ((1, 1), 1, True, 1, 2),
        ((2, 2, 2), 2, True, 4, 5),
        ((3,), 1, True, 2, 3),
    ],
)
def test_degree_bounds(degrees, m, at_infinity, k, delta):
    bounds = degree_bounds(degrees, m, at_infinity)
    assert (bounds.k, bounds.delta) == (k, delta)
    assert bounds.big_delta == max(delta - 1, 2 * k + 1)


def test_degree_bounds_needs_enough_polynomials():
    with pytest.raises(PreconditionError):
        degree_bounds((2,), 2)


def test_override_bounds():
    bounds = degree_bounds((2,), 1)
    fixed = override_bounds(bounds, big_delta=6)
    assert fixed.big_delta == 6 and fixed.big_delta_fixed
    assert override_bounds(bounds, k=1, delta=4).delta == 4
    with pytest.raises(PreconditionError):
        override_bounds(bounds, k=3, delta=2)


def test_sylvester_rows(system):
    sys_ = system(["x"], ["x^2 - 1"])
    syl = sylvester_matrix(sys_, 3)
    assert syl.matrix.shape == (2, 4)
    assert syl.matrix.row(0) == (-1, 0, 1, 0)
    assert syl.labels == [(0, (0,)), (0, (1,))]


def test_macaulay_rows_span_the_truncation(system):
    sys_ = system(["x"], ["x^2 - 1"])
    qd = macaulay_matrix(sys_, Bounds(1, 2, 3))
    assert qd.columns == tuple(mono_basis(1, 3))
    assert list(qd.mac.entries) == [(0, -1, 0, 1), (-1, 0, 1, 0)]


@pytest.mark.parametrize(
    "names, polys, basis",
    [
        (["x"], ["x^2"], [(0,), (1,)]),
        (["x"], ["x^2 - 1"], [(0,), (1,)]),
        (["x"], ["(x-1)^2*(x-2)"], [(0,), (1,), (2,)]),
        (["x1", "x2"], ["x1^2", "x2^2"], [(0, 0), (1, 0), (0, 1), (1, 1)]),
        (["x", "y"], ["x^2", "x*y", "y^2"], [(0, 0), (1, 0), (0, 1)]),
        (["x1", "x2"], ["x1^2 - 1", "x2^2 - 4"], [(0, 0), (1, 0), (0, 1), (1, 1)]),
    ],
)
def test_quotient_basis(system, names, polys, basis):
    qd = build_quotient(system(names, polys))
    assert list(qd.basis) == basis
    assert qd.N == len(basis)
    assert qd.bounds.D == max(sum(b) for b in basis)
    assert qd.bounds.big_delta == qd.bounds.final_delta()


def test_reducer_columns_lie_in_the_kernel(system):
    qd = build_quotient(system(["x1", "x2"], ["x1^2 - 1", "x2^2 - 4"]))
    assert (qd.mac @ qd.reducer).is_zero()
    for i, b in enumerate(qd.basis):
        row = qd.reducer.row(qd.column_index[b])
        assert row == tuple(1 if j == i else 0 for j in range(qd.N))


def test_roots_at_infinity_give_empty_quotient(system):
    qd = build_quotient(system(["x"], ["x + 1", "x"]))
    assert (qd.bounds.k, qd.bounds.delta) == (1, 2)
    assert qd.N == 0
    assert qd.bounds.D is None


def test_final_delta_leaves_room_for_shifted_traces(system):
    qd = build_quotient(system(["x", "y"], ["x^2", "x*y", "y^2"]))
    assert qd.bounds.k == 4
    assert qd.bounds.D == 1
    assert qd.bounds.big_delta == 4


def test_raising_delta_keeps_the_quotient(system):
    sys_ = system(["x"], ["(x-1)^2*(x-2)"])
    qd = build_quotient(sys_)
    raised = build_quotient(sys_, big_delta=qd.bounds.big_delta + 1)
    assert raised.basis == qd.basis


def test_normal_form_matrix_and_echelon_rows():
    field = Field.rational()
    columns = mono_basis(1, 2)
    rows = DenseMatrix.from_rows([[-1, 0, 1]], field)
    reduced, pivots = echelon_rows(rows)
    assert pivots == [2]
    assert reduced == [(-1, 0, 1)]
    basis, reducer = normal_form_matrix(rows, columns)
    assert basis == ((0,), (1,))
    assert reducer.row(2) == (1, 0)


@pytest.mark.parametrize(
    "names, polys, roots",
    [
        (["x"], ["(x-1)^2*(x-2)"], [(1,), (2,)]),
        (["x1", "x2"], ["x1^2 - 1", "x2^2 - 4"], [(1, 2), (1, -2), (-1, 2), (-1, -2)]),
        (["x1", "x2"], ["x1*x2 - 2", "x1 + x2 - 3"], [(1, 2), (2, 1)]),
    ],
)
def test_macaulay_rows_vanish_at_the_roots(system, names, polys, roots):
    sys_ = system(names, polys)
    qd = build_quotient(sys_)
    for r in range(qd.mac.rows):
        p = from_coeff_vector(qd.mac.row(r), qd.columns, sys_.ring)
        for point in roots:
            assert evaluate(p, tuple(QQ(v) for v in point)) == 0


@pytest.mark.parametrize(
    "names, polys",
    [
        (["x1", "x2"], ["x1^2 - 1", "x2^2 - 4"]),
        (["x1", "x2"], ["x1*x2 - 2", "x1 + x2 - 3"]),
        (["x", "y"], ["x^2", "x*y", "y^2"]),
        (["x1", "x2", "x3"], ["x1^2 - 1", "(x2 - 1)^2", "x3 - x1 - x2"]),
    ],
)
def test_corank_does_not_depend_on_polynomial_order(system, names, polys):
    forward = build_quotient(system(names, polys))
    backward = build_quotient(system(names, list(reversed(polys))))
    assert backward.N == forward.N
    assert rank(backward.mac) == rank(forward.mac)
    assert backward.basis == forward.basis
