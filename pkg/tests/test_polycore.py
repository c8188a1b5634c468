import numpy as np
import pytest
from sympy import QQ

from src.errors import (
    DegreeOverflowError,
    PreconditionError,
    SystemParseError,
    VariableMismatchError,
)
from src.polycore import (
    NEG_INF,
    Field,
    coeff_vector,
    determinant,
    evaluate,
    format_polynomial,
    from_coeff_vector,
    jacobian_det,
    make_ring,
    make_system,
    mono_basis,
    mono_key,
    parse_polynomial,
    poly_mul,
    total_degree,
)


def test_mono_basis_graded_order():
    """Lower degree first, x1 before x2 within a degree."""
    assert mono_basis(2, 2) == [(0, 0), (1, 0), (0, 1), (2, 0), (1, 1), (0, 2)]
    assert mono_basis(1, 0) == [(0,)]
    assert sorted(mono_basis(3, 3), key=mono_key) == mono_basis(3, 3)


@pytest.mark.parametrize("m, d, size", [(1, 4, 5), (2, 3, 10), (3, 2, 10)])
def test_mono_basis_size(m, d, size):
    assert len(mono_basis(m, d)) == size


def test_mono_basis_rejects_bad_arguments():
    with pytest.raises(PreconditionError):
        mono_basis(0, 1)
    with pytest.raises(PreconditionError):
        mono_basis(2, -1)


def test_parse_polynomial_rational_terms(rational):
    ring = make_ring(["x1", "x2"], rational)
    p = parse_polynomial("3/2*x1^2*x2 - x2 + 1", ring, rational)
    assert p[(2, 1)] == QQ(3, 2)
    assert p[(0, 1)] == -1
    assert p[(0, 0)] == 1
    assert total_degree(p) == 3


def test_parse_polynomial_powers_and_products(rational):
    ring = make_ring(["x"], rational)
    assert parse_polynomial("(x-1)**2*(x-2)", ring, rational) == parse_polynomial(
        "x^3 - 4*x^2 + 5*x - 2", ring, rational
    )


@pytest.mark.parametrize("text", ["x^", "x +* 2", ""])
def test_parse_polynomial_malformed(rational, text):
    ring = make_ring(["x"], rational)
    with pytest.raises(SystemParseError):
        parse_polynomial(text, ring, rational, line=3)


def test_parse_polynomial_unknown_variable(rational):
    ring = make_ring(["x"], rational)
    with pytest.raises(SystemParseError) as excinfo:
        parse_polynomial("x + z", ring, rational, line=4)
    assert excinfo.value.line == 4
    assert "z" in str(excinfo.value)


def test_parse_polynomial_rejects_non_polynomials(rational):
    ring = make_ring(["x"], rational)
    with pytest.raises(SystemParseError):
        parse_polynomial("1/x", ring, rational)


def test_decimals_need_approx_field(rational, approx):
    with pytest.raises(SystemParseError):
        parse_polynomial("1.5*x", make_ring(["x"], rational), rational)
    p = parse_polynomial("1.5*x", make_ring(["x"], approx), approx)
    assert float(p[(1,)]) == pytest.approx(1.5)


def test_make_ring_rejects_duplicates(rational):
    with pytest.raises(PreconditionError):
        make_ring(["x", "x"], rational)
    with pytest.raises(PreconditionError):
        make_ring([], rational)


def test_make_system_sorts_by_degree_stably(system):
    sys_ = system(["x", "y"], ["x", "y^2", "y"])
    assert sys_.degrees == (2, 1, 1)
    assert format_polynomial(sys_.polys[1]) == "x"
    assert (sys_.m, sys_.s) == (2, 3)


def test_make_system_rejects_zero(rational):
    ring = make_ring(["x"], rational)
    with pytest.raises(PreconditionError):
        make_system(ring, [ring.zero], rational)


def test_coeff_vector_round_trip(rational):
    ring = make_ring(["x", "y"], rational)
    basis = mono_basis(2, 2)
    p = parse_polynomial("x*y - 2*y + 3", ring, rational)
    vector = coeff_vector(p, basis)
    assert vector == [3, 0, -2, 0, 1, 0]
    assert from_coeff_vector(vector, basis, ring) == p


def test_coeff_vector_overflow(rational):
    ring = make_ring(["x"], rational)
    with pytest.raises(DegreeOverflowError):
        coeff_vector(parse_polynomial("x^3", ring, rational), mono_basis(1, 2))


def test_total_degree_of_zero(rational):
    ring = make_ring(["x"], rational)
    assert total_degree(ring.zero) == NEG_INF


def test_poly_mul_variable_mismatch(rational):
    one = make_ring(["x"], rational)
    two = make_ring(["x", "y"], rational)
    with pytest.raises(VariableMismatchError):
        poly_mul(one.gens[0], two.gens[0])


def test_jacobian_of_squares(system):
    sys_ = system(["x1", "x2"], ["x1^2", "x2^2"])
    expected = parse_polynomial("4*x1*x2", sys_.ring, sys_.field)
    assert jacobian_det(sys_) == expected


def test_jacobian_needs_square_system(system):
    with pytest.raises(PreconditionError):
        jacobian_det(system(["x"], ["x+1", "x"]))


def test_determinant_of_polynomial_matrix(rational):
    ring = make_ring(["x", "y"], rational)
    x, y = ring.gens
    rows = [[ring.one, ring.zero], [x**2, x + y]]
    assert determinant(rows, ring) == x + y
    assert determinant([[x, ring.one], [x**2, x + y]], ring) == x * y
    assert determinant([], ring) == ring.one


def test_evaluate_exact_and_float(system):
    sys_ = system(["x", "y"], ["x^2 - y"])
    f = sys_.polys[0]
    assert evaluate(f, [QQ(2), QQ(4)]) == 0
    assert evaluate(f, [1.5, 2.25]) == pytest.approx(0.0)


def test_format_polynomial(system):
    sys_ = system(["x"], ["x^2 - 1"])
    assert format_polynomial(sys_.polys[0]) == "x**2 - 1"


def test_field_helpers():
    approx = Field.approx(1e-6)
    assert approx.is_zero(1e-9)
    assert approx.approx_equal(1.0, 1.0 + 1e-9)
    assert not Field.rational().approx_equal(QQ(1), QQ(1, 2))
    assert approx.name == "approx"


def random_poly(ring, rng, degree=3, terms=4):
    monos = mono_basis(ring.ngens, degree)
    picks = rng.choice(len(monos), size=terms, replace=False)
    return ring.from_dict(
        {monos[int(i)]: QQ(int(rng.integers(-5, 6)), int(rng.integers(1, 4))) for i in picks}
    )


@pytest.mark.parametrize("seed", range(20))
def test_ring_axioms_on_random_polynomials(rational, seed):
    rng = np.random.default_rng(seed)
    ring = make_ring(["x1", "x2", "x3"], rational)
    p, q, r = (random_poly(ring, rng) for _ in range(3))
    assert poly_mul(p, q) == poly_mul(q, p)
    assert poly_mul(poly_mul(p, q), r) == poly_mul(p, poly_mul(q, r))
    assert poly_mul(p, q + r) == poly_mul(p, q) + poly_mul(p, r)
    assert poly_mul(p, ring.one) == p
    assert (p + q) - q == p
    if p and q:
        assert total_degree(poly_mul(p, q)) == total_degree(p) + total_degree(q)


@pytest.mark.parametrize("seed", range(10))
def test_graded_order_is_a_total_order(seed):
    rng = np.random.default_rng(seed)
    monos = [tuple(int(e) for e in rng.integers(0, 4, size=3)) for _ in range(30)]
    for a in monos:
        for b in monos:
            ka, kb = mono_key(a), mono_key(b)
            assert (ka < kb) + (ka == kb) + (ka > kb) == 1
            assert (ka == kb) == (a == b)
            if sum(a) < sum(b):
                assert ka < kb
    ordered = sorted(set(monos), key=mono_key)
    basis = mono_basis(3, 9)
    position = {mono: i for i, mono in enumerate(basis)}
    assert [position[mono] for mono in ordered] == sorted(position[mono] for mono in ordered)
