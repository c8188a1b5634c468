"""
Bezout and Dixon matrices, and the radical they expose

Univariate: the Bezoutian of (f, f') is the matrix of traces in the Horner
basis, and its kernel yields f/gcd(f, f'). Multivariate: the Dixon Bezoutian
of (f0, f_1..f_m) gives radical generators directly and, through a reduction
loop over a truncated monomial space, the multiplication matrices of the
radical quotient.
"""

import logging
from dataclasses import dataclass, field as dataclass_field
from functools import cached_property
from typing import Dict, List, Optional, Sequence, Tuple

from sympy.polys.polyerrors import ExactQuotientFailed
from sympy.polys.rings import PolyElement, PolyRing

from .errors import ContractViolation, PreconditionError, SingularMatrixError
from .exactla import (
    DenseMatrix,
    inverse,
    max_nonsingular_submatrix,
    nullspace,
    rank,
    rref,
)
from .macaulay import (
    Bounds,
    degree_bounds,
    echelon_rows,
    macaulay_matrix,
    normal_form_matrix,
)
from .polycore import (
    Field,
    Monomial,
    PolySystem,
    coeff_vector,
    determinant,
    from_coeff_vector,
    jacobian_det,
    mono_basis,
    mono_index,
    mono_key,
    total_degree,
)

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class BezoutMatrixUni:
    """d x d grid with B(x, y) = sum c_ij x^i y^j"""

    d: int
    matrix: DenseMatrix

    @property
    def entries(self) -> Tuple[Tuple, ...]:
        return self.matrix.entries


@dataclass(frozen=True)
class HornerBasis:
    """polys[i] = H_i = a_{i+1} + a_{i+2} x + ... + a_d x^(d-i-1)"""

    f: PolyElement
    polys: Tuple[PolyElement, ...]

    @property
    def d(self) -> int:
        return len(self.polys)


@dataclass(frozen=True)
class BezoutianMulti:
    """Dixon Bezoutian of (f0, f_1..f_m) split into x- and y-exponents"""

    ring: PolyRing
    m: int
    coeffs: Dict[Tuple[Monomial, Monomial], object]
    E: Tuple[Monomial, ...]
    E_prime: Tuple[Monomial, ...]

    def transposed(self) -> "BezoutianMulti":
        """Roles of x and y swapped."""
        swapped = {(beta, alpha): c for (alpha, beta), c in self.coeffs.items()}
        return BezoutianMulti(self.ring, self.m, swapped, self.E_prime, self.E)

    def as_poly(self) -> PolyElement:
        return self.ring.from_dict(
            {alpha + beta: c for (alpha, beta), c in self.coeffs.items()}
        )


@dataclass
class ReductionState:
    """Working data of the reduction loop over V = Mon_<=(dV)"""

    V: Tuple[Monomial, ...]
    lambdas: Tuple[Monomial, ...]
    K: DenseMatrix
    K_I: DenseMatrix
    H: List[PolyElement] = dataclass_field(default_factory=list)
    iterations: int = 0
    standard: Tuple[Monomial, ...] = ()
    N_1: Optional[DenseMatrix] = None
    N_x: Tuple[DenseMatrix, ...] = ()
    basis: Tuple[PolyElement, ...] = ()
    mult_matrices: Tuple[DenseMatrix, ...] = ()
    connected_to_one: bool = False
    warnings: List[str] = dataclass_field(default_factory=list)

    def warn(self, message: str) -> None:
        logger.warning(message)
        self.warnings.append(message)

    def collect_h(self, polys: Sequence[PolyElement]) -> None:
        """Add y-side elements (renamed to x) not already collected."""
        for p in polys:
            if p and all(p != h for h in self.H):
                self.H.append(p)

    @cached_property
    def V_index(self) -> Dict[Monomial, int]:
        return mono_index(self.V)


def _univariate(f: PolyElement) -> int:
    if f.ring.ngens != 1:
        raise PreconditionError(f"expected a univariate polynomial, got {f.ring.ngens} variables")
    d = int(total_degree(f)) if f else -1
    if d < 1:
        raise PreconditionError(f"degree must be at least 1, got {d}")
    return d


def _field_of(ring: PolyRing) -> Field:
    return Field.rational() if ring.domain.is_QQ else Field.approx()


def _exact_quotient(numerator: PolyElement, denominator: PolyElement, field: Field) -> PolyElement:
    """numerator / denominator, failing loudly on a nonzero remainder."""
    if field.exact:
        try:
            return numerator.exquo(denominator)
        except ExactQuotientFailed:
            raise ContractViolation("difference quotient left a nonzero remainder")
    quotient, remainder = numerator.div(denominator)
    if field.chop(remainder):
        raise ContractViolation("difference quotient left a nonzero remainder")
    return quotient


def uni_bezout(f: PolyElement, g: PolyElement) -> BezoutMatrixUni:
    """
    Coefficient grid of (f(x)g(y) - f(y)g(x)) / (x - y).

    Args:
        f: univariate polynomial of degree d >= 1
        g: polynomial in the same ring with deg g <= d

    Returns:
        BezoutMatrixUni with c_ij the coefficient of x^i y^j
    """
    d = _univariate(f)
    if g and total_degree(g) > d:
        raise PreconditionError(f"deg g = {total_degree(g)} exceeds deg f = {d}")
    name = str(f.ring.symbols[0])
    field = _field_of(f.ring)
    ring2 = PolyRing((name, f"{name}__y"), f.ring.domain, f.ring.order)

    def lift(p: PolyElement, side: int) -> PolyElement:
        return ring2.from_dict(
            {((e[0], 0) if side == 0 else (0, e[0])): c for e, c in p.items()}
        )

    x, y = ring2.gens
    numerator = lift(f, 0) * lift(g, 1) - lift(f, 1) * lift(g, 0)
    quotient = _exact_quotient(numerator, x - y, field)

    grid = [[0] * d for _ in range(d)]
    for (i, j), c in quotient.items():
        grid[i][j] = c
    return BezoutMatrixUni(d, DenseMatrix.from_rows(grid, field, cols=d))


def horner_basis(f: PolyElement) -> HornerBasis:
    d = _univariate(f)
    ring = f.ring
    a = [f.get((i,), ring.domain.zero) for i in range(d + 1)]
    polys = []
    for i in range(d):
        terms = {(t,): a[i + 1 + t] for t in range(d - i)}
        polys.append(ring.from_dict(terms))
    return HornerBasis(f, tuple(polys))


def uni_trace_matrix(f: PolyElement) -> BezoutMatrixUni:
    """B_{f, f'}: the matrix [Tr(H_i H_j)] of traces in the Horner basis."""
    _univariate(f)
    return uni_bezout(f, f.diff(f.ring.gens[0]))


def uni_squarefree(f: PolyElement) -> PolyElement:
    """
    f / gcd(f, f') read off the kernel of the trace matrix, made monic.

    Kernel vectors are reduced with the Horner columns ordered from the highest
    degree (H_0) down, so the last echelon row is the minimal-degree element.
    """
    bezout = uni_trace_matrix(f)
    kernel = nullspace(bezout.matrix)
    if kernel.cols == 0:
        return f.monic()
    reduced, pivots, r = rref(kernel.transpose())
    coords = reduced.row(r - 1)
    horner = horner_basis(f)
    field = _field_of(f.ring)
    result = f.ring.zero
    for c, H in zip(coords, horner.polys):
        if not field.is_zero(c):
            result += H * field.convert(c)
    logger.debug(f"Square-free part has degree {total_degree(result)} of {bezout.d}")
    return field.chop(result).monic()


def _bezout_ring(ring: PolyRing) -> PolyRing:
    names = [str(s) for s in ring.symbols]
    return PolyRing(tuple(names) + tuple(f"{n}__y" for n in names), ring.domain, ring.order)


def _lift(p: PolyElement, ring2: PolyRing, j: int, m: int) -> PolyElement:
    """p(X_j) with X_j = [y_1..y_j, x_{j+1}..x_m]."""
    terms = {}
    for e, c in p.items():
        x_part = (0,) * j + tuple(e[j:])
        y_part = tuple(e[:j]) + (0,) * (m - j)
        terms[x_part + y_part] = c
    return ring2.from_dict(terms)


def bezoutian_multi(f0: PolyElement, system: PolySystem) -> BezoutianMulti:
    """
    Determinant of the (m+1) x (m+1) matrix of difference quotients.

    Row i holds f_i(X_0) followed by (f_i(X_{j-1}) - f_i(X_j)) / (x_j - y_j)
    for j = 1..m, with f_0 = f0.
    """
    if system.s != system.m:
        raise PreconditionError(
            f"the Bezoutian needs s = m, got s={system.s}, m={system.m}"
        )
    m = system.m
    ring2 = _bezout_ring(system.ring)
    gens = ring2.gens
    rows = []
    for f in (f0,) + tuple(system.polys):
        lifts = [_lift(f, ring2, j, m) for j in range(m + 1)]
        row = [lifts[0]]
        for j in range(1, m + 1):
            denominator = gens[j - 1] - gens[m + j - 1]
            row.append(_exact_quotient(lifts[j - 1] - lifts[j], denominator, system.field))
        rows.append(row)
    bz = system.field.chop(determinant(rows, ring2))

    coeffs = {(e[:m], e[m:]): c for e, c in bz.items()}
    E = tuple(sorted({alpha for alpha, _ in coeffs}, key=mono_key))
    E_prime = tuple(sorted({beta for _, beta in coeffs}, key=mono_key))
    logger.debug(f"Bezoutian has |E|={len(E)}, |E'|={len(E_prime)}")
    return BezoutianMulti(ring2, m, coeffs, E, E_prime)


def bezout_matrix(
    bz: BezoutianMulti,
    field: Field,
    rows: Optional[Sequence[Monomial]] = None,
    cols: Optional[Sequence[Monomial]] = None,
) -> DenseMatrix:
    """Entry (alpha, beta) is c_{alpha,beta}; rows and cols default to E and E'."""
    rows = bz.E if rows is None else rows
    cols = bz.E_prime if cols is None else cols
    row_index, col_index = mono_index(rows), mono_index(cols)
    grid = [[0] * len(cols) for _ in rows]
    for (alpha, beta), c in bz.coeffs.items():
        if alpha not in row_index or beta not in col_index:
            raise PreconditionError(f"Bezoutian term x^{alpha} y^{beta} is outside the layout")
        grid[row_index[alpha]][col_index[beta]] = c
    return DenseMatrix.from_rows(grid, field, cols=len(cols))


def _image(matrix: DenseMatrix, vectors: DenseMatrix) -> DenseMatrix:
    """Columns of matrix @ vectors, returned as rows."""
    return (matrix @ vectors).transpose()


def _union(*supports: Sequence[Monomial]) -> Tuple[Monomial, ...]:
    return tuple(sorted({mono for support in supports for mono in support}, key=mono_key))


def _to_polys(rows: DenseMatrix, basis: Sequence[Monomial], ring: PolyRing, field: Field):
    polys = []
    for r in range(rows.rows):
        p = field.chop(from_coeff_vector(rows.row(r), basis, ring))
        if p:
            polys.append(p)
    return polys


def radical_from_bezout(
    system: PolySystem,
    side: str = "x",
    restrict_to_orthogonal: bool = False,
) -> List[PolyElement]:
    """
    Generators of sqrt(I): B_1^x(ker B_J^x) together with f_1..f_m.

    Args:
        system: square system with finitely many affine roots
        side: "y" applies the same construction to the y-side maps and renames back
        restrict_to_orthogonal: take the kernel inside ker(B_1^x)^perp

    Returns:
        Generator list; kernel images first, then the input polynomials
    """
    if side not in ("x", "y"):
        raise PreconditionError(f"side must be 'x' or 'y', got {side!r}")
    field = system.field
    ring = system.ring
    bz_1 = bezoutian_multi(ring.one, system)
    bz_J = bezoutian_multi(jacobian_det(system), system)
    if side == "y":
        bz_1, bz_J = bz_1.transposed(), bz_J.transposed()

    rows = _union(bz_1.E, bz_J.E)
    cols = _union(bz_1.E_prime, bz_J.E_prime)
    C_1 = bezout_matrix(bz_1, field, rows, cols)
    C_J = bezout_matrix(bz_J, field, rows, cols)

    if restrict_to_orthogonal:
        mu = nullspace(C_J @ C_1.transpose())
        lambdas = C_1.transpose() @ mu
    else:
        lambdas = nullspace(C_J)
    generators = _to_polys(_image(C_1, lambdas), rows, ring, field)
    logger.info(f"Bezout kernel gives {len(generators)} radical generators")
    return generators + list(system.polys)


def _shift(p: PolyElement, k: int) -> PolyElement:
    return p.mul_monom(tuple(1 if i == k else 0 for i in range(p.ring.ngens)))


def _coords(vectors: DenseMatrix, reducer: DenseMatrix) -> DenseMatrix:
    """Standard-monomial coordinates of the columns of vectors."""
    return (vectors.transpose() @ reducer).transpose()


class _Reducer:
    """Linear algebra over V for a growing span K"""

    def __init__(self, state: ReductionState, field: Field):
        self.state = state
        self.field = field

    def rank(self) -> int:
        return rank(self.state.K)

    def add(self, rows: DenseMatrix) -> None:
        if rows.rows:
            self.state.K = self.state.K.vstack(rows)

    def add_polys(self, polys: Sequence[PolyElement]) -> None:
        vectors = [coeff_vector(p, self.state.V, self.state.V_index) for p in polys]
        if vectors:
            self.add(DenseMatrix.from_rows(vectors, self.field, cols=len(self.state.V)))

    def compact(self) -> None:
        rows, _ = echelon_rows(self.state.K)
        self.state.K = DenseMatrix.from_rows(rows, self.field, cols=len(self.state.V))

    def reducer(self, span: DenseMatrix):
        return normal_form_matrix(span, self.state.V)


def _saturate(red: _Reducer, ring: PolyRing, top: int) -> None:
    """Close K under x_j within V: multiply every echelon row of degree < top."""
    state = red.state
    while True:
        before = red.rank()
        red.compact()
        products = []
        for r in range(state.K.rows):
            p = from_coeff_vector(state.K.row(r), state.V, ring)
            if p and total_degree(p) < top:
                products.extend(_shift(p, k) for k in range(ring.ngens))
        red.add_polys(products)
        if red.rank() == before:
            red.compact()
            return


def run_reduction(system: PolySystem) -> ReductionState:
    """
    Multiplication matrices of K[x]/sqrt(I) from Bezoutians.

    V holds every monomial up to the largest degree the Bezoutian maps reach.
    K starts from I intersected with V (a Macaulay truncation plus the
    coefficients of x_i B_1 - B_{x_i}) and the images B_1^x(ker B_J^x), then
    grows by saturation, column reduction, diagonalization and row reduction
    until its rank stops changing. Every step only adds elements of sqrt(I).
    """
    if system.s != system.m:
        raise PreconditionError(
            f"the reduction loop needs s = m, got s={system.s}, m={system.m}"
        )
    field = system.field
    ring = system.ring
    m = system.m
    bz_1 = bezoutian_multi(ring.one, system)
    bz_J = bezoutian_multi(jacobian_det(system), system)
    bz_x = [bezoutian_multi(x, system) for x in ring.gens]

    lambdas = _union(bz_1.E_prime, bz_J.E_prime, *(b.E_prime for b in bz_x))
    mus = _union(bz_1.E, bz_J.E, *(b.E for b in bz_x))
    bounds = degree_bounds(system.degrees, m, system.at_infinity)
    top = max(
        [sum(a) for a in mus]
        + [sum(b) for b in lambdas]
        + [sum(a) + 1 for a in bz_1.E]
        + [bounds.delta - 1, max(system.degrees)]
    )
    V = tuple(mono_basis(m, top))
    logger.info(f"Reduction space V has degree {top} and {len(V)} monomials")

    # x-side maps: columns indexed by lambdas, rows by V
    C_1 = bezout_matrix(bz_1, field, V, lambdas)
    C_J = bezout_matrix(bz_J, field, V, lambdas)
    C_x = [bezout_matrix(b, field, V, lambdas) for b in bz_x]
    # y-side maps: columns indexed by mus, rows by V after renaming y to x
    D_1 = bezout_matrix(bz_1.transposed(), field, V, mus)
    D_J = bezout_matrix(bz_J.transposed(), field, V, mus)

    mac = macaulay_matrix(system, Bounds(bounds.k, bounds.delta, top)).mac
    state = ReductionState(V=V, lambdas=lambdas, K=mac, K_I=mac)
    red = _Reducer(state, field)

    unit_rows = []
    for i in range(m):
        for b in range(len(lambdas)):
            p = _shift(from_coeff_vector(C_1.column(b), V, ring), i) - from_coeff_vector(
                C_x[i].column(b), V, ring
            )
            unit_rows.append(coeff_vector(p, V, state.V_index))
    if unit_rows:
        red.add(DenseMatrix.from_rows(unit_rows, field, cols=len(V)))
    red.compact()
    state.K_I = state.K
    _, ideal_reducer = red.reducer(state.K_I)

    red.add(_image(C_1, nullspace(C_J)))
    cap = len(bz_1.E) + len(bz_1.E_prime)
    for iteration in range(1, cap + 1):
        state.iterations = iteration
        before = red.rank()

        _saturate(red, ring, top)

        # column reduction: [u_lambda] = 0 mod K gives B_{x_i}^x(lambda) in sqrt(I)
        _, reducer = red.reducer(state.K)
        dead = nullspace(_coords(C_1, reducer))
        for C in C_x:
            red.add(_image(C, dead))

        # diagonalization: B_J^x(lambda) in I gives u_lambda in sqrt(I)
        red.add(_image(C_1, nullspace(_coords(C_J, ideal_reducer))))

        # row reduction: the same on the y side, renamed to x
        mirrored = _image(D_1, nullspace(_coords(D_J, ideal_reducer)))
        state.collect_h(_to_polys(mirrored, V, ring, field))
        red.add(mirrored)

        after = red.rank()
        logger.debug(f"Reduction iteration {iteration}: rank of K {before} -> {after}")
        if after == before:
            break
    else:
        state.warn(f"Reduction loop hit the iteration cap {cap}")

    _saturate(red, ring, top)
    return _finish(state, C_1, C_x, ring, field)


def _connected_to_one(standard: Sequence[Monomial], m: int) -> bool:
    present = set(standard)
    if (0,) * m not in present:
        return False
    for mono in standard:
        for k, e in enumerate(mono):
            if e and tuple(v - 1 if i == k else v for i, v in enumerate(mono)) not in present:
                return False
    return True


def _finish(state, C_1, C_x, ring, field) -> ReductionState:
    standard, reducer = normal_form_matrix(state.K, state.V)
    state.standard = standard
    state.connected_to_one = _connected_to_one(standard, ring.ngens)
    if not state.connected_to_one:
        state.warn("Standard monomials of V/K are not connected to 1")

    N_1 = _coords(C_1, reducer)
    N_x = tuple(_coords(C, reducer) for C in C_x)
    state.N_1, state.N_x = N_1, N_x
    if not standard:
        logger.info("V/K is zero: the radical is the unit ideal")
        return state

    rows, cols = max_nonsingular_submatrix(N_1)
    if len(cols) != len(standard):
        state.warn(
            f"B_1 images span {len(cols)} of {len(standard)} dimensions of V/K"
        )
    if not cols:
        raise ContractViolation("N_1 vanishes on a nonzero quotient")
    try:
        pivot = inverse(N_1.submatrix(rows, cols))
    except SingularMatrixError:
        raise ContractViolation("N_1 block is singular at termination")
    mult = tuple(pivot @ N.submatrix(rows, cols) for N in N_x)

    for i in range(len(mult)):
        for j in range(i + 1, len(mult)):
            if not (mult[i] @ mult[j]).equals(mult[j] @ mult[i]):
                raise ContractViolation(
                    f"multiplication matrices of x{i + 1} and x{j + 1} do not commute"
                )

    state.basis = tuple(
        field.chop(from_coeff_vector(C_1.column(b), state.V, ring)) for b in cols
    )
    state.mult_matrices = mult
    logger.info(f"Reduction loop found a radical quotient of dimension {len(cols)}")
    return state


def reduction_loop(system: PolySystem) -> Tuple[Tuple[PolyElement, ...], Tuple[DenseMatrix, ...]]:
    """(basis A of K[x]/sqrt(I), multiplication matrices M_{x_i} on A)"""
    state = run_reduction(system)
    return state.basis, state.mult_matrices
