"""
Moment matrices, matrices of traces and the radical they cut out

The pipeline draws a random functional y from the kernel of Mac_Delta,
builds the moment matrix on B, derives the generalized Jacobian J from its
inverse and assembles T = Syl_B(J) X. The kernel of T is the radical; a
maximal nonsingular block of T gives its multiplication matrices.
"""

import logging
from dataclasses import dataclass, replace
from typing import List, Optional, Sequence, Tuple

import numpy as np
from sympy.polys.rings import PolyElement

from .config import DEFAULT_RETRIES
from .errors import (
    ContractViolation,
    DegreeOverflowError,
    PreconditionError,
    SingularMatrixError,
)
from .exactla import (
    DenseMatrix,
    eig_generalized,
    inverse,
    max_nonsingular_submatrix,
    nullspace,
    random_coefficients,
    random_combination,
    rank,
    solve_right,
)
from .macaulay import QuotientData
from .polycore import Monomial, coeff_vector, from_coeff_vector, jacobian_det

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class MomentData:
    """Random functional y on Mon_<=(Delta) and the moment matrix it induces on B"""

    y: Tuple
    M: DenseMatrix
    rank: int
    alpha_idx: Tuple[int, ...]
    X: DenseMatrix
    seed: int
    draws: int


@dataclass(frozen=True)
class TraceData:
    J: PolyElement
    basis: Tuple[Monomial, ...]
    X: DenseMatrix
    T: Optional[DenseMatrix] = None
    T_shift: Tuple[DenseMatrix, ...] = ()
    tilde_rows: Tuple[int, ...] = ()
    tilde_cols: Tuple[int, ...] = ()
    rank: Optional[int] = None


@dataclass(frozen=True)
class RadicalResult:
    """Basis of K[x]/sqrt(I), multiplication matrices on it and radical generators"""

    basis: Tuple[Monomial, ...]
    mult_matrices: Tuple[DenseMatrix, ...]
    generators: Tuple[PolyElement, ...]
    row_basis: Tuple[Monomial, ...] = ()
    roots: Optional[Tuple[Tuple, ...]] = None
    pipeline: str = "macaulay"


@dataclass(frozen=True)
class RadicalRun:
    """Everything one run of the moment/trace pipeline produced"""

    quotient: QuotientData
    moment: Optional[MomentData]
    traces: Optional[TraceData]
    result: RadicalResult
    gorenstein: bool


def normal_form_coords(p: PolyElement, qd: QuotientData) -> Tuple:
    """Coordinates on B of p reduced modulo the row space of Mac_Delta."""
    try:
        vector = coeff_vector(p, qd.columns, qd.column_index)
    except DegreeOverflowError:
        raise DegreeOverflowError(
            f"cannot reduce a polynomial of degree above Delta={qd.bounds.big_delta}"
        )
    row = DenseMatrix.from_rows([vector], qd.system.field, cols=len(qd.columns))
    return (row @ qd.reducer).row(0)


def normal_form(p: PolyElement, qd: QuotientData) -> PolyElement:
    """
    Reduce p into span(B).

    Args:
        p: polynomial of degree <= Delta
        qd: quotient data with B extracted

    Returns:
        The unique element of span(B) congruent to p modulo Mac_Delta
    """
    coords = normal_form_coords(p, qd)
    return qd.system.field.chop(from_coeff_vector(coords, qd.basis, qd.system.ring))


def multiplication_matrix(p: PolyElement, qd: QuotientData) -> DenseMatrix:
    """Row i holds the B-coordinates of b_i * p."""
    rows = [normal_form_coords(p.mul_monom(b), qd) for b in qd.basis]
    return DenseMatrix.from_rows(rows, qd.system.field, cols=qd.N)


def moment_matrix(y: Sequence, qd: QuotientData) -> DenseMatrix:
    """M[i][j] = y at the monomial b_i * b_j."""
    rows = []
    for bi in qd.basis:
        row = []
        for bj in qd.basis:
            product = tuple(a + b for a, b in zip(bi, bj))
            position = qd.column_index.get(product)
            if position is None:
                raise DegreeOverflowError(
                    f"b_i*b_j of degree {sum(product)} exceeds Delta={qd.bounds.big_delta}"
                )
            row.append(y[position])
        rows.append(row)
    return DenseMatrix.from_rows(rows, qd.system.field, cols=qd.N)


def sample_moment(
    qd: QuotientData, seed: int, max_retries: int = DEFAULT_RETRIES
) -> MomentData:
    """
    Draw y from ker(Mac_Delta), keeping the draw whose moment matrix has the largest rank.

    Retry seeds are seed+1, seed+2, ...; the first draw reaching the best rank wins.
    """
    if qd.N == 0:
        raise PreconditionError("N = 0: the ideal is the whole ring")
    kernel = nullspace(qd.mac)
    best = None
    draws = 0
    for attempt in range(max_retries + 1):
        draw_seed = seed + attempt
        draws += 1
        y = random_combination(kernel, draw_seed)
        M = moment_matrix(y, qd)
        r = rank(M)
        logger.debug(f"Moment draw seed={draw_seed} has rank {r}/{qd.N}")
        if best is None or r > best[3]:
            best = (draw_seed, y, M, r)
        if r == qd.N:
            break

    draw_seed, y, M, r = best
    _, alpha = max_nonsingular_submatrix(M)
    X = qd.reducer @ M
    if r < qd.N:
        logger.warning(
            f"Moment matrix rank {r} < N={qd.N} after {draws} draws: "
            "the quotient algebra is not Gorenstein"
        )
    return MomentData(tuple(y), M, r, tuple(alpha), X, draw_seed, draws)


def gorenstein_test(md: MomentData, N: int) -> bool:
    return md.rank == N


def _jacobian_from_duals(
    basis: Sequence[Monomial], duals: DenseMatrix, qd: QuotientData
) -> PolyElement:
    ring = qd.system.ring
    field = qd.system.field
    J = ring.zero
    for i, bi in enumerate(basis):
        dual = ring.zero
        for j, bj in enumerate(basis):
            c = duals[j, i]
            if not field.is_zero(c):
                dual += ring.from_dict({bj: field.convert(c)})
        J += dual.mul_monom(bi)
    return normal_form(J, qd)


def dual_basis_and_jacobian(
    md: MomentData, qd: QuotientData, force_non_gorenstein: bool = False
) -> TraceData:
    """
    Generalized Jacobian from the inverse of the moment matrix.

    On the non-Gorenstein path (rank r < N, or forced) the duals come from the
    r x r minor indexed by alpha_idx, and everything downstream lives on B_alpha.
    """
    if md.rank == qd.N and not force_non_gorenstein:
        try:
            duals = inverse(md.M)
        except SingularMatrixError:
            raise SingularMatrixError("moment matrix is singular; resample y")
        return TraceData(J=_jacobian_from_duals(qd.basis, duals, qd), basis=qd.basis, X=md.X)

    alpha = list(md.alpha_idx)
    if not alpha:
        raise SingularMatrixError("moment matrix vanishes for every draw")
    try:
        duals = inverse(md.M.submatrix(alpha, alpha))
    except SingularMatrixError:
        raise SingularMatrixError("moment minor on B_alpha is singular; resample y")
    basis_alpha = tuple(qd.basis[i] for i in alpha)
    logger.info(f"Working on B_alpha with {len(basis_alpha)} of {qd.N} monomials")
    return TraceData(
        J=_jacobian_from_duals(basis_alpha, duals, qd),
        basis=basis_alpha,
        X=md.X.submatrix(range(md.X.rows), alpha),
    )


def syl_B(
    P: PolyElement, qd: QuotientData, basis: Optional[Sequence[Monomial]] = None
) -> DenseMatrix:
    """Rows are the coefficient vectors of b * P over Mon_<=(Delta)."""
    basis = qd.basis if basis is None else basis
    rows = [coeff_vector(P.mul_monom(b), qd.columns, qd.column_index) for b in basis]
    return DenseMatrix.from_rows(rows, qd.system.field, cols=len(qd.columns))


def _shift(J: PolyElement, k: int) -> PolyElement:
    exps = [0] * J.ring.ngens
    exps[k] = 1
    return J.mul_monom(tuple(exps))


def trace_matrices(td: TraceData, qd: QuotientData) -> TraceData:
    """T = Syl_B(J) X and T_xk = Syl_B(x_k J) X."""
    T = syl_B(td.J, qd, td.basis) @ td.X
    shifted = tuple(
        syl_B(_shift(td.J, k), qd, td.basis) @ td.X for k in range(qd.system.m)
    )
    logger.info(f"Trace matrix is {T.rows}x{T.cols}")
    return replace(td, T=T, T_shift=shifted)


def shifted_trace_via_normal_form(td: TraceData, qd: QuotientData, k: int) -> DenseMatrix:
    """T_xk computed after reducing x_k J into span(B) first."""
    reduced = normal_form(_shift(td.J, k), qd)
    return syl_B(reduced, qd, td.basis) @ td.X


def _radical_generators(
    td: TraceData, cols: Sequence[int], mult: Sequence[DenseMatrix], qd: QuotientData
) -> Tuple[PolyElement, ...]:
    ring = qd.system.ring
    field = qd.system.field
    tilde = [td.basis[j] for j in cols]
    candidates: List[PolyElement] = []

    for k, M_k in enumerate(mult):
        for jj, bj in enumerate(tilde):
            g = ring.from_dict({bj: 1}).mul_monom(_unit(k, ring.ngens))
            for ll, bl in enumerate(tilde):
                c = M_k[ll, jj]
                if not field.is_zero(c):
                    g -= ring.from_dict({bl: field.convert(c)})
            candidates.append(field.chop(g))

    kernel = nullspace(td.T)
    for j in range(kernel.cols):
        candidates.append(
            field.chop(from_coeff_vector(kernel.column(j), td.basis, ring))
        )

    generators: List[PolyElement] = []
    for g in candidates:
        if not g:
            continue
        g = g.monic()
        if not any(_same(g, h, field) for h in generators):
            generators.append(g)
    return tuple(generators)


def _unit(k: int, m: int) -> Monomial:
    return tuple(1 if i == k else 0 for i in range(m))


def _same(p: PolyElement, q: PolyElement, field) -> bool:
    if set(p.keys()) != set(q.keys()):
        return False
    return all(
        field.approx_equal(field.entry(p[mono]), field.entry(q[mono])) for mono in p.keys()
    )


def radical_mult_matrices(td: TraceData, qd: QuotientData) -> Tuple[RadicalResult, TraceData]:
    """
    Multiplication matrices of sqrt(I) on the columns of a maximal nonsingular block of T.

    Returns:
        (radical result, trace data with the block indices and rank filled in)
    """
    if td.T is None:
        raise PreconditionError("trace matrices have not been computed")
    rows, cols = max_nonsingular_submatrix(td.T)
    if not cols:
        raise ContractViolation("matrix of traces vanishes although N > 0")
    T_tilde = td.T.submatrix(rows, cols)
    mult = tuple(solve_right(T_tilde, T_k.submatrix(rows, cols)) for T_k in td.T_shift)
    td = replace(td, tilde_rows=tuple(rows), tilde_cols=tuple(cols), rank=len(cols))
    logger.info(f"Radical quotient has dimension {len(cols)}")

    result = RadicalResult(
        basis=tuple(td.basis[j] for j in cols),
        mult_matrices=mult,
        generators=_radical_generators(td, cols, mult, qd),
        row_basis=tuple(td.basis[i] for i in rows),
    )
    return result, td


def roots(rr: RadicalResult, td: TraceData, seed: int = 0, tolerance: float = None):
    """
    Common roots from the generalized eigenproblem (T~_c - z T~) w = 0.

    T~_c is a seeded random combination of the shifted blocks, so its
    eigenvalues separate the roots. v = T~ w holds b(zeta) for the row
    monomials; coordinates missing from them come from Rayleigh quotients.
    """
    if td.T is None or not td.tilde_cols:
        raise PreconditionError("radical multiplication matrices are required")
    field = td.T.field
    tol = tolerance if tolerance is not None else field.tolerance
    m = len(td.T_shift)
    rows, cols = list(td.tilde_rows), list(td.tilde_cols)
    T_tilde = td.T.submatrix(rows, cols).to_array()
    shifted = [T_k.submatrix(rows, cols).to_array() for T_k in td.T_shift]
    mult = [M.to_array() for M in rr.mult_matrices]

    weights = [c / 2**16 for c in random_coefficients(m, seed)]
    combined = sum(w * S for w, S in zip(weights, shifted))
    approx = type(field).approx(tol)
    pairs = eig_generalized(
        DenseMatrix.from_array(combined, approx),
        DenseMatrix.from_array(T_tilde, approx),
        tol,
    )

    zero = tuple([0] * m)
    if zero not in rr.row_basis:
        raise ContractViolation("the monomial 1 is missing from the trace block rows")
    one_pos = rr.row_basis.index(zero)
    found = []
    for _, w in pairs:
        v = T_tilde @ w
        if abs(v[one_pos]) <= tol:
            raise ContractViolation("eigenvector has no component on the monomial 1")
        v = v / v[one_pos]
        point = []
        for k in range(m):
            unit = _unit(k, m)
            if unit in rr.row_basis:
                value = v[rr.row_basis.index(unit)]
            else:
                value = np.vdot(w, mult[k] @ w) / np.vdot(w, w)
            point.append(_clean(complex(value), tol))
        found.append(tuple(point))
    return tuple(found)


def _clean(value: complex, tol: float):
    if abs(value.imag) <= tol * max(1.0, abs(value)):
        return float(value.real)
    return value


def _empty_result(qd: QuotientData, pipeline: str) -> RadicalResult:
    logger.info("N = 0: the radical is the unit ideal")
    return RadicalResult(
        basis=(),
        mult_matrices=(),
        generators=(qd.system.ring.one,),
        roots=(),
        pipeline=pipeline,
    )


def run_radical(
    qd: QuotientData,
    seed: int,
    retries: int = DEFAULT_RETRIES,
    force_non_gorenstein: bool = False,
    with_roots: bool = False,
) -> RadicalRun:
    """Moment draw, Jacobian, traces and radical for one quotient."""
    if qd.N == 0:
        return RadicalRun(qd, None, None, _empty_result(qd, "macaulay"), True)
    md = sample_moment(qd, seed, retries)
    td = trace_matrices(dual_basis_and_jacobian(md, qd, force_non_gorenstein), qd)
    result, td = radical_mult_matrices(td, qd)
    if with_roots:
        result = replace(result, roots=roots(result, td, seed))
    return RadicalRun(qd, md, td, result, gorenstein_test(md, qd.N))


def jacobian_shortcut(
    qd: QuotientData,
    seed: int = 0,
    retries: int = DEFAULT_RETRIES,
    moment: Optional[MomentData] = None,
) -> RadicalResult:
    """
    Square-system variant: classical Jacobian in place of J, X from a moment draw.

    X = reducer * M, not the bare reducer: with X = reducer, Q is the
    multiplication matrix of J and the solved blocks act on the dual instead
    of on B~. Q = Syl_B(J) X is not a trace matrix, but it kills the same
    radical and yields the same multiplication matrices on the same columns.
    """
    system = qd.system
    if system.s != system.m:
        raise PreconditionError(
            f"the Jacobian shortcut needs s = m, got s={system.s}, m={system.m}"
        )
    if qd.N == 0:
        return _empty_result(qd, "shortcut")
    md = moment if moment is not None else sample_moment(qd, seed, retries)
    if md.rank < qd.N:
        logger.warning("Shortcut X is rank deficient; results may lose roots")
    J = normal_form(jacobian_det(system), qd)
    td = trace_matrices(TraceData(J=J, basis=qd.basis, X=md.X), qd)
    result, _ = radical_mult_matrices(td, qd)
    return replace(result, pipeline="shortcut")
