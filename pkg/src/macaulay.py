"""
Degree bounds, Sylvester/Macaulay matrices and quotient-basis extraction
"""

import logging
from dataclasses import dataclass, replace
from functools import cached_property
from typing import Dict, List, NamedTuple, Optional, Sequence, Tuple

from .errors import BoundsError, PreconditionError
from .exactla import DenseMatrix, rref
from .polycore import (
    Monomial,
    PolySystem,
    coeff_vector,
    mono_basis,
    mono_index,
)

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Bounds:
    """k, delta, the working Delta and (after basis extraction) D"""

    k: int
    delta: int
    big_delta: int
    D: Optional[int] = None
    big_delta_fixed: bool = False

    def final_delta(self) -> int:
        """max(delta-1, 2D+1): leaves room for the x_k*J rows of the shifted traces"""
        if self.D is None:
            return self.big_delta
        return max(self.delta - 1, 2 * self.D + 1)

    def as_dict(self) -> Dict[str, Optional[int]]:
        return {"k": self.k, "delta": self.delta, "bigDelta": self.big_delta, "D": self.D}


def _provisional_delta(k: int, delta: int) -> int:
    # D <= k, so this is never below the final value
    return max(delta - 1, 2 * k + 1)


def degree_bounds(degrees: Sequence[int], m: int, at_infinity: bool = True) -> Bounds:
    """
    Basis-degree bound k and regularity bound delta.

    Args:
        degrees: d_1 >= ... >= d_s
        m: number of variables
        at_infinity: whether roots at infinity may exist (adds one to delta)

    Returns:
        Bounds with a provisional Delta
    """
    s = len(degrees)
    if s < m:
        raise PreconditionError(
            f"{s} polynomials in {m} variables cannot define a zero-dimensional ideal"
        )
    if list(degrees) != sorted(degrees, reverse=True):
        raise PreconditionError(f"degrees must be non-increasing, got {list(degrees)}")
    if s == m:
        k = sum(d - 1 for d in degrees)
    else:
        k = sum(degrees[: m + 1]) - m
    delta = k + 1 if at_infinity else k
    return Bounds(k=k, delta=delta, big_delta=_provisional_delta(k, delta))


def override_bounds(
    bounds: Bounds,
    k: Optional[int] = None,
    delta: Optional[int] = None,
    big_delta: Optional[int] = None,
) -> Bounds:
    """Apply user overrides; k and delta are independent of each other."""
    new_k = bounds.k if k is None else k
    new_delta = bounds.delta if delta is None else delta
    if new_k < 0 or new_delta < 0 or new_k > new_delta:
        raise PreconditionError(f"bounds need 0 <= k <= delta, got k={new_k}, delta={new_delta}")
    if big_delta is not None:
        if big_delta < 0:
            raise PreconditionError(f"Delta must be non-negative, got {big_delta}")
        return Bounds(new_k, new_delta, big_delta, big_delta_fixed=True)
    return Bounds(new_k, new_delta, _provisional_delta(new_k, new_delta))


class SylvesterMatrix(NamedTuple):
    matrix: DenseMatrix
    labels: List[Tuple[int, Monomial]]
    columns: List[Monomial]


@dataclass(frozen=True)
class QuotientData:
    """Mac_Delta with its column layout and, once extracted, the basis B"""

    system: PolySystem
    mac: DenseMatrix
    columns: Tuple[Monomial, ...]
    bounds: Bounds
    basis: Tuple[Monomial, ...] = ()
    reducer: Optional[DenseMatrix] = None

    @property
    def N(self) -> int:
        return len(self.basis)

    @cached_property
    def column_index(self) -> Dict[Monomial, int]:
        return mono_index(self.columns)

    @cached_property
    def basis_index(self) -> Dict[Monomial, int]:
        return mono_index(self.basis)


def sylvester_matrix(system: PolySystem, t: int) -> SylvesterMatrix:
    """Rows f_i * x^alpha of degree <= t over Mon_<=(t)."""
    if t < max(system.degrees):
        raise PreconditionError(f"Sylvester degree {t} is below the largest degree")
    columns = mono_basis(system.m, t)
    index = mono_index(columns)
    rows, labels = [], []
    for i, (f, d) in enumerate(zip(system.polys, system.degrees)):
        for alpha in mono_basis(system.m, t - d):
            rows.append(coeff_vector(f.mul_monom(alpha), columns, index))
            labels.append((i, alpha))
    matrix = DenseMatrix.from_rows(rows, system.field, cols=len(columns))
    return SylvesterMatrix(matrix, labels, columns)


def _reversed(matrix: DenseMatrix) -> DenseMatrix:
    """Column order flipped so elimination prefers high-degree pivots."""
    return matrix.submatrix(range(matrix.rows), range(matrix.cols - 1, -1, -1))


def macaulay_matrix(system: PolySystem, bounds: Bounds) -> QuotientData:
    """
    Mac_Delta: rows spanning <f>_{Delta+1} intersected with K[x]_Delta.

    Degree Delta+1 columns are eliminated from Syl_{Delta+1}; the rows left
    without such terms are linearly independent by construction.
    """
    big_delta = bounds.big_delta
    syl = sylvester_matrix(system, max(big_delta + 1, max(system.degrees)))
    columns = mono_basis(system.m, big_delta)
    top = len(syl.columns) - len(columns)

    reduced, pivots, rank = rref(_reversed(syl.matrix))
    mac_rows = []
    for r, p in enumerate(pivots):
        if p >= top:
            mac_rows.append(list(reversed(reduced.row(r)[top:])))
    mac = DenseMatrix.from_rows(mac_rows, system.field, cols=len(columns))
    logger.debug(
        f"Syl_{big_delta + 1} is {syl.matrix.rows}x{syl.matrix.cols} of rank {rank}; "
        f"Mac_{big_delta} keeps {mac.rows} rows over {len(columns)} columns"
    )
    return QuotientData(system, mac, tuple(columns), bounds)


def echelon_rows(matrix: DenseMatrix) -> Tuple[List[Tuple], List[int]]:
    """
    Reduced echelon rows with pivots taken from the high-degree end.

    Returns:
        (nonzero reduced rows in the original column layout, their pivot columns)
    """
    ncols = matrix.cols
    reduced, pivots, _ = rref(_reversed(matrix))
    rows = [tuple(reversed(reduced.row(r))) for r in range(len(pivots))]
    # pivot positions refer to the flipped layout
    return rows, [ncols - 1 - p for p in pivots]


def normal_form_matrix(
    matrix: DenseMatrix, columns: Sequence[Monomial]
) -> Tuple[Tuple[Monomial, ...], DenseMatrix]:
    """
    Standard monomials modulo the row space and the matrix reducing onto them.

    Row j of the reducer holds the coordinates of the j-th column monomial on
    the standard monomials; its columns span the right kernel of ``matrix``.
    """
    ncols = len(columns)
    field = matrix.field
    rows, pivots = echelon_rows(matrix)
    pivot_of = {p: r for r, p in enumerate(pivots)}
    basis_positions = [j for j in range(ncols) if j not in pivot_of]
    basis = tuple(columns[j] for j in basis_positions)

    zero, one = field.entry(0), field.entry(1)
    reducer_rows = []
    for j in range(ncols):
        if j in pivot_of:
            row = rows[pivot_of[j]]
            reducer_rows.append([-row[b] for b in basis_positions])
        else:
            reducer_rows.append([one if b == j else zero for b in basis_positions])
    return basis, DenseMatrix.from_rows(reducer_rows, field, cols=len(basis))


def quotient_basis(qd: QuotientData, k: Optional[int] = None) -> QuotientData:
    """
    Standard monomials of Mac_Delta and the matrix reducing every column onto them.

    Pivots are taken from the high-degree end, so B collects the lowest-degree
    monomials that stay independent modulo the ideal.
    """
    k = qd.bounds.k if k is None else k
    basis, reducer = normal_form_matrix(qd.mac, qd.columns)

    too_high = [b for b in basis if sum(b) > k]
    if too_high:
        raise BoundsError(
            f"standard monomial {too_high[0]} exceeds the basis degree bound k={k}; raise delta"
        )

    D = max((sum(b) for b in basis), default=None)
    bounds = replace(qd.bounds, D=D)
    logger.info(f"Quotient basis has N={len(basis)} monomials, D={D}")
    return replace(qd, basis=basis, reducer=reducer, bounds=bounds)


def build_quotient(
    system: PolySystem,
    k: Optional[int] = None,
    delta: Optional[int] = None,
    big_delta: Optional[int] = None,
) -> QuotientData:
    """Bounds, Mac_Delta and B in one go, settling Delta once D is known."""
    bounds = degree_bounds(system.degrees, system.m, system.at_infinity)
    bounds = override_bounds(bounds, k, delta, big_delta)
    logger.info(
        f"Degree bounds k={bounds.k}, delta={bounds.delta}, working Delta={bounds.big_delta}"
    )
    qd = quotient_basis(macaulay_matrix(system, bounds))
    if qd.N == 0 or bounds.big_delta_fixed:
        if qd.N and qd.bounds.big_delta < 2 * qd.bounds.D + 1:
            logger.warning(
                f"Delta={qd.bounds.big_delta} is below 2D+1={2 * qd.bounds.D + 1}; "
                "shifted trace rows may not fit"
            )
        return qd

    target = qd.bounds.final_delta()
    if target == qd.bounds.big_delta:
        return qd
    rebuilt = quotient_basis(
        macaulay_matrix(system, replace(qd.bounds, big_delta=target, D=None))
    )
    if rebuilt.N != qd.N:
        raise BoundsError(
            f"quotient dimension moved from {qd.N} at Delta={qd.bounds.big_delta} "
            f"to {rebuilt.N} at Delta={target}; raise delta"
        )
    return rebuilt
