"""
Dense linear algebra over the scalar field

Exact matrices are reduced with sympy's DomainMatrix over QQ; approximate ones
with numpy using largest-pivot elimination and a relative zero threshold.
Generalized eigenproblems go through scipy.linalg.eig.
"""

import logging
from dataclasses import dataclass
from typing import List, Sequence, Tuple

import numpy as np
from scipy import linalg
from sympy import QQ
from sympy.polys.matrices import DomainMatrix
from sympy.polys.matrices.exceptions import DMNonInvertibleMatrixError

from .config import RANDOM_BOUND
from .errors import PreconditionError, SingularMatrixError
from .polycore import Field

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class DenseMatrix:
    """Immutable rows x cols grid of field entries"""

    field: Field
    shape: Tuple[int, int]
    entries: Tuple[Tuple, ...]

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence], field: Field, cols: int = None):
        converted = tuple(tuple(field.entry(v) for v in row) for row in rows)
        width = len(converted[0]) if converted else (cols or 0)
        if cols is not None and converted and width != cols:
            raise PreconditionError(f"expected {cols} columns, got {width}")
        if any(len(row) != width for row in converted):
            raise PreconditionError("matrix rows have different lengths")
        return cls(field, (len(converted), width), converted)

    @classmethod
    def zeros(cls, rows: int, cols: int, field: Field):
        zero = field.entry(0)
        return cls(field, (rows, cols), tuple((zero,) * cols for _ in range(rows)))

    @classmethod
    def identity(cls, n: int, field: Field):
        return cls.from_rows(
            [[1 if i == j else 0 for j in range(n)] for i in range(n)], field, cols=n
        )

    @classmethod
    def from_domain(cls, dm: DomainMatrix, field: Field):
        return cls.from_rows(dm.to_list(), field, cols=dm.shape[1])

    @classmethod
    def from_array(cls, array, field: Field):
        array = np.asarray(array, dtype=float)
        return cls.from_rows(array.tolist(), field, cols=array.shape[1])

    @property
    def rows(self) -> int:
        return self.shape[0]

    @property
    def cols(self) -> int:
        return self.shape[1]

    def __getitem__(self, key):
        i, j = key
        return self.entries[i][j]

    def row(self, i: int) -> Tuple:
        return self.entries[i]

    def column(self, j: int) -> Tuple:
        return tuple(row[j] for row in self.entries)

    def to_domain(self) -> DomainMatrix:
        return DomainMatrix([list(row) for row in self.entries], self.shape, QQ)

    def to_array(self) -> np.ndarray:
        return np.array(
            [[float(v) for v in row] for row in self.entries], dtype=float
        ).reshape(self.shape)

    def _like(self, other: "DenseMatrix") -> None:
        if self.field != other.field:
            raise PreconditionError("matrices come from different fields")

    def matmul(self, other: "DenseMatrix") -> "DenseMatrix":
        self._like(other)
        if self.cols != other.rows:
            raise PreconditionError(
                f"cannot multiply {self.rows}x{self.cols} by {other.rows}x{other.cols}"
            )
        if 0 in (self.rows, self.cols, other.cols):
            return DenseMatrix.zeros(self.rows, other.cols, self.field)
        if self.field.exact:
            return DenseMatrix.from_domain(
                self.to_domain().matmul(other.to_domain()), self.field
            )
        return DenseMatrix.from_array(self.to_array() @ other.to_array(), self.field)

    __matmul__ = matmul

    def transpose(self) -> "DenseMatrix":
        columns = [self.column(j) for j in range(self.cols)]
        return DenseMatrix(self.field, (self.cols, self.rows), tuple(columns))

    def submatrix(self, rows: Sequence[int], cols: Sequence[int]) -> "DenseMatrix":
        picked = tuple(tuple(self.entries[i][j] for j in cols) for i in rows)
        return DenseMatrix(self.field, (len(rows), len(cols)), picked)

    def vstack(self, other: "DenseMatrix") -> "DenseMatrix":
        self._like(other)
        if self.cols != other.cols:
            raise PreconditionError("vstack needs equal column counts")
        return DenseMatrix(
            self.field, (self.rows + other.rows, self.cols), self.entries + other.entries
        )

    def equals(self, other: "DenseMatrix") -> bool:
        """Entrywise equality (within tolerance in approx mode)"""
        if self.shape != other.shape:
            return False
        return all(
            self.field.approx_equal(a, b)
            for row_a, row_b in zip(self.entries, other.entries)
            for a, b in zip(row_a, row_b)
        )

    def is_symmetric(self) -> bool:
        return self.rows == self.cols and self.equals(self.transpose())

    def is_zero(self) -> bool:
        return all(self.field.is_zero(v) for row in self.entries for v in row)


def _tolerant_rref(array: np.ndarray, tol: float):
    reduced = np.array(array, dtype=float)
    nrows, ncols = reduced.shape
    if nrows == 0 or ncols == 0:
        return reduced, []
    scale = np.maximum(np.abs(reduced).max(axis=1), 1.0)
    pivots: List[int] = []
    row = 0
    for col in range(ncols):
        if row == nrows:
            break
        best = row + int(np.argmax(np.abs(reduced[row:, col])))
        if abs(reduced[best, col]) <= tol * scale[best]:
            reduced[row:, col] = 0.0
            continue
        if best != row:
            reduced[[row, best]] = reduced[[best, row]]
            scale[[row, best]] = scale[[best, row]]
        reduced[row] = reduced[row] / reduced[row, col]
        for i in range(nrows):
            if i != row and reduced[i, col] != 0.0:
                reduced[i] = reduced[i] - reduced[i, col] * reduced[row]
        reduced[np.abs(reduced) <= tol * scale[:, None]] = 0.0
        pivots.append(col)
        row += 1
    return reduced, pivots


def rref(matrix: DenseMatrix) -> Tuple[DenseMatrix, List[int], int]:
    """
    Reduced row-echelon form.

    Returns:
        (reduced matrix, pivot columns, rank)
    """
    if matrix.rows == 0 or matrix.cols == 0:
        return matrix, [], 0
    if matrix.field.exact:
        reduced, pivots = matrix.to_domain().rref()
        return DenseMatrix.from_domain(reduced, matrix.field), list(pivots), len(pivots)
    reduced, pivots = _tolerant_rref(matrix.to_array(), matrix.field.tolerance)
    return DenseMatrix.from_array(reduced, matrix.field), pivots, len(pivots)


def rank(matrix: DenseMatrix) -> int:
    return rref(matrix)[2]


def nullspace(matrix: DenseMatrix) -> DenseMatrix:
    """Columns form a basis of the right kernel, one per free column."""
    reduced, pivots, _ = rref(matrix)
    field = matrix.field
    free = [j for j in range(matrix.cols) if j not in set(pivots)]
    basis = [[field.entry(0)] * len(free) for _ in range(matrix.cols)]
    for k, f in enumerate(free):
        basis[f][k] = field.entry(1)
        for r, p in enumerate(pivots):
            basis[p][k] = -reduced[r, f]
    return DenseMatrix.from_rows(basis, field, cols=len(free))


def max_nonsingular_submatrix(matrix: DenseMatrix) -> Tuple[List[int], List[int]]:
    """Leftmost independent columns, then topmost independent rows among them."""
    _, cols, r = rref(matrix)
    if r == 0:
        return [], []
    selected = matrix.submatrix(range(matrix.rows), cols)
    _, rows, _ = rref(selected.transpose())
    return rows, cols


def inverse(matrix: DenseMatrix) -> DenseMatrix:
    if matrix.rows != matrix.cols:
        raise PreconditionError(f"cannot invert a {matrix.rows}x{matrix.cols} matrix")
    if matrix.rows == 0:
        return matrix
    if matrix.field.exact:
        try:
            return DenseMatrix.from_domain(matrix.to_domain().inv(), matrix.field)
        except (DMNonInvertibleMatrixError, ZeroDivisionError):
            raise SingularMatrixError("matrix is singular")
    if rank(matrix) < matrix.rows:
        raise SingularMatrixError("matrix is singular within tolerance")
    return DenseMatrix.from_array(np.linalg.inv(matrix.to_array()), matrix.field)


def solve_right(a: DenseMatrix, b: DenseMatrix) -> DenseMatrix:
    """X with A X = B for square invertible A."""
    if a.rows != a.cols or a.rows != b.rows:
        raise PreconditionError(
            f"solve_right needs square A matching B, got {a.shape} and {b.shape}"
        )
    if a.field.exact or a.rows == 0:
        return inverse(a) @ b
    if rank(a) < a.rows:
        raise SingularMatrixError("matrix is singular within tolerance")
    return DenseMatrix.from_array(np.linalg.solve(a.to_array(), b.to_array()), a.field)


def random_coefficients(count: int, seed: int, bound: int = RANDOM_BOUND) -> List[int]:
    """Seeded integers uniform in [-bound, bound] without zero."""
    rng = np.random.default_rng(seed)
    magnitudes = rng.integers(1, bound, size=count, endpoint=True)
    signs = rng.choice(np.array([-1, 1]), size=count)
    return [int(s) * int(m) for s, m in zip(signs, magnitudes)]


def random_combination(kernel: DenseMatrix, seed: int, bound: int = RANDOM_BOUND):
    """
    Random element K.c of the column span of a kernel basis.

    Args:
        kernel: basis vectors as columns
        seed: generator seed; equal seeds give identical vectors
        bound: coefficient magnitude bound

    Returns:
        Tuple of field entries of length kernel.rows
    """
    if kernel.cols == 0:
        raise PreconditionError("empty kernel: the ideal is the whole ring")
    field = kernel.field
    coeffs = [field.entry(c) for c in random_coefficients(kernel.cols, seed, bound)]
    vector = []
    for row in kernel.entries:
        total = field.entry(0)
        for value, c in zip(row, coeffs):
            total = total + value * c
        vector.append(total)
    return tuple(vector)


def charpoly(matrix: DenseMatrix) -> list:
    """Characteristic polynomial coefficients, leading 1 first."""
    if matrix.rows != matrix.cols:
        raise PreconditionError("charpoly needs a square matrix")
    if matrix.rows == 0:
        return [matrix.field.entry(1)]
    if matrix.field.exact:
        return list(matrix.to_domain().charpoly())
    return [float(c) for c in np.real(np.poly(matrix.to_array()))]


def eig_generalized(a: DenseMatrix, b: DenseMatrix, tolerance: float = None):
    """
    Solve (A - zB) w = 0 in floating point.

    Returns:
        List of (eigenvalue, eigenvector) pairs sorted by real then imaginary part
    """
    if a.shape != b.shape or a.rows != a.cols:
        raise PreconditionError(f"eig_generalized needs equal square shapes, got {a.shape} and {b.shape}")
    tol = tolerance if tolerance is not None else b.field.tolerance
    a_arr, b_arr = a.to_array(), b.to_array()
    if a.rows == 0:
        return []
    singular = linalg.svdvals(b_arr)
    if singular.min() <= tol * max(1.0, singular.max()):
        raise SingularMatrixError("B is singular in the generalized eigenproblem")

    values, vectors = linalg.eig(a_arr, b_arr)
    norm_a, norm_b = np.linalg.norm(a_arr, 2), np.linalg.norm(b_arr, 2)
    pairs = []
    for k, z in enumerate(values):
        w = vectors[:, k]
        residual = np.linalg.norm((a_arr - z * b_arr) @ w)
        if residual > tol * (norm_a + abs(z) * norm_b) * max(1.0, np.linalg.norm(w)):
            logger.warning(f"Eigenpair {k} residual {residual:.3e} exceeds tolerance")
        pairs.append((complex(z), w))
    pairs.sort(key=lambda pair: (round(pair[0].real, 12), round(pair[0].imag, 12)))
    return pairs
