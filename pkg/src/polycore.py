"""
Sparse multivariate polynomials, monomial layout and the scalar field

Polynomials are sympy ring elements over QQ (exact mode) or RR (approx mode),
always in a graded-lex ring. Monomials are plain exponent tuples.
"""

import logging
from dataclasses import dataclass
from itertools import combinations_with_replacement
from typing import Dict, List, Optional, Sequence, Tuple

from sympy import QQ, RR, Float, Symbol
from sympy.parsing.sympy_parser import (
    convert_xor,
    implicit_multiplication,
    parse_expr,
    standard_transformations,
)
from sympy.polys.matrices import DomainMatrix
from sympy.polys.orderings import grlex
from sympy.polys.rings import PolyElement, PolyRing

from .config import DEFAULT_TOLERANCE
from .errors import (
    DegreeOverflowError,
    PreconditionError,
    SystemParseError,
    VariableMismatchError,
)

logger = logging.getLogger(__name__)

Monomial = Tuple[int, ...]

# Degree of the zero polynomial
NEG_INF = float("-inf")

_TRANSFORMATIONS = standard_transformations + (convert_xor, implicit_multiplication)


@dataclass(frozen=True)
class Field:
    """Scalar field: exact rationals, or floats compared with a tolerance"""

    exact: bool = True
    tolerance: float = DEFAULT_TOLERANCE

    @classmethod
    def rational(cls) -> "Field":
        return cls(exact=True)

    @classmethod
    def approx(cls, tolerance: float = DEFAULT_TOLERANCE) -> "Field":
        return cls(exact=False, tolerance=tolerance)

    @property
    def name(self) -> str:
        return "rational" if self.exact else "approx"

    @property
    def domain(self):
        """Coefficient domain used for polynomial rings"""
        return QQ if self.exact else RR

    def convert(self, value):
        """Convert to a polynomial coefficient"""
        return self.domain.convert(value)

    def entry(self, value):
        """Convert to a matrix entry (QQ element or float)"""
        if self.exact:
            return QQ.convert(value)
        return float(value)

    def is_zero(self, value) -> bool:
        if self.exact:
            return value == 0
        return abs(value) <= self.tolerance

    def approx_equal(self, a, b) -> bool:
        """|a-b| <= tau * max(1, |a|, |b|) in approx mode, equality otherwise"""
        if self.exact:
            return a == b
        a, b = complex(a), complex(b)
        return abs(a - b) <= self.tolerance * max(1.0, abs(a), abs(b))

    def chop(self, poly: PolyElement) -> PolyElement:
        """Drop coefficients that are zero within tolerance"""
        if self.exact:
            return poly
        kept = {m: c for m, c in poly.items() if abs(float(c)) > self.tolerance}
        return poly.ring.from_dict(kept)


@dataclass(frozen=True)
class PolySystem:
    """f_1..f_s over one ring, sorted so that d_1 >= ... >= d_s"""

    ring: PolyRing
    polys: Tuple[PolyElement, ...]
    field: Field
    at_infinity: bool = True

    @property
    def vars(self) -> Tuple[str, ...]:
        return tuple(str(s) for s in self.ring.symbols)

    @property
    def m(self) -> int:
        return self.ring.ngens

    @property
    def s(self) -> int:
        return len(self.polys)

    @property
    def degrees(self) -> Tuple[int, ...]:
        return tuple(int(total_degree(f)) for f in self.polys)


def make_ring(names: Sequence[str], field: Field) -> PolyRing:
    """Graded-lex polynomial ring over the field's domain"""
    if not names:
        raise PreconditionError("at least one variable is required")
    if len(set(names)) != len(names):
        raise PreconditionError(f"duplicate variable names in {list(names)}")
    return PolyRing(tuple(names), field.domain, grlex)


def make_system(
    ring: PolyRing,
    polys: Sequence[PolyElement],
    field: Field,
    at_infinity: bool = True,
) -> PolySystem:
    """Validate f_1..f_s and sort them by non-increasing degree."""
    if not polys:
        raise PreconditionError("a system needs at least one polynomial")
    for index, f in enumerate(polys):
        if f.ring.ngens != ring.ngens:
            raise VariableMismatchError(
                f"polynomial {index + 1} has {f.ring.ngens} variables, expected {ring.ngens}"
            )
        if not f:
            raise PreconditionError(f"polynomial {index + 1} is zero")
    # sorted() is stable, so equal degrees keep input order
    ordered = sorted(polys, key=lambda f: -total_degree(f))
    return PolySystem(ring, tuple(ordered), field, at_infinity)


def mono_key(mono: Monomial):
    """Sort key: lower total degree first, then x_1 before x_2 within a degree"""
    return (sum(mono), tuple(-e for e in mono))


def _monomials_of_degree(m: int, degree: int) -> List[Monomial]:
    monos = []
    for combo in combinations_with_replacement(range(m), degree):
        exps = [0] * m
        for var in combo:
            exps[var] += 1
        monos.append(tuple(exps))
    return sorted(monos, reverse=True)


def mono_basis(m: int, d: int) -> List[Monomial]:
    """
    All monomials of degree <= d in graded-lex order.

    Args:
        m: number of variables
        d: degree bound

    Returns:
        List of exponent tuples of length C(m+d, m)
    """
    if m < 1 or d < 0:
        raise PreconditionError(f"mono_basis needs m >= 1 and d >= 0, got ({m}, {d})")
    basis: List[Monomial] = []
    for degree in range(d + 1):
        basis.extend(_monomials_of_degree(m, degree))
    return basis


def mono_index(basis: Sequence[Monomial]) -> Dict[Monomial, int]:
    return {mono: i for i, mono in enumerate(basis)}


def total_degree(p: PolyElement):
    return max((sum(mono) for mono in p.keys()), default=NEG_INF)


def poly_mul(p: PolyElement, q: PolyElement) -> PolyElement:
    if p.ring.ngens != q.ring.ngens:
        raise VariableMismatchError(
            f"cannot multiply polynomials in {p.ring.ngens} and {q.ring.ngens} variables"
        )
    if p.ring != q.ring:
        q = p.ring.from_dict(dict(q))
    return p * q


def coeff_vector(
    p: PolyElement,
    basis: Sequence[Monomial],
    index: Optional[Dict[Monomial, int]] = None,
) -> list:
    """Coefficients of p listed in basis order; every monomial of p must be in basis."""
    position = index if index is not None else mono_index(basis)
    vector = [p.ring.domain.zero] * len(basis)
    for mono, coeff in p.items():
        i = position.get(mono)
        if i is None:
            raise DegreeOverflowError(
                f"monomial {mono} of degree {sum(mono)} is outside the basis"
            )
        vector[i] = coeff
    return vector


def from_coeff_vector(
    vector: Sequence, basis: Sequence[Monomial], ring: PolyRing
) -> PolyElement:
    terms = {}
    for mono, value in zip(basis, vector):
        if value != 0:
            terms[mono] = ring.domain.convert(value)
    return ring.from_dict(terms)


def determinant(rows: Sequence[Sequence[PolyElement]], ring: PolyRing) -> PolyElement:
    """Division-free determinant of a square matrix of polynomials (Berkowitz)."""
    n = len(rows)
    if n == 0:
        return ring.one
    matrix = DomainMatrix([list(row) for row in rows], (n, n), ring.to_domain())
    charpoly = matrix.charpoly_berk()
    det = charpoly[-1]
    return -det if n % 2 else det


def jacobian_det(system: PolySystem) -> PolyElement:
    """Determinant of [df_i/dx_j] for a square system."""
    if system.s != system.m:
        raise PreconditionError(
            f"the Jacobian determinant needs s = m, got s={system.s}, m={system.m}"
        )
    ring = system.ring
    rows = [[f.diff(x) for x in ring.gens] for f in system.polys]
    return system.field.chop(determinant(rows, ring))


def evaluate(p: PolyElement, point: Sequence):
    """Value of p at a point; floats and complex coordinates switch to float arithmetic."""
    numeric = any(isinstance(v, (float, complex)) for v in point)
    total = 0
    for mono, coeff in p.items():
        term = float(coeff) if numeric else coeff
        for value, exp in zip(point, mono):
            if exp:
                term = term * value**exp
        total = total + term
    return total


def parse_polynomial(
    text: str,
    ring: PolyRing,
    field: Field,
    line: Optional[int] = None,
) -> PolyElement:
    """
    Parse terms like ``3/2*x1^2*x2 - x2 + 1`` over the ring's variables.

    Args:
        text: polynomial text; ``^`` and ``**`` are powers, ``*`` may be omitted
        ring: target ring (declares the variable names)
        field: decimals are only accepted for the approx field
        line: source line used in error messages

    Returns:
        The parsed polynomial
    """
    names = [str(s) for s in ring.symbols]
    local = {name: Symbol(name) for name in names}
    if not text or not text.strip():
        raise SystemParseError("empty polynomial", line, 1)
    try:
        expr = parse_expr(text, local_dict=local, transformations=_TRANSFORMATIONS)
    except Exception as e:
        column = getattr(e, "offset", None)
        raise SystemParseError(f"cannot parse polynomial {text!r}", line, column)

    unknown = sorted(str(s) for s in expr.free_symbols if str(s) not in local)
    if unknown:
        raise SystemParseError(
            f"unknown variable(s) {', '.join(unknown)} in {text!r}", line
        )
    if field.exact and expr.atoms(Float):
        raise SystemParseError(
            f"decimal coefficients in {text!r} need the approx field", line
        )
    try:
        return ring.from_expr(expr)
    except Exception:
        raise SystemParseError(f"{text!r} is not a polynomial", line)


def format_polynomial(p: PolyElement) -> str:
    return str(p.as_expr())
