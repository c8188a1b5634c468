"""
Command Line Interface for the radical toolkit
"""

import argparse
import logging
import json
import os
from dataclasses import dataclass, field as dataclass_field
from typing import List, Optional

from .config import Settings, load_settings
from .errors import PreconditionError, SystemParseError
from .polycore import (
    Field,
    PolySystem,
    format_polynomial,
    make_ring,
    make_system,
    parse_polynomial,
)

COMMANDS = ("bounds", "basis", "traces", "radical", "roots", "squarefree", "bezout-radical")
PIPELINES = ("macaulay", "bezout", "both")
FIELDS = ("rational", "approx")

_TRUE = {"true", "yes", "1", "on"}
_FALSE = {"false", "no", "0", "off"}


@dataclass
class SystemFile:
    """Raw contents of a system document before parsing the polynomials"""

    vars: List[str]
    polys: List[str]
    field: str = "rational"
    tolerance: Optional[float] = None
    at_infinity: bool = True
    poly_lines: List[Optional[int]] = dataclass_field(default_factory=list)


def create_parser(settings: Optional[Settings] = None):
    """Create and configure the argument parser"""
    settings = settings or Settings()
    parser = argparse.ArgumentParser(
        description="Traces, radicals and roots of zero-dimensional polynomial systems"
    )
    parser.add_argument("command", choices=COMMANDS, help="What to compute")
    parser.add_argument(
        "system", help="Path to a system file (JSON or key: value text), or its contents"
    )
    parser.add_argument(
        "--seed",
        type=int,
        default=settings.seed,
        help=f"Random seed for moment draws (default: RADICAL_SEED or {settings.seed})",
    )
    parser.add_argument("--k", type=int, help="Override the basis degree bound k")
    parser.add_argument("--delta", type=int, help="Override the regularity bound delta")
    parser.add_argument(
        "--bigdelta", type=int, help="Fix the Macaulay truncation degree Delta"
    )
    parser.add_argument(
        "--tol",
        type=float,
        help=f"Tolerance for the approx field (default: file value or {settings.tolerance})",
    )
    parser.add_argument(
        "--field", choices=FIELDS, help="Override the field declared in the system file"
    )
    parser.add_argument(
        "--pipeline",
        choices=PIPELINES,
        default="macaulay",
        help="Pipeline for radical and roots (default: macaulay)",
    )
    parser.add_argument(
        "--shortcut",
        action="store_true",
        help="Use the classical Jacobian shortcut (square systems only)",
    )
    parser.add_argument(
        "--retries",
        type=int,
        default=settings.retries,
        help=f"Extra moment draws when the moment matrix is rank deficient (default: {settings.retries})",
    )
    parser.add_argument(
        "--workers",
        type=int,
        default=settings.workers,
        help=f"Worker threads for --pipeline both (default: {settings.workers})",
    )
    parser.add_argument("--output", "-o", help="Also write the result document to this file")
    parser.add_argument(
        "--quiet", "-q", action="store_true", help="Suppress the summary on stderr"
    )
    parser.add_argument(
        "--log-level",
        default=settings.log_level,
        help=f"Logging level (default: {settings.log_level})",
    )

    return parser


def _read_source(source: str) -> str:
    if "\n" not in source and os.path.isfile(source):
        with open(source, "r", encoding="utf-8") as f:
            return f.read()
    return source


def _parse_flag(value, line: Optional[int] = None) -> bool:
    if isinstance(value, bool):
        return value
    text = str(value).strip().lower()
    if text in _TRUE:
        return True
    if text in _FALSE:
        return False
    raise SystemParseError(f"expected true or false, got {value!r}", line)


def _parse_tolerance(value, line: Optional[int] = None) -> float:
    try:
        tolerance = float(value)
    except (TypeError, ValueError):
        raise SystemParseError(f"tolerance must be a number, got {value!r}", line)
    if tolerance <= 0:
        raise SystemParseError("tolerance must be positive", line)
    return tolerance


def _read_json(text: str) -> SystemFile:
    try:
        document = json.loads(text)
    except json.JSONDecodeError as e:
        raise SystemParseError(f"invalid JSON: {e.msg}", e.lineno, e.colno)
    if not isinstance(document, dict):
        raise SystemParseError("system document must be a JSON object")
    unknown = set(document) - {"vars", "field", "tolerance", "polys", "at_infinity"}
    if unknown:
        raise SystemParseError(f"unknown keys {sorted(unknown)}")
    variables, polys = document.get("vars"), document.get("polys")
    if not isinstance(variables, list) or not all(isinstance(v, str) for v in variables):
        raise SystemParseError("'vars' must be a list of names")
    if not isinstance(polys, list) or not all(isinstance(p, str) for p in polys):
        raise SystemParseError("'polys' must be a list of polynomial strings")
    tolerance = document.get("tolerance")
    return SystemFile(
        vars=variables,
        polys=polys,
        field=document.get("field", "rational"),
        tolerance=None if tolerance is None else _parse_tolerance(tolerance),
        at_infinity=_parse_flag(document.get("at_infinity", True)),
        poly_lines=[None] * len(polys),
    )


def _read_text(text: str) -> SystemFile:
    sf = SystemFile(vars=[], polys=[])
    seen_vars = False
    for number, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        key, sep, value = line.partition(":")
        if not sep:
            raise SystemParseError("expected 'key: value'", number, 1)
        key, value = key.strip().lower(), value.strip()
        if key == "vars":
            sf.vars = [v for v in value.replace(",", " ").split()]
            seen_vars = True
        elif key == "field":
            sf.field = value
        elif key == "tolerance":
            sf.tolerance = _parse_tolerance(value, number)
        elif key == "at_infinity":
            sf.at_infinity = _parse_flag(value, number)
        elif key == "poly":
            sf.polys.append(value)
            sf.poly_lines.append(number)
        else:
            raise SystemParseError(f"unknown key {key!r}", number, 1)
    if not seen_vars:
        raise SystemParseError("missing 'vars' line")
    return sf


def read_system_file(source: str) -> SystemFile:
    """Split a JSON or text system document into its fields."""
    text = _read_source(source)
    if text.lstrip().startswith("{"):
        return _read_json(text)
    return _read_text(text)


def parse_system(
    source: str, field_name: Optional[str] = None, tolerance: Optional[float] = None
) -> PolySystem:
    """
    Parse a system document into a PolySystem.

    Args:
        source: file path or document text
        field_name: overrides the document's field
        tolerance: overrides the document's tolerance

    Returns:
        PolySystem with degrees sorted non-increasing
    """
    sf = read_system_file(source)
    name = field_name or sf.field
    if name not in FIELDS:
        raise SystemParseError(f"field must be one of {FIELDS}, got {name!r}")
    tol = tolerance if tolerance is not None else sf.tolerance
    scalar = Field.rational() if name == "rational" else (
        Field.approx(tol) if tol is not None else Field.approx()
    )
    try:
        ring = make_ring(sf.vars, scalar)
    except PreconditionError as e:
        raise SystemParseError(str(e))
    if not sf.polys:
        raise SystemParseError("the system has no polynomials")
    polys = []
    for text, line in zip(sf.polys, sf.poly_lines or [None] * len(sf.polys)):
        p = parse_polynomial(text, ring, scalar, line)
        if not p:
            raise SystemParseError(f"{text!r} is the zero polynomial", line)
        polys.append(p)
    return make_system(ring, polys, scalar, sf.at_infinity)


def serialize_system(system: PolySystem) -> str:
    """JSON document that parses back to the same system."""
    document = {
        "vars": list(system.vars),
        "field": system.field.name,
        "polys": [format_polynomial(f) for f in system.polys],
        "at_infinity": system.at_infinity,
    }
    if not system.field.exact:
        document["tolerance"] = system.field.tolerance
    return json.dumps(document, indent=2, ensure_ascii=False)


def parse_arguments(argv: Optional[List[str]] = None):
    """Parse command line arguments and return parsed args"""
    parser = create_parser(load_settings())
    args = parser.parse_args(argv)
    if args.retries < 0:
        parser.error("--retries must be non-negative")
    if args.workers < 1:
        parser.error("--workers must be at least 1")
    if not isinstance(logging.getLevelName(args.log_level.upper()), int):
        parser.error(f"unknown log level {args.log_level!r}")
    return args
