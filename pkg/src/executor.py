"""
Radical Executor - runs commands and pipelines and builds the result document
"""

import json
import time
from concurrent.futures import ThreadPoolExecutor, as_completed
import logging
import threading
from pathlib import Path
from typing import Callable, Dict, List, Optional

from sympy import QQ

from .bezout import (
    horner_basis,
    radical_from_bezout,
    run_reduction,
    uni_squarefree,
    uni_trace_matrix,
)
from .config import DEFAULT_RETRIES, DEFAULT_WORKERS
from .errors import PreconditionError, RadicalError
from .exactla import DenseMatrix, charpoly
from .macaulay import build_quotient, degree_bounds, override_bounds
from .momtrace import jacobian_shortcut, run_radical
from .polycore import Monomial, PolySystem, format_polynomial
from .utils import Colors, thread_safe_print

logger = logging.getLogger(__name__)


def format_scalar(value, exact: bool):
    """Exact scalars as "p/q" strings, approximate ones as floats or {re, im}."""
    if exact:
        return str(QQ.to_sympy(QQ.convert(value)))
    if isinstance(value, complex):
        return {"re": value.real, "im": value.imag}
    return float(value)


def serialize_matrix(matrix: DenseMatrix) -> Dict:
    exact = matrix.field.exact
    return {
        "rows": matrix.rows,
        "cols": matrix.cols,
        "entries": [[format_scalar(v, exact) for v in row] for row in matrix.entries],
    }


def format_monomial(mono: Monomial, system: PolySystem) -> str:
    return format_polynomial(system.ring.from_dict({mono: 1}))


def serialize_root(point, tolerance: float) -> List:
    coords = []
    for value in point:
        if isinstance(value, complex) and abs(value.imag) > tolerance:
            coords.append({"re": value.real, "im": value.imag})
        else:
            coords.append(float(value.real if isinstance(value, complex) else value))
    return coords


def serialize_charpoly(matrix: DenseMatrix) -> List:
    return [format_scalar(c, matrix.field.exact) for c in charpoly(matrix)]


def charpolys_agree(left: List[List], right: List[List], tolerance: Optional[float]) -> bool:
    if len(left) != len(right):
        return False
    for a, b in zip(left, right):
        if len(a) != len(b):
            return False
        if tolerance is None:
            if a != b:
                return False
        elif any(abs(x - y) > tolerance * max(1.0, abs(x), abs(y)) for x, y in zip(a, b)):
            return False
    return True


class RadicalExecutor:
    """Main class for running toolkit commands on one polynomial system"""

    def __init__(
        self,
        system: PolySystem,
        seed: int = 0,
        retries: int = DEFAULT_RETRIES,
        k: Optional[int] = None,
        delta: Optional[int] = None,
        big_delta: Optional[int] = None,
        shortcut: bool = False,
        workers: int = DEFAULT_WORKERS,
    ):
        self.system = system
        self.seed = seed
        self.retries = retries
        self.overrides = {"k": k, "delta": delta, "big_delta": big_delta}
        self.shortcut = shortcut
        self.workers = workers
        self._quotient = None
        self._quotient_error: Optional[RadicalError] = None
        self._quotient_lock = threading.Lock()

    @property
    def exact(self) -> bool:
        return self.system.field.exact

    def quotient(self):
        """Mac_Delta and B, built once per executor and shared by the pipelines"""
        with self._quotient_lock:
            if self._quotient_error is not None:
                raise self._quotient_error
            if self._quotient is None:
                try:
                    self._quotient = build_quotient(self.system, **self.overrides)
                except RadicalError as e:
                    self._quotient_error = e
                    raise
            return self._quotient

    def _header(self, command: str, pipeline: Optional[str] = None) -> Dict:
        header = {
            "command": command,
            "system": {
                "vars": list(self.system.vars),
                "field": self.system.field.name,
                "polys": [format_polynomial(f) for f in self.system.polys],
                "at_infinity": self.system.at_infinity,
            },
            "seed": self.seed,
        }
        if pipeline:
            header["pipeline"] = pipeline
        return header

    def _bounds_section(self, qd) -> Dict:
        section = qd.bounds.as_dict()
        section["N"] = qd.N
        return section

    def _monomials(self, monos) -> List[str]:
        return [format_monomial(b, self.system) for b in monos]

    def run(self, command: str, pipeline: str = "macaulay") -> Dict:
        """Dispatch a command and return its result document"""
        handlers: Dict[str, Callable[[str], Dict]] = {
            "bounds": self.run_bounds,
            "basis": self.run_basis,
            "traces": self.run_traces,
            "radical": self.run_radical,
            "roots": self.run_roots,
            "squarefree": self.run_squarefree,
            "bezout-radical": self.run_bezout_radical,
        }
        if command not in handlers:
            raise PreconditionError(f"unknown command {command!r}")
        logger.info(f"Running {command} on {self.system.s} polynomials in {self.system.m} variables")
        return handlers[command](pipeline)

    def run_bounds(self, pipeline: str = "macaulay") -> Dict:
        bounds = degree_bounds(self.system.degrees, self.system.m, self.system.at_infinity)
        bounds = override_bounds(
            bounds, self.overrides["k"], self.overrides["delta"], self.overrides["big_delta"]
        )
        document = self._header("bounds")
        section = bounds.as_dict()
        prediction = None
        if self.system.s == self.system.m:
            prediction = 1
            for d in self.system.degrees:
                prediction *= d
        section["N_prediction"] = prediction
        document["bounds"] = section
        return document

    def run_basis(self, pipeline: str = "macaulay") -> Dict:
        qd = self.quotient()
        document = self._header("basis")
        document["bounds"] = self._bounds_section(qd)
        document["basis"] = self._monomials(qd.basis)
        document["diagnostics"] = {"mac_rows": qd.mac.rows, "mac_cols": qd.mac.cols}
        return document

    def run_traces(self, pipeline: str = "macaulay") -> Dict:
        qd = self.quotient()
        document = self._header("traces")
        document["bounds"] = self._bounds_section(qd)
        document["basis"] = self._monomials(qd.basis)
        if qd.N == 0:
            document["diagnostics"] = {"gorenstein": True}
            return document
        run = run_radical(qd, self.seed, self.retries)
        td, md = run.traces, run.moment
        document["trace_basis"] = self._monomials(td.basis)
        document["jacobian"] = format_polynomial(td.J)
        document["moment_matrix"] = serialize_matrix(md.M)
        document["traces"] = serialize_matrix(td.T)
        document["shifted_traces"] = [serialize_matrix(T) for T in td.T_shift]
        document["diagnostics"] = self._moment_diagnostics(run)
        return document

    def _moment_diagnostics(self, run) -> Dict:
        md = run.moment
        if md is None:
            return {"gorenstein": True}
        return {
            "gorenstein": run.gorenstein,
            "moment_rank": md.rank,
            "draws": md.draws,
            "seed_used": md.seed,
            "trace_rank": run.traces.rank,
        }

    def _result_section(self, result) -> Dict:
        return {
            "basis": self._monomials(result.basis),
            "mult_matrices": [serialize_matrix(M) for M in result.mult_matrices],
            "generators": [format_polynomial(g) for g in result.generators],
        }

    def _charpolys(self, matrices) -> List[List]:
        return [serialize_charpoly(M) for M in matrices]

    def macaulay_pipeline(self) -> Dict:
        qd = self.quotient()
        run = run_radical(qd, self.seed, self.retries)
        section = self._result_section(run.result)
        section["bounds"] = self._bounds_section(qd)
        section["diagnostics"] = self._moment_diagnostics(run)
        section["charpolys"] = self._charpolys(run.result.mult_matrices)
        return section

    def shortcut_pipeline(self) -> Dict:
        qd = self.quotient()
        result = jacobian_shortcut(qd, self.seed, self.retries)
        section = self._result_section(result)
        section["bounds"] = self._bounds_section(qd)
        section["charpolys"] = self._charpolys(result.mult_matrices)
        return section

    def bezout_pipeline(self) -> Dict:
        state = run_reduction(self.system)
        return {
            "basis": [format_polynomial(a) for a in state.basis],
            "mult_matrices": [serialize_matrix(M) for M in state.mult_matrices],
            "generators": [format_polynomial(g) for g in radical_from_bezout(self.system)],
            "diagnostics": {
                "iterations": state.iterations,
                "reduction_space": len(state.V),
                "standard_monomials": self._monomials(state.standard),
                "connected_to_one": state.connected_to_one,
                "y_side_elements": len(state.H),
                "warnings": list(state.warnings),
            },
            "charpolys": self._charpolys(state.mult_matrices),
        }

    def run_radical(self, pipeline: str = "macaulay") -> Dict:
        document = self._header("radical", pipeline)
        if pipeline == "both":
            document.update(self.run_all_pipelines())
            return document
        if pipeline == "bezout":
            document.update(self.bezout_pipeline())
        elif self.shortcut:
            document.update(self.shortcut_pipeline())
        else:
            document.update(self.macaulay_pipeline())
        return document

    def run_roots(self, pipeline: str = "macaulay") -> Dict:
        if pipeline != "macaulay":
            logger.warning("Roots are read from the trace matrices; using the macaulay pipeline")
        qd = self.quotient()
        document = self._header("roots", "macaulay")
        run = run_radical(qd, self.seed, self.retries, with_roots=True)
        document.update(self._result_section(run.result))
        document["bounds"] = self._bounds_section(qd)
        tolerance = self.system.field.tolerance
        document["roots"] = [serialize_root(p, tolerance) for p in run.result.roots]
        document["diagnostics"] = self._moment_diagnostics(run)
        return document

    def run_squarefree(self, pipeline: str = "macaulay") -> Dict:
        if self.system.m != 1 or self.system.s != 1:
            raise PreconditionError("squarefree needs a single univariate polynomial")
        f = self.system.polys[0]
        document = self._header("squarefree")
        document["horner_basis"] = [format_polynomial(H) for H in horner_basis(f).polys]
        document["trace_matrix"] = serialize_matrix(uni_trace_matrix(f).matrix)
        document["squarefree"] = format_polynomial(uni_squarefree(f))
        return document

    def run_bezout_radical(self, pipeline: str = "bezout") -> Dict:
        document = self._header("bezout-radical", "bezout")
        document.update(self.bezout_pipeline())
        return document

    def run_all_pipelines(self) -> Dict:
        """Run every applicable pipeline in parallel and cross-check the results"""
        pipelines = {"macaulay": self.macaulay_pipeline}
        if self.system.s == self.system.m:
            pipelines["shortcut"] = self.shortcut_pipeline
            pipelines["bezout"] = self.bezout_pipeline
        else:
            logger.warning("Bezout pipelines need s = m; running macaulay only")

        thread_safe_print(
            f"{Colors.BOLD}{Colors.CYAN}🚀 Running {len(pipelines)} pipelines with up to {self.workers} workers{Colors.END}"
        )
        results = {"total": len(pipelines), "successful": 0, "failed": 0, "details": []}
        sections: Dict[str, Dict] = {}
        with ThreadPoolExecutor(max_workers=self.workers) as executor:
            future_to_name = {
                executor.submit(self._timed, fn): name for name, fn in pipelines.items()
            }
            for future in as_completed(future_to_name):
                name = future_to_name[future]
                try:
                    section, elapsed = future.result()
                    sections[name] = section
                    results["successful"] += 1
                    logger.info(f"✓ Pipeline {name} completed in {elapsed:.2f}s")
                    results["details"].append({"pipeline": name, "success": True})
                except RadicalError as e:
                    results["failed"] += 1
                    logger.error(f"✗ Pipeline {name} failed: {e}")
                    results["details"].append(
                        {"pipeline": name, "success": False, "error": str(e)}
                    )

        results["details"].sort(key=lambda detail: detail["pipeline"])
        return {
            "pipelines": {name: sections[name] for name in sorted(sections)},
            "summary": results,
            "cross_check": self.cross_check(sections),
        }

    @staticmethod
    def _timed(fn):
        start = time.perf_counter()
        section = fn()
        return section, time.perf_counter() - start

    def cross_check(self, sections: Dict[str, Dict]) -> Dict:
        """Compare characteristic polynomials of M_{x_k} against the macaulay pipeline"""
        reference = sections.get("macaulay")
        if reference is None:
            logger.warning("No macaulay result to cross-check against")
            return {"reference": "macaulay", "agree": {}, "all_agree": None}
        tolerance = None if self.exact else self.system.field.tolerance
        comparisons = {}
        for name in sorted(sections):
            if name == "macaulay":
                continue
            agree = charpolys_agree(
                reference["charpolys"], sections[name]["charpolys"], tolerance
            )
            comparisons[name] = agree
            if not agree:
                logger.warning(f"Characteristic polynomials of {name} differ from macaulay")
        return {"reference": "macaulay", "agree": comparisons, "all_agree": all(comparisons.values())}


def save_document(document: Dict, output_file: str) -> None:
    """Write the result document next to its stdout copy"""
    path = Path(output_file)
    try:
        if path.parent and not path.parent.exists():
            path.parent.mkdir(parents=True, exist_ok=True)
        with open(path, "w", encoding="utf-8") as f:
            json.dump(document, f, indent=2, ensure_ascii=False)
            f.write("\n")
        logger.info(f"Result saved to: {path}")
    except OSError as e:
        logger.error(f"Error saving result to {path}: {e}")


def render_document(document: Dict) -> str:
    return json.dumps(document, indent=2, ensure_ascii=False, sort_keys=False)
