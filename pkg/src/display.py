"""
Display utilities for showing run results
"""

import logging
from .utils import Colors, thread_safe_print

logger = logging.getLogger(__name__)


def _show_section(section):
    if "basis" in section:
        thread_safe_print(
            f"{Colors.BOLD}🧱 Basis:{Colors.END} {Colors.WHITE}{', '.join(section['basis']) or '(empty)'}{Colors.END}"
        )
    if "generators" in section:
        thread_safe_print(f"{Colors.BOLD}🌱 Radical generators:{Colors.END}")
        for g in section["generators"]:
            thread_safe_print(f"  {Colors.CYAN}{g}{Colors.END}")
    diagnostics = section.get("diagnostics", {})
    if diagnostics.get("gorenstein") is False:
        thread_safe_print(
            f"{Colors.BOLD}⚠️  Quotient algebra is not Gorenstein{Colors.END} "
            f"(moment rank {diagnostics.get('moment_rank')})"
        )
    if diagnostics.get("connected_to_one") is False:
        thread_safe_print(f"{Colors.YELLOW}⚠️  Standard monomials are not connected to 1{Colors.END}")


def display_run_summary(document):
    """Display a human summary of the result document on stderr"""
    if not document:
        return

    thread_safe_print(f"\n{Colors.BOLD}{Colors.CYAN}{'='*60}{Colors.END}")
    thread_safe_print(
        f"{Colors.BOLD}{Colors.WHITE}📊 {document['command'].upper()} SUMMARY 📊{Colors.END}"
    )
    thread_safe_print(f"{Colors.BOLD}{Colors.CYAN}{'='*60}{Colors.END}")

    system = document["system"]
    thread_safe_print(
        f"{Colors.BOLD}🔢 Variables:{Colors.END} {Colors.WHITE}{', '.join(system['vars'])}{Colors.END}"
        f"  {Colors.BOLD}Field:{Colors.END} {Colors.WHITE}{system['field']}{Colors.END}"
    )
    bounds = document.get("bounds")
    if bounds:
        parts = ", ".join(f"{key}={value}" for key, value in bounds.items())
        thread_safe_print(f"{Colors.BOLD}📐 Bounds:{Colors.END} {Colors.WHITE}{parts}{Colors.END}")

    _show_section(document)

    if "squarefree" in document:
        thread_safe_print(
            f"{Colors.BOLD}✂️  Square-free part:{Colors.END} {Colors.GREEN}{document['squarefree']}{Colors.END}"
        )
    if "roots" in document:
        thread_safe_print(f"{Colors.BOLD}🎯 Roots ({len(document['roots'])}):{Colors.END}")
        for point in document["roots"]:
            thread_safe_print(f"  {Colors.WHITE}{point}{Colors.END}")

    summary = document.get("summary")
    if summary:
        success_rate = summary["successful"] / summary["total"] * 100 if summary["total"] else 0
        success_color = (
            Colors.GREEN
            if success_rate >= 80
            else Colors.YELLOW
            if success_rate >= 50
            else Colors.RED
        )
        thread_safe_print(
            f"{Colors.BOLD}✅ Pipelines:{Colors.END} {success_color}{summary['successful']}/{summary['total']} successful{Colors.END}"
        )
        for detail in summary["details"]:
            status_icon = "✅" if detail["success"] else "❌"
            status_color = Colors.GREEN if detail["success"] else Colors.RED
            thread_safe_print(
                f"  {status_icon} {status_color}{detail['pipeline']}{Colors.END}"
            )
        cross = document.get("cross_check", {})
        if cross.get("agree"):
            color = Colors.GREEN if cross["all_agree"] else Colors.RED
            thread_safe_print(
                f"{Colors.BOLD}🔁 Characteristic polynomials agree:{Colors.END} {color}{cross['all_agree']}{Colors.END}"
            )
        elif cross and cross.get("all_agree") is None:
            thread_safe_print(
                f"{Colors.YELLOW}⚠️  No macaulay result to cross-check against{Colors.END}"
            )

    thread_safe_print(f"{Colors.BOLD}{Colors.CYAN}{'='*60}{Colors.END}")


def log_execution_info(args):
    """Log run configuration information"""
    logger.info(f"Command: {args.command}")
    logger.info(f"System: {args.system if chr(10) not in args.system else '<inline text>'}")
    logger.info(f"Seed: {args.seed}, retries: {args.retries}")
    overrides = {
        name: getattr(args, name)
        for name in ("k", "delta", "bigdelta")
        if getattr(args, name) is not None
    }
    if overrides:
        logger.info(f"Bound overrides: {overrides}")
    if args.command in ("radical", "roots"):
        logger.info(f"Pipeline: {args.pipeline}{' with Jacobian shortcut' if args.shortcut else ''}")
    if args.output:
        logger.info(f"Output file: {args.output}")
