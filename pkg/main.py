#!/usr/bin/env python3
"""
Radical Toolkit

Reads a zero-dimensional polynomial system, runs the requested command and
prints the JSON result document on stdout. Diagnostics go to stderr.
"""

import sys
from pathlib import Path

# Add src directory to Python path
sys.path.insert(0, str(Path(__file__).parent / "src"))

import logging

from src.utils import setup_logging
from src.cli import parse_arguments, parse_system
from src.config import load_settings
from src.errors import RadicalError
from src.executor import RadicalExecutor, render_document, save_document
from src.display import display_run_summary, log_execution_info

logger = logging.getLogger(__name__)


def main(argv=None) -> int:
    """Main entry point for the radical toolkit"""
    try:
        settings = load_settings()
        args = parse_arguments(argv)
        setup_logging(args.log_level.upper(), settings.log_file)
        log_execution_info(args)

        system = parse_system(args.system, args.field, args.tol)
        executor = RadicalExecutor(
            system,
            seed=args.seed,
            retries=args.retries,
            k=args.k,
            delta=args.delta,
            big_delta=args.bigdelta,
            shortcut=args.shortcut,
            workers=args.workers,
        )
        document = executor.run(args.command, args.pipeline)
    except RadicalError as e:
        logger.error(f"{type(e).__name__}: {e}")
        return e.exit_code

    print(render_document(document))
    if args.output:
        save_document(document, args.output)
    if not args.quiet:
        display_run_summary(document)
    return 0


if __name__ == "__main__":
    sys.exit(main())
