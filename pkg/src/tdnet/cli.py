# -*- coding: utf-8 -*-
"""Command-line entry point: ``tdnet exp1|exp2|exp3|run``."""

import argparse
import logging
import sys
from typing import Optional, Sequence

from . import __version__
from .config import ConfigError, load_config
from .experiments import run_experiment
from .io import _setup_logger
from .qnet import QuestionNetParseError


EXIT_OK = 0
EXIT_CONFIG_ERROR = 2
EXIT_NOT_CONVERGED = 3


def _alpha_list(text: str) -> list[float]:
    try:
        return [float(a) for a in text.split(",") if a.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"{text!r} is not a comma-separated list of numbers")


def _seed(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"{text!r} is not an integer")
    if not 0 <= value < 2**64:
        raise argparse.ArgumentTypeError(f"{text!r} is not an unsigned 64-bit integer")
    return value


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="tdnet",
        description="Reproduce the TD-network random-walk experiments.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)
    helps = {
        "exp1": "n-step unconditional predictions, MC vs TD (Table 1)",
        "exp2": "action-conditional predictions, online and batch (Tables 2-3)",
        "exp3": "TD networks on the bit-only walk (learning curves)",
        "run": "custom configuration (question-network files, ablations)",
    }
    for name, text in helps.items():
        p = sub.add_parser(name, help=text)
        p.add_argument("--config", help="YAML configuration file", required=name == "run")
        p.add_argument("--seed", type=_seed, help="root seed (unsigned 64-bit)")
        p.add_argument("--out", dest="out_dir", help="output directory")
        p.add_argument("--runs", type=int, help="independent runs per cell")
        p.add_argument("--alpha", dest="alphas", type=_alpha_list, help="comma-separated step sizes")
        p.add_argument("--boundary", choices=("stay", "reflect"), help="boundary rule of the walk")
        p.add_argument("--weighting", choices=("uniform", "visitation"), help="RMSE state weighting")
        p.add_argument("--ncores", type=int, help="worker processes")
        verbosity = p.add_mutually_exclusive_group()
        verbosity.add_argument("-v", "--verbose", action="store_true", help="debug output")
        verbosity.add_argument("-q", "--quiet", action="store_true", help="warnings only")
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    if args.verbose:
        level = logging.DEBUG
    elif args.quiet:
        level = logging.WARNING
    else:
        level = logging.INFO
    logger = _setup_logger(name="tdnet", level=level)
    overrides = {
        key: getattr(args, key)
        for key in ("seed", "out_dir", "runs", "alphas", "boundary", "weighting", "ncores")
    }
    try:
        cfg = load_config(args.config, args.command, **overrides)
        result = run_experiment(cfg, logger=logger)
    except (ConfigError, QuestionNetParseError) as e:
        logger.error(str(e))
        return EXIT_CONFIG_ERROR
    for name, path in result.artifacts.items():
        logger.info(f"Wrote {name}: {path}")
    if not result.converged:
        logger.error("Some computations did not converge.")
        return EXIT_NOT_CONVERGED
    return EXIT_OK


def run() -> None:
    """Console-script entry point."""
    sys.exit(main())


if __name__ == "__main__":
    run()
