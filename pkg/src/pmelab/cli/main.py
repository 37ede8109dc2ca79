"""
pme-lab command-line entry point

    pme-lab <subcommand> --config <path> --out <dir> [--seed <u64>]
"""

import argparse
import json
import sys
from typing import List, Optional

from loguru import logger
from pydantic import ValidationError

from ..config import get_settings
from ..core.constants import EXIT_CODES
from ..core.exceptions import (
    CFLViolationException,
    CheckFailedException,
    ComparisonViolationException,
    ConfigurationException,
    DomainException,
    InconclusiveException,
    IntegrationException,
    NumericalAbortException,
    PmeLabException,
    PreconditionException,
    QuadratureException,
    ShootingException,
    ValidationException,
)
from ..core.logging import setup_logging
from ..models.config_models import RUN_CONFIGS
from ..utils.file_utils import read_json, staging_directory
from .commands import COMMANDS

# Exception type -> exit code, first match wins
EXIT_MAP = [
    (InconclusiveException, EXIT_CODES["inconclusive"]),
    ((CheckFailedException, ComparisonViolationException), EXIT_CODES["check_failure"]),
    (
        (NumericalAbortException, CFLViolationException, QuadratureException, ShootingException, IntegrationException),
        EXIT_CODES["numerical_abort"],
    ),
    (
        (ConfigurationException, ValidationException, PreconditionException, DomainException),
        EXIT_CODES["config_error"],
    ),
]


def exit_code_for(exc: PmeLabException) -> int:
    for types, code in EXIT_MAP:
        if isinstance(exc, types):
            return code
    return EXIT_CODES["check_failure"]


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="pme-lab",
        description="Numerical lab for unbounded supercaloric functions of the porous medium equation",
    )
    parser.add_argument("command", choices=sorted(COMMANDS), help="Subcommand to run")
    parser.add_argument("--config", required=True, help="JSON run config")
    parser.add_argument("--out", required=True, help="Output directory")
    parser.add_argument("--seed", type=int, default=None, help="Reserved for randomized suites")
    parser.add_argument("--log-level", default=None, help="Override PMELAB_LOG_LEVEL")
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    settings = get_settings()
    setup_logging(args.log_level or settings.LOG_LEVEL, settings.LOG_FILE)
    if args.seed is not None:
        if not 0 <= args.seed < 2 ** 64:
            logger.error(f"Seed {args.seed} is not a u64")
            return EXIT_CODES["config_error"]
        logger.debug(f"Seed {args.seed} accepted")

    try:
        config = RUN_CONFIGS[args.command].model_validate(read_json(args.config))
    except ValidationError as e:
        logger.error(f"Invalid {args.command} config:\n{e}")
        return EXIT_CODES["config_error"]
    except ConfigurationException as e:
        logger.error(e.message)
        return EXIT_CODES["config_error"]

    try:
        with staging_directory(args.out) as stage:
            COMMANDS[args.command](config, stage)
    except InconclusiveException as e:
        logger.error(e.message)
        trend = e.trend.to_dict() if e.trend is not None else None
        print(json.dumps({"error": e.error_code, "message": e.message, "trend": trend}, indent=2))
        return EXIT_CODES["inconclusive"]
    except PmeLabException as e:
        code = exit_code_for(e)
        logger.error(f"{e.__class__.__name__}: {e.message}")
        print(json.dumps({"error": e.error_code, "message": e.message, "details": e.details}, default=str))
        return code

    logger.info(f"{args.command} finished, outputs in {args.out}")
    return EXIT_CODES["success"]


if __name__ == "__main__":
    sys.exit(main())
