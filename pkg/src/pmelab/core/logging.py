"""
Logging setup built on loguru.
"""
import sys
from pathlib import Path
from typing import Optional

from loguru import logger

from .constants import LOG_CONFIG


def setup_logging(level: Optional[str] = None, log_file: Optional[str] = None) -> None:
    """Install the stderr sink (and an optional rotating file sink)"""
    logger.remove()
    logger.add(
        sys.stderr,
        level=level or LOG_CONFIG["level"],
        format=LOG_CONFIG["format"],
    )
    if log_file:
        Path(log_file).parent.mkdir(parents=True, exist_ok=True)
        logger.add(
            log_file,
            level=level or LOG_CONFIG["level"],
            format=LOG_CONFIG["format"],
            rotation=LOG_CONFIG["rotation"],
            retention=LOG_CONFIG["retention"],
        )
    logger.debug(f"Logging configured at level {level or LOG_CONFIG['level']}")
