"""
File processing utilities
"""
import csv
import json
import shutil
import tempfile
from contextlib import contextmanager
from pathlib import Path
from typing import Any, Dict, Iterable, Iterator, List, Sequence, Union

import numpy as np
from loguru import logger

from ..config import get_settings
from ..core.exceptions import ConfigurationException

PathLike = Union[str, Path]


def ensure_directory(directory: PathLike) -> None:
    """Ensure directory exists"""
    Path(directory).mkdir(parents=True, exist_ok=True)


def format_float(value: float) -> str:
    """Shortest-round-trip-safe float formatting with fixed significant digits"""
    return get_settings().CSV_FLOAT_FORMAT.format(float(value))


def _format_cell(value: Any) -> str:
    if isinstance(value, (bool, np.bool_)):
        return "true" if value else "false"
    if isinstance(value, (float, np.floating)):
        return format_float(value)
    return str(value)


def write_csv(path: PathLike, header: Sequence[str], rows: Iterable[Sequence[Any]]) -> Path:
    """Write rows with deterministic float formatting"""
    path = Path(path)
    ensure_directory(path.parent)
    count = 0
    with open(path, "w", newline="", encoding="utf-8") as f:
        writer = csv.writer(f, lineterminator="\n")
        writer.writerow(header)
        for row in rows:
            writer.writerow([_format_cell(v) for v in row])
            count += 1
    logger.info(f"CSV written: {path} ({count} rows)")
    return path


def read_csv_columns(path: PathLike, header: Sequence[str]) -> Dict[str, np.ndarray]:
    """Read a numeric CSV whose header must match"""
    path = Path(path)
    if not path.is_file():
        raise ConfigurationException(f"CSV file not found: {path}", config_key="path")
    with open(path, newline="", encoding="utf-8") as f:
        reader = csv.reader(f)
        found = next(reader, None)
        if found is None or [h.strip() for h in found] != list(header):
            raise ConfigurationException(
                f"CSV header {found} does not match expected {list(header)}",
                config_key="path",
            )
        rows = [[float(v) for v in row] for row in reader if row]
    data = np.asarray(rows, dtype=float).reshape(-1, len(header))
    return {name: data[:, i].copy() for i, name in enumerate(header)}


def _json_default(value: Any):
    if isinstance(value, np.ndarray):
        return value.tolist()
    if isinstance(value, (np.floating, np.integer)):
        return value.item()
    if isinstance(value, np.bool_):
        return bool(value)
    if hasattr(value, "value"):
        return value.value
    raise TypeError(f"Object of type {type(value).__name__} is not JSON serializable")


def write_json(path: PathLike, payload: Dict[str, Any]) -> Path:
    """Write a JSON report carrying the schema version"""
    path = Path(path)
    ensure_directory(path.parent)
    payload = {"schema": get_settings().REPORT_SCHEMA, **payload}
    with open(path, "w", encoding="utf-8") as f:
        json.dump(payload, f, indent=2, sort_keys=True, default=_json_default)
        f.write("\n")
    logger.info(f"JSON written: {path}")
    return path


def read_json(path: PathLike) -> Dict[str, Any]:
    path = Path(path)
    if not path.is_file():
        raise ConfigurationException(f"Config file not found: {path}", config_key="config")
    try:
        with open(path, encoding="utf-8") as f:
            return json.load(f)
    except json.JSONDecodeError as e:
        raise ConfigurationException(f"Invalid JSON in {path}: {e}", config_key="config")


@contextmanager
def staging_directory(out_dir: PathLike) -> Iterator[Path]:
    """Collect outputs in a temp directory; promote them only on success"""
    out_dir = Path(out_dir)
    ensure_directory(out_dir.parent if out_dir.parent != Path("") else Path("."))
    staging = Path(tempfile.mkdtemp(prefix=".pme-lab-", dir=out_dir.parent))
    try:
        yield staging
    except BaseException:
        shutil.rmtree(staging, ignore_errors=True)
        logger.warning(f"Run failed, discarded staged outputs in {staging}")
        raise
    else:
        ensure_directory(out_dir)
        promoted: List[str] = []
        for item in sorted(staging.iterdir()):
            target = out_dir / item.name
            if target.exists():
                if target.is_dir():
                    shutil.rmtree(target)
                else:
                    target.unlink()
            shutil.move(str(item), str(target))
            promoted.append(item.name)
        shutil.rmtree(staging, ignore_errors=True)
        logger.info(f"Promoted {len(promoted)} artifacts to {out_dir}")
