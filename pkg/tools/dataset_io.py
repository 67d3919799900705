"""
Fat-Tail Gini Toolkit: dataset_io.py
Description: Reading observation files and writing results
Version: 1.0.0
"""

# tools/dataset_io.py
"""
Input datasets: plain text (one value per line, '#' comments and blank lines
skipped) or CSV with a named or indexed column.
"""

import logging
import math
from pathlib import Path
from typing import Optional, Union

import numpy as np
import pandas as pd
from pydantic import BaseModel, ConfigDict

from core.errors import InputError, InsufficientDataError
from gini.distributions import Sample

logger = logging.getLogger(__name__)

MIN_VALUES = 2


class InputDataset(BaseModel):
    """A parsed observation file"""
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    path: Path
    column: Optional[Union[str, int]] = None
    sample: Sample


def _parse_number(text: str, line_number: int, path: Path) -> float:
    try:
        value = float(text)
    except ValueError:
        raise InputError(f"{path}:{line_number}: not a number: {text.strip()!r}") from None
    if not math.isfinite(value):
        raise InputError(f"{path}:{line_number}: not a finite number: {text.strip()!r}")
    return value


def _read_plain(path: Path) -> np.ndarray:
    values = []
    try:
        with path.open("rb") as handle:
            for line_number, raw in enumerate(handle, start=1):
                try:
                    text = raw.decode("utf-8").strip()
                except UnicodeDecodeError as e:
                    raise InputError(f"{path}:{line_number}: not valid UTF-8: {e.reason}") from None
                if not text or text.startswith("#"):
                    continue
                values.append(_parse_number(text, line_number, path))
    except OSError as e:
        raise InputError(f"cannot read {path}: {e.strerror or e}") from None
    return np.asarray(values, dtype=np.float64)


def _resolve_column(frame: pd.DataFrame, column: Optional[Union[str, int]]) -> str:
    if column is None:
        if frame.shape[1] != 1:
            raise InputError(f"CSV has {frame.shape[1]} columns; choose one with --column")
        return frame.columns[0]
    if column in frame.columns:
        return column
    if isinstance(column, str) and column.isdigit():
        column = int(column)
    if isinstance(column, int) and 0 <= column < frame.shape[1]:
        return frame.columns[column]
    raise InputError(f"column {column!r} not found (available: {', '.join(map(str, frame.columns))})")


def _read_csv(path: Path, column: Optional[Union[str, int]]) -> np.ndarray:
    try:
        frame = pd.read_csv(path, dtype=str, skip_blank_lines=True)
    except (pd.errors.ParserError, pd.errors.EmptyDataError, UnicodeDecodeError) as e:
        raise InputError(f"{path}: unreadable CSV: {e}") from None
    except OSError as e:
        raise InputError(f"cannot read {path}: {e.strerror or e}") from None

    name = _resolve_column(frame, column)
    raw = frame[name]
    numbers = pd.to_numeric(raw, errors="coerce")
    bad = numbers.isna() | ~np.isfinite(numbers.to_numpy(dtype=np.float64, na_value=np.nan))
    if bad.any():
        row = int(np.flatnonzero(bad.to_numpy())[0])
        # +2: one for the header, one for 1-based numbering
        raise InputError(f"{path}:{row + 2}: not a number in column {name!r}: {raw.iloc[row]!r}")
    return numbers.to_numpy(dtype=np.float64)


def load_dataset(
    path: Union[str, Path],
    column: Optional[Union[str, int]] = None,
    csv: bool = False,
) -> InputDataset:
    """Parse an observation file into a Sample"""
    path = Path(path)
    if not path.is_file():
        raise InputError(f"File not found: {path}")

    values = _read_csv(path, column) if csv or column is not None else _read_plain(path)
    if values.size < MIN_VALUES:
        raise InsufficientDataError(f"{path}: need at least {MIN_VALUES} values, found {values.size}")

    logger.info(f"Loaded {values.size} values from {path}")
    sample = Sample(values=values, source=f"file:{path}")
    return InputDataset(path=path, column=column, sample=sample)


def write_text(path: Union[str, Path], content: str) -> Path:
    """Write a result file, creating parent directories"""
    target = Path(path)
    try:
        target.parent.mkdir(parents=True, exist_ok=True)
        target.write_text(content, encoding="utf-8")
    except OSError as e:
        raise InputError(f"cannot write {target}: {e}") from None
    return target


def format_values(values: np.ndarray) -> str:
    """One round-trippable value per line"""
    return "".join(f"{float(v)!r}\n" for v in values)
