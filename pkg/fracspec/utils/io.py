# fracspec/utils/io.py

import json
from pathlib import Path
from typing import Iterable, Optional, Sequence

import numpy as np
import pandas as pd


def format_number(value: float) -> str:
    """Shortest decimal that reads back to the same double, always with '.'."""
    return repr(float(value))


def _prepare(path: str | Path) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    return path


def write_csv(path: str | Path, header: Sequence[str], rows: Iterable[Sequence[float]]) -> Path:
    """Write a numeric CSV with a header line; integer columns stay integers."""
    path = _prepare(path)
    frame = pd.DataFrame(list(rows), columns=list(header))
    frame.to_csv(path, index=False, na_rep="nan", lineterminator="\n")
    return path


def write_fields(path: str | Path, x: np.ndarray, u: np.ndarray, V: np.ndarray) -> Path:
    """Fields CSV with header "x,u,V", one row per cell."""
    frame = pd.DataFrame({"x": np.asarray(x, dtype=float), "u": np.asarray(u, dtype=float), "V": np.asarray(V, dtype=float)})
    path = _prepare(path)
    frame.to_csv(path, index=False, na_rep="nan", lineterminator="\n")
    return path


def write_matrix(path: str | Path, matrix: np.ndarray) -> Path:
    """Headerless dense matrix dump, one row per line."""
    path = _prepare(path)
    pd.DataFrame(np.atleast_2d(matrix)).to_csv(path, header=False, index=False, lineterminator="\n")
    return path


def _is_number(cell) -> bool:
    try:
        float(cell)
    except (TypeError, ValueError):
        return False
    return True


def read_table(path: str | Path) -> tuple[Optional[list[str]], np.ndarray]:
    """
    Read a numeric CSV file.

    A first row that does not parse as numbers is taken as the header. Cells are
    converted with Python's float parser, so written values read back exactly.

    Raises:
        ValueError: If the file is empty or a data cell is not numeric.

    Returns:
        tuple: (header or None, 2-D array of the data rows)
    """
    frame = pd.read_csv(path, header=None, dtype=str, skipinitialspace=True)
    header = None
    if not all(_is_number(cell) for cell in frame.iloc[0]):
        header = [str(cell).strip() for cell in frame.iloc[0]]
        frame = frame.iloc[1:]
    return header, frame.to_numpy(dtype=float)


def read_column(path: str | Path, column: int | str = 0) -> np.ndarray:
    """Read one numeric column, selected by index or by header name."""
    header, data = read_table(path)
    if isinstance(column, str):
        if header is None or column not in header:
            raise ValueError(f"column '{column}' not found")
        column = header.index(column)
    if data.ndim != 2 or not 0 <= column < data.shape[1]:
        raise IndexError(f"column {column} out of range")
    return data[:, column]


def write_json(path: str | Path, payload: dict) -> Path:
    path = _prepare(path)
    path.write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n", encoding="utf-8")
    return path
