"""
CSV file formats used by the command line.

Point clouds have no header and one point per row with d comma-separated
decimal fields. Label, score and identity files hold one value per row.
Rows and columns in error messages are 1-based.
"""

import csv
import math
from pathlib import Path
from typing import Iterable, List, Sequence, Tuple, Union

import numpy as np

from .errors import CloudFormatError
from .polynomial import PointCloud
from .trace import TrainTrace

PathLike = Union[str, Path]


def _format_float(value: float) -> str:
    return repr(float(value))


def _read_rows(path: PathLike) -> List[List[str]]:
    with open(path, "r", encoding="utf-8", newline="") as f:
        rows = [row for row in csv.reader(f)]
    # A trailing blank line is not a row
    while rows and not any(cell.strip() for cell in rows[-1]):
        rows.pop()
    return rows


def _parse_decimal(cell: str, row: int, column: int) -> float:
    try:
        value = float(cell)
    except ValueError:
        raise CloudFormatError(f"'{cell.strip()}' is not a decimal number", row, column)
    if not math.isfinite(value):
        raise CloudFormatError(f"'{cell.strip()}' is not a finite number", row, column)
    return value


def read_cloud(path: PathLike) -> PointCloud:
    rows = _read_rows(path)
    if not rows:
        raise CloudFormatError(f"Point cloud file {path} is empty")
    dim = len(rows[0])
    points = np.empty((len(rows), dim))
    for r, row in enumerate(rows, start=1):
        if len(row) != dim:
            raise CloudFormatError(f"Expected {dim} fields, got {len(row)}", r)
        points[r - 1] = [_parse_decimal(cell, r, c) for c, cell in enumerate(row, start=1)]
    return PointCloud(points)


def write_cloud(path: PathLike, cloud: Union[PointCloud, np.ndarray]):
    points = cloud.points if isinstance(cloud, PointCloud) else np.atleast_2d(cloud)
    with open(path, "w", encoding="utf-8", newline="") as f:
        writer = csv.writer(f, lineterminator="\n")
        writer.writerows([_format_float(x) for x in point] for point in points)


def _read_column(path: PathLike, what: str) -> List[Tuple[int, str]]:
    rows = _read_rows(path)
    if not rows:
        raise CloudFormatError(f"{what.capitalize()} file {path} is empty")
    for r, row in enumerate(rows, start=1):
        if len(row) != 1:
            raise CloudFormatError(f"Expected a single {what} per row, got {len(row)} fields", r)
    return [(r, row[0].strip()) for r, row in enumerate(rows, start=1)]


def read_labels(path: PathLike) -> np.ndarray:
    labels = []
    for r, cell in _read_column(path, "label"):
        if cell not in ("0", "1"):
            raise CloudFormatError(f"Label must be 0 or 1, got '{cell}'", r, 1)
        labels.append(int(cell))
    return np.array(labels, dtype=np.int64)


def write_labels(path: PathLike, labels: Iterable[int]):
    with open(path, "w", encoding="utf-8") as f:
        f.writelines(f"{int(label)}\n" for label in labels)


def read_scores(path: PathLike) -> np.ndarray:
    return np.array([_parse_decimal(cell, r, 1) for r, cell in _read_column(path, "score")])


def write_scores(path: PathLike, scores: Iterable[float]):
    with open(path, "w", encoding="utf-8") as f:
        f.writelines(f"{_format_float(score)}\n" for score in scores)


def read_identities(path: PathLike) -> np.ndarray:
    return np.array([cell for _, cell in _read_column(path, "identity")])


def write_trace(path: PathLike, trace: TrainTrace):
    with open(path, "w", encoding="utf-8", newline="") as f:
        writer = csv.writer(f, lineterminator="\n")
        writer.writerow(TrainTrace.COLUMNS)
        for epoch, *values in trace.to_rows():
            writer.writerow([epoch] + [_format_float(v) for v in values])


def read_trace(path: PathLike) -> TrainTrace:
    rows = _read_rows(path)
    if not rows or tuple(cell.strip() for cell in rows[0]) != TrainTrace.COLUMNS:
        raise CloudFormatError(f"Trace file must start with the header {','.join(TrainTrace.COLUMNS)}", 1)
    trace = TrainTrace()
    for r, row in enumerate(rows[1:], start=2):
        if len(row) != len(TrainTrace.COLUMNS):
            raise CloudFormatError(f"Expected {len(TrainTrace.COLUMNS)} fields, got {len(row)}", r)
        values = [_parse_decimal(cell, r, c) for c, cell in enumerate(row, start=1)]
        trace.add_epoch(int(values[0]), *values[1:])
    return trace


def write_table(path: PathLike, header: Sequence[str], rows: Iterable[Sequence]):
    """Generic CSV table with a header row; floats use their shortest exact form"""
    with open(path, "w", encoding="utf-8", newline="") as f:
        writer = csv.writer(f, lineterminator="\n")
        writer.writerow(header)
        for row in rows:
            writer.writerow([_format_float(v) if isinstance(v, float) else v for v in row])
