"""
Readers for the simulator's CSV outputs.

Each reader checks the header row against the exact schema written by the
simulate command and rejects anything else, so a renderer pointed at the
wrong file kind fails with a clear message instead of a silent mis-plot.
"""

import csv
from dataclasses import dataclass

import numpy as np


class SchemaError(ValueError):
    """Input file does not match the expected column schema."""


MAP_HEADERS = {
    ("j_I", "j_II", "value"): "cavity",
    ("k_I", "k_II", "value"): "normal-mode",
}
SERIES_X_COLUMNS = ("axis_value", "t")
SPECTRUM_HEADER = ("omega", "S", "T", "E_N")

# series index 0 carries the reservoir reference (sweeps) or the relative
# distance to the steady state (transients), never a cavity pair
REFERENCE_INDEX = 0


def _read_rows(path) -> tuple[tuple[str, ...], list[list[str]]]:
    try:
        with open(path, newline="", encoding="utf-8") as fh:
            rows = list(csv.reader(fh))
    except OSError as exc:
        raise SchemaError(f"{path}: {exc.strerror or exc}") from exc
    if not rows:
        raise SchemaError(f"{path}: empty file")
    return tuple(rows[0]), rows[1:]


def _float_cell(row: list[str], col: int, path, line: int) -> float:
    try:
        return float(row[col])
    except (ValueError, IndexError) as exc:
        raise SchemaError(f"{path}:{line}: bad numeric cell in column {col}") from exc


@dataclass(frozen=True)
class MapData:
    """Square map of normalized pair values plus its index basis."""

    values: np.ndarray
    basis: str  # "cavity" or "normal-mode"


def read_map(path) -> MapData:
    """Read a long-form (index, index, value) map back into a square matrix."""
    header, rows = _read_rows(path)
    if header not in MAP_HEADERS:
        raise SchemaError(f"{path}: header {list(header)} is not a pair-map schema")
    if not rows:
        raise SchemaError(f"{path}: map has no data rows")
    triples = []
    for line, row in enumerate(rows, start=2):
        if len(row) != 3:
            raise SchemaError(f"{path}:{line}: expected 3 columns, got {len(row)}")
        a = _float_cell(row, 0, path, line)
        b = _float_cell(row, 1, path, line)
        if a != int(a) or b != int(b) or a < 1 or b < 1:
            raise SchemaError(f"{path}:{line}: map indices must be positive integers")
        triples.append((int(a), int(b), _float_cell(row, 2, path, line)))
    n = max(max(a, b) for a, b, _ in triples)
    if len(triples) != n * n:
        raise SchemaError(f"{path}: expected {n * n} rows for a {n}x{n} map, got {len(triples)}")
    values = np.full((n, n), np.nan)
    for a, b, v in triples:
        values[a - 1, b - 1] = v
    if np.any(np.isnan(values)):
        raise SchemaError(f"{path}: map rows do not cover every index pair")
    return MapData(values=values, basis=MAP_HEADERS[header])


@dataclass(frozen=True)
class SeriesData:
    """Per-index curves over a shared x grid; index 0 is the reference row."""

    x_name: str
    x: np.ndarray
    indices: tuple[int, ...]
    curves: np.ndarray  # shape (len(indices), len(x))


def read_series(path) -> SeriesData:
    """Read a long-form (x, series_index, value) file, sweep or transient."""
    header, rows = _read_rows(path)
    if len(header) != 3 or header[0] not in SERIES_X_COLUMNS or header[1:] != ("pair_index", "value"):
        raise SchemaError(f"{path}: header {list(header)} is not a sweep or transient schema")
    if not rows:
        raise SchemaError(f"{path}: series has no data rows")
    points: dict[float, dict[int, float]] = {}
    for line, row in enumerate(rows, start=2):
        if len(row) != 3:
            raise SchemaError(f"{path}:{line}: expected 3 columns, got {len(row)}")
        x = _float_cell(row, 0, path, line)
        idx = _float_cell(row, 1, path, line)
        if idx != int(idx) or idx < 0:
            raise SchemaError(f"{path}:{line}: series index must be a nonnegative integer")
        points.setdefault(x, {})[int(idx)] = _float_cell(row, 2, path, line)
    x_values = np.array(sorted(points))
    indices = tuple(sorted(points[x_values[0]]))
    for x in x_values:
        if tuple(sorted(points[x])) != indices:
            raise SchemaError(f"{path}: x = {x} does not carry the same series indices")
    curves = np.array([[points[x][i] for x in x_values] for i in indices])
    return SeriesData(x_name=header[0], x=x_values, indices=indices, curves=curves)


@dataclass(frozen=True)
class SpectrumData:
    """Squeezing, antisqueezing, and entanglement over a frequency grid."""

    omega: np.ndarray
    s: np.ndarray
    t: np.ndarray
    en: np.ndarray


def read_spectrum(path) -> SpectrumData:
    header, rows = _read_rows(path)
    if header != SPECTRUM_HEADER:
        raise SchemaError(f"{path}: header {list(header)} is not a spectrum schema")
    if not rows:
        raise SchemaError(f"{path}: spectrum has no data rows")
    data = np.empty((len(rows), 4))
    for line, row in enumerate(rows, start=2):
        if len(row) != 4:
            raise SchemaError(f"{path}:{line}: expected 4 columns, got {len(row)}")
        data[line - 2] = [_float_cell(row, col, path, line) for col in range(4)]
    return SpectrumData(omega=data[:, 0], s=data[:, 1], t=data[:, 2], en=data[:, 3])
