"""Dataset reading and writing in the published CSV layout.

An experiment named ``foo`` inside dataset directory ``d`` is stored as
``d/foo.csv`` with header ``timestamp,intervention,<variables...>`` in
registry column order. Camera frames are written as binary PPM (P6) files
under ``d/images_foo/<row>.ppm`` and referenced from the ``im`` column by
that relative path.

Floats are serialized with ``repr``, which in Python 3 produces the shortest
string that round-trips to the exact same IEEE-754 double; the reader uses
pandas' round-trip float parser, so write/read cycles are bit-exact.
"""

from __future__ import annotations

import os
from typing import Iterable, Iterator

import numpy as np
import pandas as pd

from .engine import MeasurementRow, PID_COLUMNS, RowBlock
from .variables import LT_VARIABLES, WT_VARIABLES


def _format_value(x) -> str:
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    return repr(float(x))


def _format_column(values: np.ndarray) -> list[str]:
    if values.dtype.kind in "iu":
        return [str(x) for x in values.tolist()]
    return [repr(x) for x in values.tolist()]


def write_ppm(path: str, raster: np.ndarray) -> None:
    raster = np.asarray(raster)
    if raster.ndim != 3 or raster.shape[2] != 3 or raster.dtype != np.uint8:
        raise ValueError("raster must be a HxWx3 uint8 array")
    h, w = raster.shape[:2]
    with open(path, "wb") as f:
        f.write(b"P6\n%d %d\n255\n" % (w, h))
        f.write(raster.tobytes())


def read_ppm(path: str) -> np.ndarray:
    with open(path, "rb") as f:
        data = f.read()
    if not data.startswith(b"P6"):
        raise ValueError(f"{path}: not a binary PPM (P6) file")
    fields = []
    pos = 2
    while len(fields) < 3:
        while pos < len(data) and data[pos : pos + 1].isspace():
            pos += 1
        if data[pos : pos + 1] == b"#":
            while pos < len(data) and data[pos : pos + 1] != b"\n":
                pos += 1
            continue
        start = pos
        while pos < len(data) and not data[pos : pos + 1].isspace():
            pos += 1
        fields.append(int(data[start:pos]))
    pos += 1  # single whitespace after maxval
    w, h, maxval = fields
    if maxval != 255:
        raise ValueError(f"{path}: unsupported maxval {maxval}")
    pixels = np.frombuffer(data, dtype=np.uint8, offset=pos, count=w * h * 3)
    return pixels.reshape(h, w, 3).copy()


def _as_blocks(rows_or_blocks) -> Iterator[RowBlock]:
    """Accept either RowBlock iterables or MeasurementRow iterables."""
    pending: list[MeasurementRow] = []
    for item in rows_or_blocks:
        if isinstance(item, RowBlock):
            yield item
            continue
        if not isinstance(item, MeasurementRow):
            raise TypeError(f"expected RowBlock or MeasurementRow, got {type(item).__name__}")
        pending.append(item)
        if len(pending) >= 8192:
            yield _rows_to_block(pending)
            pending = []
    if pending:
        yield _rows_to_block(pending)


def _rows_to_block(rows: list[MeasurementRow]) -> RowBlock:
    columns = list(rows[0].keys())
    data = {}
    for c in columns:
        vals = [r[c] for r in rows]
        if isinstance(vals[0], np.ndarray):
            data[c] = vals
        else:
            data[c] = np.asarray(vals)
    return RowBlock(
        columns,
        np.array([r.timestamp for r in rows]),
        np.array([r.intervention for r in rows], dtype=np.int64),
        data,
    )


def write_experiment(rows_or_blocks: Iterable, directory: str, name: str) -> int:
    """Write a measurement stream as ``<directory>/<name>.csv``.

    Camera frames, when present, land in ``<directory>/images_<name>/``.
    Returns the number of rows written; raises ValueError on an empty stream.
    """
    os.makedirs(directory, exist_ok=True)
    csv_path = os.path.join(directory, f"{name}.csv")
    images_dir = os.path.join(directory, f"images_{name}")
    images_rel = f"images_{name}"
    n_rows = 0
    header_written = False
    with open(csv_path, "w", encoding="utf-8", newline="\n") as f:
        for block in _as_blocks(rows_or_blocks):
            if not header_written:
                f.write(",".join(["timestamp", "intervention"] + block.columns) + "\n")
                header_written = True
            cols = [
                _format_column(np.asarray(block.timestamps)),
                [str(x) for x in np.asarray(block.interventions).tolist()],
            ]
            for c in block.columns:
                if c == "im":
                    os.makedirs(images_dir, exist_ok=True)
                    paths = []
                    for i in range(block.n):
                        rel = f"{images_rel}/{n_rows + i}.ppm"
                        write_ppm(os.path.join(directory, rel), block.data["im"][i])
                        paths.append(rel)
                    cols.append(paths)
                else:
                    cols.append(_format_column(np.asarray(block.data[c])))
            f.write("\n".join(",".join(row) for row in zip(*cols)))
            f.write("\n")
            n_rows += block.n
    if n_rows == 0:
        os.remove(csv_path)
        raise ValueError(f"experiment {name!r} produced no measurement rows")
    return n_rows


def _dtype_map() -> dict[str, object]:
    m: dict[str, object] = {"timestamp": np.float64, "intervention": np.int64}
    for var in WT_VARIABLES + LT_VARIABLES:
        m[var.id] = {"float": np.float64, "int": np.int64, "str": str}[var.dtype]
    for c in PID_COLUMNS:
        m[c] = np.float64
    return m


_DTYPES = None


def read_experiment(directory: str, name: str) -> pd.DataFrame:
    """Load an experiment CSV with bit-exact floats and registry dtypes.

    Columns are matched by name, so their order in the file does not matter;
    unknown columns are kept with pandas-inferred dtypes.
    """
    global _DTYPES
    if _DTYPES is None:
        _DTYPES = _dtype_map()
    path = os.path.join(directory, f"{name}.csv")
    with open(path, "r", encoding="utf-8") as f:
        header = f.readline().strip("\n").split(",")
    dtypes = {c: _DTYPES[c] for c in header if c in _DTYPES}
    return pd.read_csv(path, dtype=dtypes, float_precision="round_trip")


def read_image(directory: str, relative_path: str) -> np.ndarray:
    return read_ppm(os.path.join(directory, relative_path))


def experiment_names(directory: str) -> list[str]:
    """Names of all experiments (CSV stems) in a dataset directory, sorted."""
    names = [
        entry[:-4]
        for entry in os.listdir(directory)
        if entry.endswith(".csv") and os.path.isfile(os.path.join(directory, entry))
    ]
    return sorted(names)
