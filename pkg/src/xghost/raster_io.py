"""Raster and profile I/O.

Interchange raster format "GIR1": one ASCII header line

    GIR1 <nx> <ny> <pitch_x_m> <pitch_y_m>\\n

followed by nx*ny little-endian 32-bit floats, row-major with x fastest.
Values are stored internally as 64-bit floats; writing converts with
round-to-nearest, so write -> read -> write is byte-identical.

Also exported: 16-bit binary PGM previews (min-max scaled, scaling recorded
in a header comment) and CSV for line profiles.
"""

from __future__ import annotations

import numpy as np

from .errors import RasterFormatError
from .fields import Grid2D, ScalarField2D

_MAGIC = b"GIR1"


def write_raster(field: ScalarField2D, path) -> None:
    g = field.grid
    header = f"GIR1 {g.nx} {g.ny} {g.pitch_x!r} {g.pitch_y!r}\n"
    payload = field.values.astype("<f4").tobytes(order="C")
    with open(path, "wb") as fh:
        fh.write(header.encode("ascii"))
        fh.write(payload)


def read_raster(path) -> ScalarField2D:
    with open(path, "rb") as fh:
        header = fh.readline()
        payload = fh.read()
    parts = header.split()
    if len(parts) != 5 or parts[0] != _MAGIC:
        raise RasterFormatError(f"{path}: malformed GIR1 header {header!r}")
    try:
        nx, ny = int(parts[1]), int(parts[2])
        pitch_x, pitch_y = float(parts[3]), float(parts[4])
    except ValueError as exc:
        raise RasterFormatError(f"{path}: unparsable header fields") from exc
    expected = nx * ny * 4
    if len(payload) != expected:
        raise RasterFormatError(
            f"{path}: payload is {len(payload)} bytes, expected {expected}")
    values = np.frombuffer(payload, dtype="<f4").reshape(ny, nx).astype(np.float64)
    return ScalarField2D(Grid2D(nx, ny, pitch_x, pitch_y), values)


def write_pgm(field: ScalarField2D, path) -> None:
    """16-bit binary PGM preview, min-max scaled.

    The applied scaling is recorded in a comment line `# min=<m> max=<M>` so
    the physical values remain recoverable.  A constant field maps to 0.
    """
    v = field.values
    lo, hi = float(v.min()), float(v.max())
    if hi > lo:
        scaled = np.round((v - lo) / (hi - lo) * 65535.0)
    else:
        scaled = np.zeros_like(v)
    data = scaled.astype(">u2").tobytes(order="C")
    header = f"P5\n# min={lo!r} max={hi!r}\n{field.grid.nx} {field.grid.ny}\n65535\n"
    with open(path, "wb") as fh:
        fh.write(header.encode("ascii"))
        fh.write(data)


def write_profile_csv(positions: np.ndarray, values: np.ndarray, path,
                      value_label: str = "value") -> None:
    with open(path, "w", encoding="ascii") as fh:
        fh.write(f"position_m,{value_label}\n")
        for p, v in zip(positions, values):
            fh.write(f"{float(p)!r},{float(v)!r}\n")


def read_profile_csv(path):
    positions, values = [], []
    with open(path, "r", encoding="ascii") as fh:
        next(fh)  # header
        for line in fh:
            p, v = line.strip().split(",")
            positions.append(float(p))
            values.append(float(v))
    return np.array(positions), np.array(values)


def write_report(metrics: dict, path) -> None:
    """Flat key=value report, insertion order preserved."""
    with open(path, "w", encoding="ascii") as fh:
        for key, val in metrics.items():
            if isinstance(val, float):
                fh.write(f"{key}={val!r}\n")
            else:
                fh.write(f"{key}={val}\n")


def read_report(path) -> dict:
    out = {}
    with open(path, "r", encoding="ascii") as fh:
        for line in fh:
            line = line.strip()
            if not line:
                continue
            key, _, val = line.partition("=")
            out[key] = val
    return out
