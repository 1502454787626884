"""Uniform-grid 2D scalar fields with physical pixel pitch.

Values are stored row-major with x fastest: ``values[iy, ix]``, shape
``(ny, nx)``.  One fixed convention prevents silent transposes across modules.
Fields are immutable after construction; all operations here are pure.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field

import numpy as np

from .errors import BoundsError, GridMismatchError


@dataclass(frozen=True)
class Grid2D:
    """Pixel counts and physical pitch (meters/pixel) of a raster."""

    nx: int
    ny: int
    pitch_x: float
    pitch_y: float

    def __post_init__(self):
        if self.nx < 1 or self.ny < 1:
            raise ValueError(f"grid must have nx, ny >= 1, got {self.nx}x{self.ny}")
        if not (self.pitch_x > 0 and self.pitch_y > 0):
            raise ValueError("grid pitch must be positive")

    @property
    def shape(self) -> tuple[int, int]:
        return (self.ny, self.nx)

    @property
    def pixel_area(self) -> float:
        return self.pitch_x * self.pitch_y

    @property
    def extent_x(self) -> float:
        return self.nx * self.pitch_x

    @property
    def extent_y(self) -> float:
        return self.ny * self.pitch_y

    def x_positions(self) -> np.ndarray:
        return np.arange(self.nx) * self.pitch_x

    def y_positions(self) -> np.ndarray:
        return np.arange(self.ny) * self.pitch_y


@dataclass(frozen=True)
class ScalarField2D:
    """Finite real values on a Grid2D.

    `meta` carries advisory flags attached by producers (e.g. sampling guard
    results); it does not participate in equality.
    """

    grid: Grid2D
    values: np.ndarray
    meta: dict = dc_field(default_factory=dict, compare=False)

    def __post_init__(self):
        v = np.asarray(self.values, dtype=np.float64)
        if v.shape != (self.grid.ny, self.grid.nx):
            raise ValueError(
                f"values shape {v.shape} does not match grid {self.grid.shape}")
        if not np.all(np.isfinite(v)):
            raise ValueError("field values must be finite (no NaN/Inf)")
        v = np.ascontiguousarray(v)
        v.setflags(write=False)
        object.__setattr__(self, "values", v)

    def with_values(self, values: np.ndarray, **meta) -> "ScalarField2D":
        """A new field on the same grid."""
        return ScalarField2D(self.grid, values, dict(meta))

    def __eq__(self, other) -> bool:
        if not isinstance(other, ScalarField2D):
            return NotImplemented
        return self.grid == other.grid and np.array_equal(self.values, other.values)


@dataclass(frozen=True)
class Roi:
    """Rectangular pixel region: x indices [x0, x0+width), y indices [y0, y0+height)."""

    x0: int
    y0: int
    width: int
    height: int

    def __post_init__(self):
        if self.width < 1 or self.height < 1:
            raise ValueError("roi width and height must be >= 1")
        if self.x0 < 0 or self.y0 < 0:
            raise ValueError("roi origin must be non-negative")

    def validate(self, grid: Grid2D) -> None:
        if self.x0 + self.width > grid.nx or self.y0 + self.height > grid.ny:
            raise BoundsError(
                f"roi {self} exceeds grid {grid.nx}x{grid.ny}")

    def slices(self) -> tuple[slice, slice]:
        return (slice(self.y0, self.y0 + self.height),
                slice(self.x0, self.x0 + self.width))

    @property
    def pixel_count(self) -> int:
        return self.width * self.height


def full_roi(grid: Grid2D) -> Roi:
    return Roi(0, 0, grid.nx, grid.ny)


def constant_field(grid: Grid2D, value: float = 1.0) -> ScalarField2D:
    return ScalarField2D(grid, np.full(grid.shape, float(value)))


def check_same_grid(a: ScalarField2D, b: ScalarField2D) -> None:
    if a.grid != b.grid:
        raise GridMismatchError(f"grids differ: {a.grid} vs {b.grid}")


def mean_over(field: ScalarField2D, roi: Roi) -> float:
    """Arithmetic mean of the values inside `roi`."""
    roi.validate(field.grid)
    return float(field.values[roi.slices()].mean())


def line_profile(field: ScalarField2D, axis: str, index: int):
    """Row or column of a field with physical positions.

    axis="horizontal" returns row `index` against x positions;
    axis="vertical" returns column `index` against y positions.
    Returns (positions_m, values) as two 1D arrays.
    """
    g = field.grid
    if axis == "horizontal":
        if not 0 <= index < g.ny:
            raise BoundsError(f"row index {index} outside grid of {g.ny} rows")
        return g.x_positions(), np.array(field.values[index, :])
    if axis == "vertical":
        if not 0 <= index < g.nx:
            raise BoundsError(f"column index {index} outside grid of {g.nx} columns")
        return g.y_positions(), np.array(field.values[:, index])
    raise ValueError(f"axis must be 'horizontal' or 'vertical', got {axis!r}")
