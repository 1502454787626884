"""Amplitude masks (1D gratings, binary speckles) and scan schedules.

Masks are thin amplitude screens: each realization is a transmission raster
in [0, 1].  Grating bars are anti-aliased by the exact area fraction a bar
covers within each pixel, which removes grid-phase artifacts from bucket
signals.  A scan schedule enumerates (pattern, offset) pairs; the sequence of
realized patterns is the measurement basis.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import ndimage

from . import rng
from .errors import UnderResolvedError
from .fields import Grid2D, ScalarField2D

VERTICAL_LINES = "vertical_lines"      # bars run along y, transmission varies with x
HORIZONTAL_LINES = "horizontal_lines"  # bars run along x, transmission varies with y


@dataclass(frozen=True)
class GratingSpec:
    """Square-wave amplitude grating.

    duty is the fraction of each period at the low transmission; t_low/t_high
    are the bar and substrate transmissions.
    """

    lines_per_mm: float
    duty: float = 0.5
    t_low: float = 0.02
    t_high: float = 0.96
    orientation: str = VERTICAL_LINES

    def __post_init__(self):
        if self.lines_per_mm <= 0:
            raise ValueError("lines_per_mm must be positive")
        if not 0.0 <= self.duty <= 1.0:
            raise ValueError("duty must lie in [0, 1]")
        if not 0.0 <= self.t_low < self.t_high <= 1.0:
            raise ValueError("need 0 <= t_low < t_high <= 1")
        if self.orientation not in (VERTICAL_LINES, HORIZONTAL_LINES):
            raise ValueError(f"unknown orientation {self.orientation!r}")

    @property
    def period(self) -> float:
        """Spatial period in meters."""
        return 1e-3 / self.lines_per_mm


@dataclass(frozen=True)
class MaskRealization:
    """One transmission pattern at one scan offset."""

    pattern: ScalarField2D
    scan_offset: float = 0.0
    pattern_id: int = 0

    def __post_init__(self):
        v = self.pattern.values
        if v.min() < 0.0 or v.max() > 1.0:
            raise ValueError("mask transmissions must lie in [0, 1]")


@dataclass(frozen=True)
class ScanSchedule:
    """Ordered (pattern_id, scan_offset_m) pairs plus the scan step."""

    entries: tuple
    step: float = 0.0

    def __post_init__(self):
        if len(self.entries) < 1:
            raise ValueError("schedule must contain at least one entry")
        object.__setattr__(self, "entries",
                           tuple((int(p), float(o)) for p, o in self.entries))

    def __len__(self) -> int:
        return len(self.entries)


def _bar_fraction(edges: np.ndarray, period: float, bar: float) -> np.ndarray:
    """Fraction of each [edges[i], edges[i+1]) interval covered by bars.

    Bars occupy [n*period, n*period + bar) for integer n.
    """
    n = np.floor(edges / period)
    cum = n * bar + np.minimum(edges - n * period, bar)
    return np.diff(cum) / np.diff(edges)


def grating_pattern(spec: GratingSpec, grid: Grid2D, offset: float = 0.0,
                    pattern_id: int = 0) -> MaskRealization:
    """Square-wave transmission raster, area-weighted at bar edges.

    The pattern is shifted by `offset` along the modulation axis; an offset of
    one full period reproduces the unshifted pattern bit-exactly.
    """
    period = spec.period
    pitch = grid.pitch_x if spec.orientation == VERTICAL_LINES else grid.pitch_y
    npix = grid.nx if spec.orientation == VERTICAL_LINES else grid.ny
    if period < 2.0 * pitch:
        raise UnderResolvedError(
            f"grating period {period:.3e} m under-resolved by pitch {pitch:.3e} m")
    # exact remainder keeps offset -> offset + period bit-identical
    red = math.fmod(offset, period)
    if red < 0.0:
        red += period
    edges = np.arange(npix + 1) * pitch - red
    frac = _bar_fraction(edges, period, spec.duty * period)
    profile = spec.t_high + (spec.t_low - spec.t_high) * frac
    if spec.orientation == VERTICAL_LINES:
        values = np.broadcast_to(profile[None, :], grid.shape).copy()
    else:
        values = np.broadcast_to(profile[:, None], grid.shape).copy()
    return MaskRealization(ScalarField2D(grid, values), scan_offset=float(offset),
                           pattern_id=pattern_id)


def grating_specs(n_max: int, base_frequency: float = 1.0,
                  template: GratingSpec | None = None) -> list[GratingSpec]:
    """Specs with k * base_frequency lines/mm for k = 1..n_max."""
    if n_max < 1:
        raise ValueError("n_max must be >= 1")
    tpl = template or GratingSpec(lines_per_mm=base_frequency)
    return [GratingSpec(lines_per_mm=k * base_frequency, duty=tpl.duty,
                        t_low=tpl.t_low, t_high=tpl.t_high,
                        orientation=tpl.orientation)
            for k in range(1, n_max + 1)]


def grating_set(n_max: int, base_frequency: float, template: GratingSpec,
                grid: Grid2D) -> list[MaskRealization]:
    """Realized patterns (offset 0) with 1..n_max times the base frequency."""
    return [grating_pattern(spec, grid, offset=0.0, pattern_id=k)
            for k, spec in enumerate(grating_specs(n_max, base_frequency, template))]


def smallest_line_width(n_max: int, base_frequency: float, duty: float = 0.5) -> float:
    """Width of the finest grating's absorbing line: duty/(n_max*base_frequency) mm."""
    return duty * 1e-3 / (n_max * base_frequency)


def speckle_pattern(seed: int, speckle_size: float, t_low: float, t_high: float,
                    grid: Grid2D, pattern_id: int = 0) -> MaskRealization:
    """Binary random pattern with correlation length ~ speckle_size.

    Counter-based white noise is smoothed (periodic boundary) and thresholded
    at its median, so the two levels each cover half the pixels.  Identical
    seeds give identical patterns.
    """
    if speckle_size < min(grid.pitch_x, grid.pitch_y):
        raise ValueError("speckle size must be at least one pixel")
    if t_low > t_high:
        raise ValueError("t_low must not exceed t_high")
    noise = rng.uniform_grid(seed, grid.ny, grid.nx)
    sig = (0.5 * speckle_size / grid.pitch_y, 0.5 * speckle_size / grid.pitch_x)
    smooth = ndimage.gaussian_filter(noise, sigma=sig, mode="wrap")
    values = np.where(smooth > np.median(smooth), t_high, t_low)
    return MaskRealization(ScalarField2D(grid, values), scan_offset=0.0,
                           pattern_id=pattern_id)


def speckle_set(seed: int, count: int, speckle_size: float, t_low: float,
                t_high: float, grid: Grid2D) -> list[MaskRealization]:
    """`count` independent speckle realizations with per-index derived seeds."""
    return [speckle_pattern(rng.derive(seed, j), speckle_size, t_low, t_high,
                            grid, pattern_id=j)
            for j in range(count)]


def make_schedule(patterns, step: float, offsets_per_pattern: int = 1) -> ScanSchedule:
    """Cross product of pattern ids and scan offsets {0, step, 2*step, ...}.

    `patterns` is a pattern count or an explicit sequence of pattern ids;
    total length is patterns * offsets_per_pattern.
    """
    if step < 0:
        raise ValueError("step must be >= 0")
    if offsets_per_pattern < 1:
        raise ValueError("offsets_per_pattern must be >= 1")
    if offsets_per_pattern > 1 and step == 0:
        raise ValueError("multiple offsets per pattern require step > 0")
    ids = range(patterns) if isinstance(patterns, int) else [int(p) for p in patterns]
    entries = [(pid, k * step) for pid in ids for k in range(offsets_per_pattern)]
    return ScanSchedule(entries=tuple(entries), step=float(step))


def realize_schedule(specs: list[GratingSpec], schedule: ScanSchedule,
                     grid: Grid2D) -> list[MaskRealization]:
    """One grating realization per schedule entry."""
    out = []
    for pid, offset in schedule.entries:
        if not 0 <= pid < len(specs):
            raise ValueError(f"schedule references unknown pattern id {pid}")
        out.append(grating_pattern(specs[pid], grid, offset=offset, pattern_id=pid))
    return out


def shift_realization(mask: MaskRealization, offset: float,
                      axis: str = "x") -> MaskRealization:
    """Periodic integer-pixel shift of an existing pattern (used to scan
    speckle masks; the offset is rounded to whole pixels)."""
    g = mask.pattern.grid
    pitch = g.pitch_x if axis == "x" else g.pitch_y
    shift_px = int(round(offset / pitch))
    rolled = np.roll(mask.pattern.values, shift_px, axis=1 if axis == "x" else 0)
    return MaskRealization(ScalarField2D(g, rolled),
                           scan_offset=float(offset), pattern_id=mask.pattern_id)
