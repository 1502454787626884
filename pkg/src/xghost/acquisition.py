"""Forward models for both acquisition orderings and bucket/mailbox integration.

structured_illumination (mask upstream of sample): each masked illumination
is imaged through the sample with the chosen contrast model and integrated.
The image operator's Laplacian term integrates to zero over a full periodic
grid, so these buckets carry no phase information; the forward model computes
the full image anyway so that the vanishing is a tested outcome.

structured_detection (sample upstream of mask): the sample image at distance
R_S is formed once from the uniform illumination; each mask then multiplies
that image at its plane, followed by mailbox integration.  Propagation between
mask and detector is not modeled: a bucket integrates total transmitted
energy, which free-space propagation preserves (for narrow mailboxes this
neglects cross-talk between neighbors, an accepted approximation).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import GridMismatchError, ScheduleMismatchError
from .fields import Grid2D, Roi, ScalarField2D, check_same_grid
from .mask import MaskRealization, ScanSchedule
from .optics import (SPECTRAL_PERIODIC, PropagationSpec, contact_image,
                     fresnel_oracle, tie_image)
from .phantom import Material, ThicknessMap

STRUCTURED_ILLUMINATION = "structured_illumination"
STRUCTURED_DETECTION = "structured_detection"

MODEL_TIE = "tie"
MODEL_FRESNEL = "fresnel_oracle"
MODEL_ATTENUATION = "attenuation_only"

_ORDERS = (STRUCTURED_ILLUMINATION, STRUCTURED_DETECTION)
_MODELS = (MODEL_TIE, MODEL_FRESNEL, MODEL_ATTENUATION)


@dataclass(frozen=True)
class MailboxGeometry:
    """Stack of line-detector footprints.

    Each mailbox spans `length_m` along x (the grating-resolution axis) and
    `height_m` along y; `count` mailboxes tile contiguously in y starting at
    (origin_x_m, origin_y_m).  Footprints must align to whole pixels.
    """

    length_m: float
    height_m: float
    count: int
    origin_x_m: float = 0.0
    origin_y_m: float = 0.0

    def __post_init__(self):
        if self.length_m <= 0 or self.height_m <= 0:
            raise ValueError("mailbox length and height must be positive")
        if self.count < 1:
            raise ValueError("mailbox count must be >= 1")

    def _px(self, value: float, pitch: float, what: str) -> int:
        px = value / pitch
        rounded = int(round(px))
        if abs(px - rounded) > 1e-6 * max(1.0, abs(px)):
            raise ValueError(f"mailbox {what} {value} is not a whole number of "
                             f"pixels at pitch {pitch}")
        return rounded

    def pixel_rois(self, grid: Grid2D) -> list[Roi]:
        """Per-mailbox pixel regions; raises if any footprint leaves the grid."""
        x0 = self._px(self.origin_x_m, grid.pitch_x, "x origin")
        y0 = self._px(self.origin_y_m, grid.pitch_y, "y origin")
        w = self._px(self.length_m, grid.pitch_x, "length")
        h = self._px(self.height_m, grid.pitch_y, "height")
        rois = []
        for m in range(self.count):
            roi = Roi(x0, y0 + m * h, w, h)
            roi.validate(grid)
            rois.append(roi)
        return rois

    def union_roi(self, grid: Grid2D) -> Roi:
        rois = self.pixel_rois(grid)
        first = rois[0]
        return Roi(first.x0, first.y0, first.width, first.height * self.count)


def full_field_geometry(grid: Grid2D) -> MailboxGeometry:
    """A single mailbox covering the whole grid (pure bucket detector)."""
    return MailboxGeometry(length_m=grid.extent_x, height_m=grid.extent_y, count=1)


@dataclass(frozen=True)
class BucketSeries:
    """N x M detector readings: N realizations, M mailboxes."""

    values: np.ndarray
    schedule: ScanSchedule

    def __post_init__(self):
        v = np.asarray(self.values, dtype=np.float64)
        if v.ndim != 2:
            raise ValueError("bucket series must be a 2D (N, M) array")
        if not np.all(np.isfinite(v)):
            raise ValueError("bucket values must be finite")
        if len(self.schedule) != v.shape[0]:
            raise ScheduleMismatchError(
                f"{v.shape[0]} bucket rows vs {len(self.schedule)} schedule entries")
        v = np.ascontiguousarray(v)
        v.setflags(write=False)
        object.__setattr__(self, "values", v)

    @property
    def n_realizations(self) -> int:
        return self.values.shape[0]

    @property
    def n_mailboxes(self) -> int:
        return self.values.shape[1]


def illuminate(mask: MaskRealization, i_in: ScalarField2D) -> ScalarField2D:
    """Illumination onto the sample: pointwise mask transmission times I_in."""
    check_same_grid(mask.pattern, i_in)
    return ScalarField2D(i_in.grid, mask.pattern.values * i_in.values)


def bucket(field: ScalarField2D, roi: Roi) -> float:
    """Integrated intensity over the region: sum of values times pixel area."""
    roi.validate(field.grid)
    return float(field.values[roi.slices()].sum() * field.grid.pixel_area)


def mailbox_signals(field: ScalarField2D, geom: MailboxGeometry) -> np.ndarray:
    """One bucket value per mailbox footprint."""
    return np.array([bucket(field, roi) for roi in geom.pixel_rois(field.grid)])


def _sample_image(model: str, material: Material, thickness: ThicknessMap,
                  i_in: ScalarField2D, r_s_m: float,
                  laplacian_mode: str) -> ScalarField2D:
    if model == MODEL_ATTENUATION:
        return contact_image(material, thickness, i_in)
    if model == MODEL_TIE:
        return tie_image(material, thickness, i_in,
                         PropagationSpec(r_s_m, laplacian_mode))
    if model == MODEL_FRESNEL:
        return fresnel_oracle(material, thickness, i_in, r_s_m)
    raise ValueError(f"unknown contrast model {model!r}")


def schedule_from_masks(masks: list[MaskRealization], step: float = 0.0) -> ScanSchedule:
    return ScanSchedule(entries=tuple((m.pattern_id, m.scan_offset) for m in masks),
                        step=step)


def forward(order: str, material: Material, thickness: ThicknessMap,
            masks: list[MaskRealization], i_in: ScalarField2D,
            geom: MailboxGeometry, r_s_m: float,
            contrast_model: str = MODEL_TIE,
            laplacian_mode: str = SPECTRAL_PERIODIC,
            schedule: ScanSchedule | None = None) -> BucketSeries:
    """Bucket/mailbox series for one acquisition ordering.

    `masks` holds one realization per schedule entry, in order.  The result
    is deterministic: realizations are evaluated in sequence with fixed-order
    reductions per mailbox.
    """
    if order not in _ORDERS:
        raise ValueError(f"unknown acquisition order {order!r}")
    if contrast_model not in _MODELS:
        raise ValueError(f"unknown contrast model {contrast_model!r}")
    if not masks:
        raise ValueError("at least one mask realization is required")
    if thickness.grid != i_in.grid:
        raise GridMismatchError("thickness map and illumination grids differ")
    if schedule is None:
        schedule = schedule_from_masks(masks)
    if len(schedule) != len(masks):
        raise ScheduleMismatchError(
            f"{len(masks)} masks vs {len(schedule)} schedule entries")

    rois = geom.pixel_rois(i_in.grid)
    area = i_in.grid.pixel_area
    rows = np.empty((len(masks), len(rois)))

    if order == STRUCTURED_ILLUMINATION:
        for j, mask in enumerate(masks):
            image = _sample_image(contrast_model, material, thickness,
                                  illuminate(mask, i_in), r_s_m, laplacian_mode)
            rows[j] = [image.values[r.slices()].sum() * area for r in rois]
    else:
        image = _sample_image(contrast_model, material, thickness, i_in,
                              r_s_m, laplacian_mode)
        for j, mask in enumerate(masks):
            check_same_grid(mask.pattern, i_in)
            prod = mask.pattern.values * image.values
            rows[j] = [prod[r.slices()].sum() * area for r in rois]

    return BucketSeries(values=rows, schedule=schedule)


def write_bucket_csv(series: BucketSeries, path) -> None:
    """CSV: j, offset_m, pattern_id, m0, m1, ... with full-precision floats."""
    with open(path, "w", encoding="ascii") as fh:
        cols = ",".join(f"m{m}" for m in range(series.n_mailboxes))
        fh.write(f"j,offset_m,pattern_id,{cols}\n")
        for j, (pid, off) in enumerate(series.schedule.entries):
            vals = ",".join(repr(float(v)) for v in series.values[j])
            fh.write(f"{j},{off!r},{pid},{vals}\n")


def read_bucket_csv(path) -> BucketSeries:
    entries, rows = [], []
    with open(path, "r", encoding="ascii") as fh:
        header = fh.readline().strip().split(",")
        if header[:3] != ["j", "offset_m", "pattern_id"]:
            raise ScheduleMismatchError(f"{path}: unexpected bucket CSV header")
        for line in fh:
            parts = line.strip().split(",")
            if len(parts) < 4:
                raise ScheduleMismatchError(f"{path}: short bucket CSV row")
            entries.append((int(parts[2]), float(parts[1])))
            rows.append([float(v) for v in parts[3:]])
    return BucketSeries(values=np.array(rows),
                        schedule=ScanSchedule(entries=tuple(entries)))


def write_bucket_binary(series: BucketSeries, path) -> None:
    """Binary variant mirroring the raster format: ASCII header
    `GIB1 <N> <M>\\n` then N*M little-endian 64-bit floats, row-major.
    (Schedule metadata lives in the CSV form.)"""
    n, m = series.values.shape
    with open(path, "wb") as fh:
        fh.write(f"GIB1 {n} {m}\n".encode("ascii"))
        fh.write(series.values.astype("<f8").tobytes(order="C"))


def read_bucket_binary(path, schedule: ScanSchedule) -> BucketSeries:
    from .errors import RasterFormatError
    with open(path, "rb") as fh:
        header = fh.readline().split()
        payload = fh.read()
    if len(header) != 3 or header[0] != b"GIB1":
        raise RasterFormatError(f"{path}: malformed GIB1 header")
    n, m = int(header[1]), int(header[2])
    if len(payload) != n * m * 8:
        raise RasterFormatError(f"{path}: payload is {len(payload)} bytes, "
                                f"expected {n * m * 8}")
    values = np.frombuffer(payload, dtype="<f8").reshape(n, m)
    return BucketSeries(values=values.copy(), schedule=schedule)
