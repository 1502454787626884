"""Projected-thickness phantoms and their optical-density / phase-shift maps.

A homogeneous object of projected thickness t is described by the material's
refractive index n = 1 - delta + i*beta at wavelength lambda.  The optical
density is D = (4*pi/lambda)*beta*t = mu*t and the phase shift is
phi = -(2*pi/lambda)*delta*t.

Thickness maps are evaluated at pixel centers ((i + 0.5) * pitch).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy import ndimage
from scipy.spatial import cKDTree
from scipy.special import erf

from . import rng
from .fields import Grid2D, ScalarField2D

# hc in m*keV: lambda = HC_M_KEV / E_keV
HC_M_KEV = 1.23984193e-9


def wavelength_from_energy(energy_kev: float) -> float:
    """Photon wavelength in meters from energy in keV."""
    if energy_kev <= 0:
        raise ValueError("photon energy must be positive")
    return HC_M_KEV / energy_kev


@dataclass(frozen=True)
class Material:
    """Refractive decrement delta, absorption index beta, wavelength (m)."""

    delta: float
    beta: float
    lam: float

    def __post_init__(self):
        if self.delta < 0 or self.beta < 0:
            raise ValueError("delta and beta must be >= 0 (hard-x-ray convention)")
        if self.lam <= 0:
            raise ValueError("wavelength must be positive")

    @property
    def mu(self) -> float:
        """Linear attenuation coefficient 4*pi*beta/lambda (1/m)."""
        return 4.0 * np.pi * self.beta / self.lam


@dataclass(frozen=True)
class ThicknessMap:
    """Non-negative projected thickness in meters on a grid.

    `margin_px` declares a border band that the construction left at zero
    thickness (compact support), needed for periodic spectral operators.
    """

    field: ScalarField2D
    margin_px: int = 0

    def __post_init__(self):
        if np.any(self.field.values < 0):
            raise ValueError("thickness must be non-negative everywhere")

    @property
    def grid(self) -> Grid2D:
        return self.field.grid

    @property
    def values(self) -> np.ndarray:
        return self.field.values


def _axis_coords(grid: Grid2D, axis: str) -> tuple[np.ndarray, float]:
    if axis == "x":
        return (np.arange(grid.nx) + 0.5) * grid.pitch_x, grid.extent_x
    if axis == "y":
        return (np.arange(grid.ny) + 0.5) * grid.pitch_y, grid.extent_y
    raise ValueError(f"axis must be 'x' or 'y', got {axis!r}")


def _broadcast_profile(grid: Grid2D, axis: str, profile: np.ndarray) -> np.ndarray:
    if axis == "x":
        return np.broadcast_to(profile[None, :], grid.shape).copy()
    return np.broadcast_to(profile[:, None], grid.shape).copy()


def edge_phantom(grid: Grid2D, thickness: float, edge_axis: str = "x",
                 edge_position: float = 0.0, smoothing_sigma: float = 0.0) -> ThicknessMap:
    """Step of the given thickness rising across `edge_axis` at `edge_position`.

    smoothing_sigma > 0 replaces the hard step with the Gaussian-smoothed
    (erf) profile; the value at the edge position is exactly thickness/2.
    """
    coords, extent = _axis_coords(grid, edge_axis)
    if not 0.0 <= edge_position <= extent:
        raise ValueError(f"edge position {edge_position} outside grid extent {extent}")
    if smoothing_sigma < 0:
        raise ValueError("smoothing_sigma must be >= 0")
    if thickness == 0.0:
        return ThicknessMap(ScalarField2D(grid, np.zeros(grid.shape)))
    if smoothing_sigma == 0.0:
        profile = np.where(coords >= edge_position, float(thickness), 0.0)
    else:
        z = (coords - edge_position) / (np.sqrt(2.0) * smoothing_sigma)
        profile = float(thickness) * 0.5 * (1.0 + erf(z))
    return ThicknessMap(ScalarField2D(grid, _broadcast_profile(grid, edge_axis, profile)))


def bar_phantom(grid: Grid2D, thickness: float, axis: str = "x",
                start: float = 0.0, end: float = 0.0,
                smoothing_sigma: float = 0.0, margin_px: int = 0) -> ThicknessMap:
    """Bar (two opposing smoothed edges) across `axis`: compact support along it.

    Convenience for spectral-mode studies where a lone step would wrap around
    the periodic boundary and create a spurious hard edge.
    """
    if end <= start:
        raise ValueError("bar end must exceed start")
    coords, extent = _axis_coords(grid, axis)
    if not (0.0 <= start <= extent and 0.0 <= end <= extent):
        raise ValueError("bar must lie inside the grid")
    if smoothing_sigma == 0.0:
        profile = np.where((coords >= start) & (coords < end), float(thickness), 0.0)
    else:
        s = np.sqrt(2.0) * smoothing_sigma
        profile = float(thickness) * 0.5 * (erf((coords - start) / s) - erf((coords - end) / s))
        profile = np.maximum(profile, 0.0)
    return ThicknessMap(ScalarField2D(grid, _broadcast_profile(grid, axis, profile)),
                        margin_px=margin_px)


def lamella_phantom(grid: Grid2D, seed: int, mean_pore: float, wall_thickness: float,
                    wall_width: float | None = None, margin_px: int = 16,
                    edge_smoothing_sigma: float = 0.0) -> ThicknessMap:
    """Cellular (Voronoi-wall) thickness map: pores of zero thickness separated
    by walls of the given projected thickness.

    Cell sites are drawn from the counter-based generator (see rng module), so
    the map is identical for identical seeds on any platform.  `wall_width`
    is the lateral width of the walls (defaults to mean_pore / 8).
    """
    if mean_pore <= 0 or wall_thickness < 0:
        raise ValueError("mean_pore must be > 0 and wall_thickness >= 0")
    ex, ey = grid.extent_x, grid.extent_y
    if mean_pore > min(ex, ey):
        raise ValueError(f"mean pore {mean_pore} exceeds grid extent ({ex}, {ey})")
    if wall_thickness == 0.0:
        return ThicknessMap(ScalarField2D(grid, np.zeros(grid.shape)), margin_px=margin_px)
    if wall_width is None:
        wall_width = mean_pore / 8.0

    n_sites = max(4, int(round(ex * ey / mean_pore**2)))
    u = rng.uniform01(seed, np.arange(2 * n_sites, dtype=np.uint64))
    sites = np.column_stack([u[:n_sites] * ex, u[n_sites:] * ey])

    xs = (np.arange(grid.nx) + 0.5) * grid.pitch_x
    ys = (np.arange(grid.ny) + 0.5) * grid.pitch_y
    px_x, px_y = np.meshgrid(xs, ys)
    pts = np.column_stack([px_x.ravel(), px_y.ravel()])
    dists, _ = cKDTree(sites).query(pts, k=2)
    # pixels near a Voronoi boundary: second-nearest site nearly as close as nearest
    on_wall = (dists[:, 1] - dists[:, 0]) <= wall_width
    t = np.where(on_wall, float(wall_thickness), 0.0).reshape(grid.shape)

    if margin_px > 0:
        m = margin_px
        t[:m, :] = 0.0
        t[-m:, :] = 0.0
        t[:, :m] = 0.0
        t[:, -m:] = 0.0
    if edge_smoothing_sigma > 0:
        sig_px = (edge_smoothing_sigma / grid.pitch_x, edge_smoothing_sigma / grid.pitch_y)
        t = ndimage.gaussian_filter(t, sigma=(sig_px[1], sig_px[0]), mode="wrap")
        t = np.maximum(t, 0.0)
    return ThicknessMap(ScalarField2D(grid, t), margin_px=margin_px)


def optical_density(material: Material, t: ThicknessMap) -> ScalarField2D:
    """D = (4*pi/lambda)*beta*t = mu*t, dimensionless."""
    return ScalarField2D(t.grid, material.mu * t.values)


def phase_shift(material: Material, t: ThicknessMap) -> ScalarField2D:
    """phi = -(2*pi/lambda)*delta*t in radians (<= 0 for delta, t >= 0)."""
    return ScalarField2D(t.grid, (-2.0 * np.pi / material.lam) * material.delta * t.values)
