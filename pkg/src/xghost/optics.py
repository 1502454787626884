"""Contrast formation: attenuation, near-field image operator, wave oracle.

The near-field (transport-of-intensity) image of a homogeneous object is

    I_R = (1 - (R*delta/mu) * laplacian) exp(-mu*t) * I_in

valid for propagation distances R <= d**2 / lambda, where d is the smallest
length scale over which the object appreciably changes.  An independent
angular-spectrum wave propagator is provided as a validation oracle; the
image operator is its first-order expansion in R.

Sign conventions (locked by tests): n = 1 - delta + i*beta, complex
transmission exp(i*phi - mu*t/2) with phi = -(2*pi/lambda)*delta*t, and
propagation kernel exp(-i*pi*lambda*R*(u^2 + v^2)).  With these choices an
edge acquires the bright-side overshoot / material-side undershoot ordering
of near-field edge enhancement.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .errors import PurePhaseError
from .fields import ScalarField2D, check_same_grid
from .phantom import Material, ThicknessMap

SPECTRAL_PERIODIC = "spectral_periodic"
FINITE_DIFFERENCE_NEUMANN = "finite_difference_neumann"


@dataclass(frozen=True)
class PropagationSpec:
    """Propagation distance plus the Laplacian discretization to use."""

    distance_R: float
    laplacian_mode: str = SPECTRAL_PERIODIC

    def __post_init__(self):
        if self.distance_R < 0:
            raise ValueError("propagation distance must be >= 0")
        if self.laplacian_mode not in (SPECTRAL_PERIODIC, FINITE_DIFFERENCE_NEUMANN):
            raise ValueError(f"unknown laplacian mode {self.laplacian_mode!r}")


@dataclass(frozen=True)
class FeatureScale:
    """Characteristic object length scale d (m)."""

    d: float

    def __post_init__(self):
        if self.d <= 0:
            raise ValueError("feature scale must be positive")


class NearFieldResult(NamedTuple):
    ok: bool
    ratio: float  # R*lambda/d**2; <= 1 inside the near-field regime


def near_field_check(distance_R: float, d: FeatureScale, lam: float) -> NearFieldResult:
    """ok iff R <= d**2/lambda (boundary inclusive)."""
    if distance_R < 0 or lam <= 0:
        raise ValueError("distance must be >= 0 and wavelength positive")
    ratio = distance_R * lam / d.d**2
    return NearFieldResult(ok=ratio <= 1.0, ratio=float(ratio))


def laplacian(field: ScalarField2D, mode: str = SPECTRAL_PERIODIC) -> ScalarField2D:
    """Transverse Laplacian scaled by the physical pitch.

    Spectral mode multiplies by -(kx^2 + ky^2) on the periodic grid; its
    output has exactly zero mean.  Finite-difference mode is the 5-point
    stencil with reflective (zero normal derivative) edges.
    """
    g = field.grid
    v = field.values
    if mode == SPECTRAL_PERIODIC:
        kx = 2.0 * np.pi * np.fft.fftfreq(g.nx, g.pitch_x)
        ky = 2.0 * np.pi * np.fft.fftfreq(g.ny, g.pitch_y)
        k2 = ky[:, None] ** 2 + kx[None, :] ** 2
        out = np.fft.ifft2(-k2 * np.fft.fft2(v)).real
    elif mode == FINITE_DIFFERENCE_NEUMANN:
        if g.nx < 3 or g.ny < 3:
            raise ValueError("finite-difference Laplacian needs nx, ny >= 3")
        p = np.pad(v, 1, mode="symmetric")
        out = ((p[1:-1, 2:] - 2.0 * v + p[1:-1, :-2]) / g.pitch_x**2
               + (p[2:, 1:-1] - 2.0 * v + p[:-2, 1:-1]) / g.pitch_y**2)
    else:
        raise ValueError(f"unknown laplacian mode {mode!r}")
    return ScalarField2D(g, out)


def contact_image(material: Material, t: ThicknessMap,
                  i_in: ScalarField2D) -> ScalarField2D:
    """Pure attenuation image exp(-mu*t) * I_in at zero propagation distance."""
    check_same_grid(t.field, i_in)
    return ScalarField2D(i_in.grid, np.exp(-material.mu * t.values) * i_in.values)


def tie_image(material: Material, t: ThicknessMap, i_in: ScalarField2D,
              prop: PropagationSpec) -> ScalarField2D:
    """Near-field image (1 - (R*delta/mu)*laplacian) applied to the contact image.

    R = 0 returns the contact image exactly.  The operator divides by mu, so
    a pure-phase object (mu = 0) with R > 0 raises PurePhaseError; propagate
    such objects with fresnel_oracle instead.  Output may legitimately dip
    below zero for strong phase at large R; values are never clipped and
    `meta["negative_values"]` flags when that happened.
    """
    check_same_grid(t.field, i_in)
    contact = contact_image(material, t, i_in)
    if prop.distance_R == 0.0:
        return contact
    if material.mu == 0.0:
        raise PurePhaseError(
            "near-field image operator requires mu > 0 when R > 0; "
            "use fresnel_oracle for pure-phase objects")
    lap = laplacian(contact, prop.laplacian_mode)
    out = contact.values - (prop.distance_R * material.delta / material.mu) * lap.values
    meta = {}
    if np.any(out < 0):
        meta["negative_values"] = True
    return ScalarField2D(i_in.grid, out, meta)


def fresnel_oracle(material: Material, t: ThicknessMap, i_in: ScalarField2D,
                   distance_R: float) -> ScalarField2D:
    """Full scalar-wave propagation oracle.

    Applies the complex transmission exp(i*phi - mu*t/2) to sqrt(I_in),
    propagates with the periodic angular-spectrum kernel
    exp(-i*pi*lambda*R*(u^2+v^2)), and returns |psi|^2.

    Sampling adequacy (pitch^2 >= lambda*R/n per axis) is checked;
    violations set meta["sampling_ok"]=False with the worst ratio in
    meta["sampling_ratio"] rather than erroring.
    """
    check_same_grid(t.field, i_in)
    if distance_R < 0:
        raise ValueError("propagation distance must be >= 0")
    g = i_in.grid
    phi = (-2.0 * np.pi / material.lam) * material.delta * t.values
    psi0 = np.sqrt(i_in.values) * np.exp(1j * phi - 0.5 * material.mu * t.values)
    if distance_R == 0.0:
        return ScalarField2D(g, np.abs(psi0) ** 2)

    meta = {}
    ratio = max(material.lam * distance_R / (g.nx * g.pitch_x**2),
                material.lam * distance_R / (g.ny * g.pitch_y**2))
    if ratio > 1.0:
        meta["sampling_ok"] = False
        meta["sampling_ratio"] = float(ratio)

    u = np.fft.fftfreq(g.nx, g.pitch_x)
    v = np.fft.fftfreq(g.ny, g.pitch_y)
    kernel = np.exp(-1j * np.pi * material.lam * distance_R
                    * (v[:, None] ** 2 + u[None, :] ** 2))
    psi = np.fft.ifft2(np.fft.fft2(psi0) * kernel)
    return ScalarField2D(g, np.abs(psi) ** 2, meta)
