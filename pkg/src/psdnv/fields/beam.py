"""Focused free-space target beam: scalar paraxial Gaussian times a uniform Jones vector."""
from dataclasses import dataclass

import numpy as np

from .. import constants as const
from .jones import apply_ellipticity, qwp_jones


@dataclass(frozen=True)
class BeamParams:
    """Polarized Gaussian beam propagating along +z.

    ``focus_offset`` puts the waist at ``z = focus_offset``. The transverse spin
    knob (``transverse_spin_fraction``) is not part of the coherent field; it is
    consumed by the scenario runner as an incoherent admixture carrying a fixed,
    polarization-independent spin along ``transverse_spin_axis``.
    """

    wavelength: float = const.WAVELENGTH_TARGET
    power: float = const.POWER_TARGET
    transmission: float = const.TRANSMISSION
    na: float = const.NA_TARGET
    focus_offset: float = 0.0
    qwp_angle: float = np.pi / 4.0
    ellipticity: float = 1.0
    transverse_spin_fraction: float = 0.0
    transverse_spin_axis: tuple = (1.0, 0.0, 0.0)

    def __post_init__(self):
        if not self.wavelength > 0:
            raise ValueError(f"wavelength must be > 0, got {self.wavelength}")
        if not 0 < self.na < 1:
            raise ValueError(f"numerical aperture must lie in (0, 1), got {self.na}")
        if self.power < 0:
            raise ValueError(f"power must be >= 0, got {self.power}")
        if not 0 < self.transmission <= 1:
            raise ValueError(f"transmission must lie in (0, 1], got {self.transmission}")
        if self.ellipticity <= 0:
            raise ValueError(f"ellipticity must be > 0, got {self.ellipticity}")
        if self.transverse_spin_fraction < 0:
            raise ValueError("transverse_spin_fraction must be >= 0")
        axis = np.asarray(self.transverse_spin_axis, dtype=float)
        if axis.shape != (3,) or not np.linalg.norm(axis) > 0:
            raise ValueError("transverse_spin_axis must be a nonzero 3-vector")

    @property
    def omega(self):
        return const.omega_from_wavelength(self.wavelength)

    @property
    def waist(self):
        return self.wavelength / (np.pi * self.na)

    @property
    def rayleigh_range(self):
        return np.pi * self.waist**2 / self.wavelength

    @property
    def peak_field_sq(self):
        """|E|^2 on axis at the focus, for transmitted power ``power * transmission``."""
        return 4.0 * self.power * self.transmission / (const.EPS0 * const.C_LIGHT * np.pi * self.waist**2)

    def jones(self):
        return apply_ellipticity(qwp_jones(self.qwp_angle), self.ellipticity)


def paraxial_gaussian_field(beam, r):
    """Complex electric field (V/m) of ``beam`` at positions ``r`` (m, shape ``(..., 3)``)."""
    r = np.asarray(r, dtype=float)
    x, y, z = r[..., 0], r[..., 1], r[..., 2]
    w0 = beam.waist
    zr = beam.rayleigh_range
    k = 2.0 * np.pi / beam.wavelength
    dz = z - beam.focus_offset
    rho_sq = x**2 + y**2
    w_sq = w0**2 * (1.0 + (dz / zr) ** 2)
    gouy = np.arctan2(dz, zr)
    # k rho^2 / 2R written without R so the focal plane needs no special case
    curvature = k * rho_sq * dz / (2.0 * (dz**2 + zr**2))
    envelope = np.sqrt(beam.peak_field_sq) * (w0 / np.sqrt(w_sq)) * np.exp(-rho_sq / w_sq)
    u = envelope * np.exp(1j * (k * dz + curvature - gouy))
    return u[..., None] * beam.jones()
