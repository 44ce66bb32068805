"""Symmetric dielectric slab waveguide (core ``|z| < a``) guiding along +x.

TE modes carry only ``E_y``, so a single TE mode has no electric spin density.
TM modes carry ``E_z`` and a longitudinal ``E_x`` in quadrature, and coherent
TE/TM superpositions (``SlabMix``) give spin in the cladding as well.
"""
from dataclasses import dataclass, field

import numpy as np

from ._roots import NoGuidedModeError, bisect


@dataclass(frozen=True)
class SlabParams:
    n_core: float = 2.4
    n_clad: float = 1.0
    half_thickness: float = 100e-9
    wavelength: float = 800e-9
    order: int = 0
    amplitude: float = 1e6

    def __post_init__(self):
        if not self.n_core > self.n_clad >= 1.0:
            raise ValueError(f"need n_core > n_clad >= 1, got {self.n_core}, {self.n_clad}")
        if not self.half_thickness > 0:
            raise ValueError(f"half_thickness must be > 0, got {self.half_thickness}")
        if not self.wavelength > 0:
            raise ValueError(f"wavelength must be > 0, got {self.wavelength}")
        if self.order < 0:
            raise ValueError(f"mode order must be >= 0, got {self.order}")

    @property
    def k0(self):
        return 2.0 * np.pi / self.wavelength

    @property
    def v_number(self):
        return self.k0 * self.half_thickness * np.sqrt(self.n_core**2 - self.n_clad**2)


@dataclass(frozen=True)
class SlabMode:
    """Solved slab mode: ``u = k_x a`` (core), ``w = gamma a`` (cladding), ``u^2 + w^2 = V^2``."""

    pol: str
    order: int
    n_eff: float
    u: float
    w: float
    residual: float


def characteristic(slab, pol, order, u):
    """Smooth form of the slab eigenvalue equation in ``u``; zero on a guided mode.

    Even TE: ``u sin u - w cos u`` (i.e. ``tan u = w/u``); odd TE: ``u cos u + w sin u``.
    TM multiplies ``w`` by ``n_core^2 / n_clad^2``.
    """
    v = slab.v_number
    w = np.sqrt(max(v * v - u * u, 0.0))
    r = 1.0 if pol == "TE" else (slab.n_core / slab.n_clad) ** 2
    if order % 2 == 0:
        return u * np.sin(u) - r * w * np.cos(u)
    return u * np.cos(u) + r * w * np.sin(u)


def solve_slab_mode(slab, pol="TE", order=None):
    pol = pol.upper()
    if pol not in ("TE", "TM"):
        raise ValueError(f"polarization must be 'TE' or 'TM', got {pol!r}")
    m = slab.order if order is None else order
    v = slab.v_number
    lo = m * np.pi / 2.0
    if v <= lo:
        raise NoGuidedModeError(f"{pol}{m} is not guided: V = {v:.6g} <= {lo:.6g}")
    hi = min((m + 1) * np.pi / 2.0, v)

    def f(u):
        return characteristic(slab, pol, m, u)

    u = bisect(f, lo, hi)
    w = np.sqrt(v * v - u * u)
    n_eff = np.sqrt(slab.n_core**2 - (u / (slab.k0 * slab.half_thickness)) ** 2)
    return SlabMode(pol, m, float(n_eff), float(u), float(w), float(abs(f(u))))


def solve_slab_te_dispersion(slab):
    """Effective index of the TE mode of order ``slab.order``."""
    return solve_slab_mode(slab, "TE").n_eff


def solve_slab_tm_dispersion(slab):
    return solve_slab_mode(slab, "TM").n_eff


def _profile(mode, slab, z):
    """Core/cladding transverse profile, its z-derivative, and the cladding index ratio factor."""
    a = slab.half_thickness
    kx, gam = mode.u / a, mode.w / a
    inside = np.abs(z) <= a
    tail = np.exp(-gam * (np.abs(z) - a))
    sgn = np.sign(z)
    if mode.order % 2 == 0:
        f_in, df_in = np.cos(kx * z), -kx * np.sin(kx * z)
        edge = np.cos(mode.u)
        f_out, df_out = edge * tail, -gam * sgn * edge * tail
    else:
        f_in, df_in = np.sin(kx * z), kx * np.cos(kx * z)
        edge = np.sin(mode.u)
        f_out, df_out = sgn * edge * tail, -gam * edge * tail
    return inside, f_in, df_in, f_out, df_out


def slab_te_mode_field(slab, r, mode=None):
    """TE field (only ``E_y``) at positions ``r`` (m, ``(..., 3)``); peak core amplitude ``slab.amplitude``."""
    mode = mode or solve_slab_mode(slab, "TE")
    r = np.asarray(r, dtype=float)
    x, z = r[..., 0], r[..., 2]
    beta = mode.n_eff * slab.k0
    inside, f_in, _, f_out, _ = _profile(mode, slab, z)
    ey = slab.amplitude * np.where(inside, f_in, f_out) * np.exp(1j * beta * x)
    out = np.zeros(ey.shape + (3,), dtype=complex)
    out[..., 1] = ey
    return out


def slab_tm_mode_field(slab, r, mode=None):
    """TM field: normal ``E_z`` (continuous ``D_z``) plus longitudinal ``E_x = (i/beta) dE_z/dz``."""
    mode = mode or solve_slab_mode(slab, "TM")
    r = np.asarray(r, dtype=float)
    x, z = r[..., 0], r[..., 2]
    beta = mode.n_eff * slab.k0
    ratio = (slab.n_core / slab.n_clad) ** 2
    inside, f_in, df_in, f_out, df_out = _profile(mode, slab, z)
    phase = slab.amplitude * np.exp(1j * beta * x)
    ez = np.where(inside, f_in, ratio * f_out) * phase
    ex = (1j / beta) * np.where(inside, df_in, ratio * df_out) * phase
    out = np.zeros(ez.shape + (3,), dtype=complex)
    out[..., 0] = ex
    out[..., 2] = ez
    return out


@dataclass(frozen=True)
class ModeComponent:
    pol: str = "TE"
    order: int = 0
    amplitude: float = 1.0
    phase: float = 0.0


@dataclass(frozen=True)
class SlabMix:
    """Coherent superposition of slab modes, weights relative to ``SlabParams.amplitude``."""

    modes: tuple = field(default_factory=lambda: (
        ModeComponent("TE", 0, 1.0, 0.0),
        ModeComponent("TM", 0, 0.5, np.pi / 2.0),
    ))


def slab_mix_field(slab, mix, r):
    r = np.asarray(r, dtype=float)
    total = np.zeros(r.shape[:-1] + (3,), dtype=complex)
    for comp in mix.modes:
        mode = solve_slab_mode(slab, comp.pol, comp.order)
        fn = slab_te_mode_field if mode.pol == "TE" else slab_tm_mode_field
        total += comp.amplitude * np.exp(1j * comp.phase) * fn(slab, r, mode)
    return total
