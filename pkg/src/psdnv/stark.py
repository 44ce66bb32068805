"""NV level structure, virtual-transition AC Stark shifts and the PSD-induced effective field.

All level and detuning arithmetic works with frequency *differences* so that no
~1e15 rad/s optical frequencies are subtracted late in the chain.
"""
from dataclasses import dataclass
import math

import numpy as np

from . import constants as const
from .fields.jones import E_LEFT, E_RIGHT, norm_sq
from .spin import project_on_axis, spin_density

LEVELS = ("A_up", "A_down", "E_R", "E_L", "E_up", "E_down")
# zero-field energy in units of (delta_es, lambda_z), and Zeeman coefficient of gamma*B
_LEVEL_TERMS = {
    "A_up": (1.0, 1.0, 1),
    "A_down": (1.0, 1.0, -1),
    "E_R": (-2.0, 0.0, 0),
    "E_L": (-2.0, 0.0, 0),
    "E_up": (1.0, -1.0, 1),
    "E_down": (1.0, -1.0, -1),
}
# (ground m, circular polarization) -> excited level reached
SELECTION = {
    (-1, "L"): "A_down",
    (-1, "R"): "E_down",
    (0, "L"): "E_L",
    (0, "R"): "E_R",
    (1, "L"): "E_up",
    (1, "R"): "A_up",
}
NEAR_RESONANCE_FACTOR = 10.0


class NearResonanceError(ValueError):
    """The drive is within a few linewidths of a transition; the dispersive model does not apply."""


def axis_from_angle(phi):
    """NV axis tilted by ``phi`` from +z in the frame whose circular basis rotates about y."""
    return (-math.sin(phi), 0.0, math.cos(phi))


@dataclass(frozen=True)
class NVParams:
    """NV constants; rates in rad/s, ``gamma`` in rad/(s T).

    Give either ``phi`` or ``axis`` (or both, consistently); with neither,
    ``phi`` defaults to 54.7 deg and the axis follows ``axis_from_angle``.
    """

    lambda_z: float = const.LAMBDA_Z
    delta_es: float = const.DELTA_ES
    delta_gs: float = const.DELTA_GS
    omega_ge: float = const.OMEGA_GE
    gamma: float = const.GAMMA_NV
    tau: float = const.TAU_NV
    b_bias: float = const.B_BIAS
    phi: float = None
    axis: tuple = None
    eps_medium: float = const.EPS_R_DIAMOND * const.EPS0

    def __post_init__(self):
        for name in ("lambda_z", "delta_es", "delta_gs", "omega_ge", "gamma", "tau", "eps_medium"):
            if not getattr(self, name) > 0:
                raise ValueError(f"{name} must be > 0, got {getattr(self, name)}")
        phi, axis = self.phi, self.axis
        if axis is None:
            phi = const.PHI_NV if phi is None else float(phi)
            axis = axis_from_angle(phi)
        else:
            axis = tuple(float(v) for v in axis)
            if len(axis) != 3 or abs(math.sqrt(sum(v * v for v in axis)) - 1.0) > 1e-9:
                raise ValueError(f"NV axis must be a unit 3-vector, got {axis}")
            if phi is None:
                phi = math.acos(max(-1.0, min(1.0, axis[2])))
            elif abs(math.cos(phi) - axis[2]) > 1e-9:
                raise ValueError(f"cos(phi) = {math.cos(phi)} disagrees with axis z = {axis[2]}")
        object.__setattr__(self, "phi", float(phi))
        object.__setattr__(self, "axis", axis)

    @property
    def linewidth(self):
        return 1.0 / self.tau

    @property
    def d0(self):
        return dipole_from_lifetime(self.tau, self.omega_ge)


@dataclass(frozen=True)
class ExcitedLevels:
    """Excited-state energies (rad/s) relative to the optical gap."""

    A_up: float
    A_down: float
    E_R: float
    E_L: float
    E_up: float
    E_down: float

    def __getitem__(self, name):
        return getattr(self, name)


@dataclass(frozen=True)
class StarkShifts:
    """Ground-state shifts (rad/s) for ground level m and circular drive L/R."""

    minus_L: float
    minus_R: float
    zero_L: float
    zero_R: float
    plus_L: float
    plus_R: float

    def __getitem__(self, key):
        m, pol = key
        return getattr(self, f"{_M_NAME[m]}_{pol}")


_M_NAME = {-1: "minus", 0: "zero", 1: "plus"}


@dataclass(frozen=True)
class EffectiveFields:
    """Effective axial fields (T) seen by the three ground-state qubits."""

    b01: float
    b_m10: float
    b_m11: float


def excited_levels(nv):
    zb = nv.gamma * nv.b_bias
    vals = {}
    for name, (ces, clz, cz) in _LEVEL_TERMS.items():
        vals[name] = ces * nv.delta_es + clz * nv.lambda_z + cz * zb
    return ExcitedLevels(**vals)


def dipole_from_lifetime(tau, omega_ge):
    """Transition dipole ``sqrt(3 pi hbar eps0 c^3 / (omega^3 tau))`` in C m."""
    if not (tau > 0 and omega_ge > 0):
        raise ValueError("lifetime and transition frequency must be positive")
    return math.sqrt(3.0 * math.pi * const.HBAR * const.EPS0 * const.C_LIGHT**3 / (omega_ge**3 * tau))


def detunings(nv, omega0, levels=None):
    """Detunings ``Delta[(m, level)]`` (rad/s) of the drive from each ground -> excited line.

    The Zeeman terms of the level and of the ground state are combined into one
    integer coefficient first, so the cancellations for ``A_down``/``E_down`` from
    ``m = -1`` and ``A_up``/``E_up`` from ``m = +1`` are exact.
    """
    levels = levels or excited_levels(nv)
    optical = omega0 - nv.omega_ge
    zb = nv.gamma * nv.b_bias
    out = {}
    for name, (ces, clz, cz) in _LEVEL_TERMS.items():
        base = ces * nv.delta_es + clz * nv.lambda_z
        out[(-1, name)] = optical - (base + (cz + 1) * zb)
        out[(0, name)] = optical - (base + cz * zb + nv.delta_gs)
        out[(1, name)] = optical - (base + (cz - 1) * zb)
    limit = NEAR_RESONANCE_FACTOR * nv.linewidth
    worst = min(out, key=lambda key: abs(out[key]))
    if abs(out[worst]) < limit:
        raise NearResonanceError(
            f"near-resonant: virtual-transition model invalid (|Delta{worst}| = {abs(out[worst]):.4g} rad/s "
            f"< {NEAR_RESONANCE_FACTOR:g} Gamma)"
        )
    return out


def stark_shifts(nv, omega0, e_sq, include_linewidth=False):
    """Light shifts of the six (m, polarization) pairs for field intensity ``e_sq = |E|^2``."""
    if e_sq < 0:
        raise ValueError(f"|E|^2 must be >= 0, got {e_sq}")
    delta = detunings(nv, omega0)
    pref = nv.d0**2 / (2.0 * const.HBAR**2) * e_sq
    width = nv.linewidth**2 / 4.0 if include_linewidth else 0.0
    vals = {}
    for (m, pol), level in SELECTION.items():
        d = delta[(m, level)]
        vals[f"{_M_NAME[m]}_{pol}"] = pref * d / (d * d + width)
    return StarkShifts(**vals)


def qubit_effective_fields_per_pol(shifts, gamma):
    """Per-polarization qubit fields: ``{pol: EffectiveFields}`` for pol in L, R."""
    out = {}
    for pol in ("L", "R"):
        dp, d0, dm = shifts[(1, pol)], shifts[(0, pol)], shifts[(-1, pol)]
        out[pol] = EffectiveFields((dp - d0) / gamma, (d0 - dm) / gamma, (dp - dm) / (2.0 * gamma))
    return out


def frame_weights(e, axis):
    """Populations ``(w_L, w_R, w_z)`` of unit polarization ``e`` in the circular basis about ``axis``."""
    e = np.asarray(e, dtype=complex)
    if abs(norm_sq(e) - 1.0) > 1e-9:
        raise ValueError("polarization vector must have unit norm")
    n = np.asarray(axis, dtype=float)
    helper = np.array([0.0, 1.0, 0.0]) if abs(n[1]) < 0.9 else np.array([1.0, 0.0, 0.0])
    yp = helper - (helper @ n) * n
    yp /= np.linalg.norm(yp)
    xp = np.cross(yp, n)
    eL = (xp + 1j * yp) / math.sqrt(2.0)
    eR = (xp - 1j * yp) / math.sqrt(2.0)
    return (
        float(abs(e @ np.conj(eL)) ** 2),
        float(abs(e @ np.conj(eR)) ** 2),
        float(abs(e @ n) ** 2),
    )


def nv_frame_polarization_weights(e, phi):
    """Weights of ``e`` on the NV-frame circular vectors for an axis tilted by ``phi``.

    ``e'_L = (e_L (cos phi + 1) + e_R (cos phi - 1))/2 + z sin(phi)/sqrt(2)`` and
    ``e'_R`` with L and R swapped; ``w_z`` is the weight on the NV axis itself.
    """
    e = np.asarray(e, dtype=complex)
    if abs(norm_sq(e) - 1.0) > 1e-12:
        raise ValueError("polarization vector must have unit norm")
    c, s = math.cos(phi), math.sin(phi)
    ez = np.array([0.0, 0.0, 1.0])
    eLp = 0.5 * E_LEFT * (c + 1.0) + 0.5 * E_RIGHT * (c - 1.0) + ez * s / math.sqrt(2.0)
    eRp = 0.5 * E_RIGHT * (c + 1.0) + 0.5 * E_LEFT * (c - 1.0) + ez * s / math.sqrt(2.0)
    n = np.array(axis_from_angle(phi))
    return (
        float(abs(e @ np.conj(eLp)) ** 2),
        float(abs(e @ np.conj(eRp)) ** 2),
        float(abs(e @ n) ** 2),
    )


def effective_field(nv, E, omega0, include_linewidth=False):
    """Effective fields of the three qubits for the complex field ``E`` (V/m) at the NV.

    Shifts are computed for ``|E|^2``; each circular channel is weighted by the
    field's population in the NV-frame circular basis. The component along the
    NV axis drives no listed transition and contributes nothing.
    """
    E = np.asarray(E, dtype=complex)
    e_sq = float(norm_sq(E))
    if e_sq == 0.0:
        return EffectiveFields(0.0, 0.0, 0.0)
    per = qubit_effective_fields_per_pol(stark_shifts(nv, omega0, e_sq, include_linewidth), nv.gamma)
    wl, wr, _ = frame_weights(E / math.sqrt(e_sq), nv.axis)
    return EffectiveFields(
        per["L"].b01 * wl + per["R"].b01 * wr,
        per["L"].b_m10 * wl + per["R"].b_m10 * wr,
        per["L"].b_m11 * wl + per["R"].b_m11 * wr,
    )


def common_detuning(nv, omega0):
    """Mean of the ``+1 -> A_up`` and ``+1 -> E_up`` detunings."""
    delta = detunings(nv, omega0)
    return 0.5 * (delta[(1, "A_up")] + delta[(1, "E_up")])


def closed_form_beff(s_proj, nv, omega0, delta=None):
    """Far-detuned effective field ``-2 omega0 d0^2 lambda_z s_proj / (hbar^2 eps gamma Delta^2)`` (T)."""
    if delta is None:
        delta = common_detuning(nv, omega0)
    if delta == 0:
        raise ValueError("common detuning is zero")
    coeff = -2.0 * omega0 * nv.d0**2 * nv.lambda_z / (const.HBAR**2 * nv.eps_medium * nv.gamma * delta**2)
    return coeff * np.asarray(s_proj, dtype=float)


def beff_constant(nv, omega0):
    """Material constant ``C`` with ``B_eff = C / (lambda0 Delta^2) * s_proj``."""
    lam0 = 2.0 * math.pi * const.C_LIGHT / omega0
    return -2.0 * omega0 * lam0 * nv.d0**2 * nv.lambda_z / (const.HBAR**2 * nv.eps_medium * nv.gamma)


def projected_spin(nv, E, omega0):
    """``S_E . n`` at the NV for field ``E``, with the NV's medium permittivity."""
    return float(project_on_axis(spin_density(E, omega0, nv.eps_medium), nv.axis))
