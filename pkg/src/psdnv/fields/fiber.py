"""Step-index fiber: exact HE11 dispersion (Bessel J/K form) and the x-polarized HE11 field."""
from dataclasses import dataclass

import numpy as np
from scipy import special

from ._roots import NoGuidedModeError, bisect, sign_changes

# first zero of J0: TE01/TM01/HE21 cutoff
SINGLE_MODE_CUTOFF = 2.404825557695773


@dataclass(frozen=True)
class FiberParams:
    n_core: float = 1.46
    n_clad: float = 1.44
    radius: float = 2.5e-6
    wavelength: float = 800e-9
    amplitude: float = 1e6

    def __post_init__(self):
        if not self.n_core > self.n_clad >= 1.0:
            raise ValueError(f"need n_core > n_clad >= 1, got {self.n_core}, {self.n_clad}")
        if not self.radius > 0:
            raise ValueError(f"radius must be > 0, got {self.radius}")
        if not self.wavelength > 0:
            raise ValueError(f"wavelength must be > 0, got {self.wavelength}")

    @property
    def k0(self):
        return 2.0 * np.pi / self.wavelength

    @property
    def v_number(self):
        return self.k0 * self.radius * np.sqrt(self.n_core**2 - self.n_clad**2)


@dataclass(frozen=True)
class FiberMode:
    n_eff: float
    u: float
    w: float
    residual: float


def _j_ratio(u):
    """J1'(u) / (u J1(u))."""
    return special.jvp(1, u) / (u * special.jv(1, u))


def _k_ratio(w):
    """K1'(w) / (w K1(w)), from exponentially scaled Bessel functions."""
    return -(special.kve(0, w) + special.kve(2, w)) / (2.0 * w * special.kve(1, w))


def he1_characteristic(fiber, u):
    """HE(1,m) branch of the exact hybrid-mode eigenvalue equation, scaled by ``u^2``.

    With ``J = J1'/(u J1)``, ``K = K1'/(w K1)`` and ``q = (n_clad/n_core)^2`` the
    full equation ``(J + K)(J + qK) = (1/u^2 + 1/w^2)(1/u^2 + q/w^2)`` is a quadratic
    in ``J``; the HE family is the root with the negative square root.
    """
    v = fiber.v_number
    w = np.sqrt(v * v - u * u)
    q = (fiber.n_clad / fiber.n_core) ** 2
    jr, kr = _j_ratio(u), _k_ratio(w)
    rhs = (1.0 / u**2 + 1.0 / w**2) * (1.0 / u**2 + q / w**2)
    return u * u * (jr + 0.5 * (1.0 + q) * kr + np.sqrt((0.5 * (1.0 - q) * kr) ** 2 + rhs))


def te0_characteristic(fiber, u):
    """``J1(u) w K0(w) + u J0(u) K1(w)`` (TE0m), in scaled form."""
    w = np.sqrt(fiber.v_number**2 - u * u)
    return special.jv(1, u) * w * special.kve(0, w) + u * special.jv(0, u) * special.kve(1, w)


def tm0_characteristic(fiber, u):
    w = np.sqrt(fiber.v_number**2 - u * u)
    n1, n2 = fiber.n_core**2, fiber.n_clad**2
    return n1 * special.jv(1, u) * w * special.kve(0, w) + n2 * u * special.jv(0, u) * special.kve(1, w)


def _open_interval(lo, hi):
    pad = 1e-9 * (hi - lo)
    return lo + pad, hi - pad


def _mode_from_u(fiber, u, residual):
    v = fiber.v_number
    n_eff = np.sqrt(fiber.n_core**2 - (u / (fiber.k0 * fiber.radius)) ** 2)
    return FiberMode(float(n_eff), float(u), float(np.sqrt(v * v - u * u)), float(abs(residual)))


def solve_fiber_he11_dispersion(fiber):
    """Solve for the fundamental HE11 mode; returns a ``FiberMode`` (``n_eff``, ``u``, ``w``)."""
    v = fiber.v_number
    if not v > 0:
        raise NoGuidedModeError(f"V-number must be > 0, got {v}")
    j11 = special.jn_zeros(1, 1)[0]
    lo, hi = _open_interval(0.0, min(v, j11))

    def f(u):
        return he1_characteristic(fiber, u)

    brackets = sign_changes(f, lo, hi, n=4000)
    if not brackets:
        raise NoGuidedModeError(f"no HE11 root found in (0, {hi:.6g}) for V = {v:.6g}")
    u = bisect(f, *brackets[0])
    return _mode_from_u(fiber, u, f(u))


def guided_roots(fiber, n=4000):
    """Transverse parameters ``u`` of guided HE(1,m), TE(0,m) and TM(0,m) modes.

    The HE branch is scanned between consecutive zeros of ``J1`` where it is continuous.
    """
    v = fiber.v_number
    roots = {"HE1": [], "TE0": [], "TM0": []}
    edges = [0.0] + [z for z in special.jn_zeros(1, int(v / np.pi) + 2) if z < v] + [v]
    for a, b in zip(edges[:-1], edges[1:]):
        lo, hi = _open_interval(a, b)
        for br in sign_changes(lambda u: he1_characteristic(fiber, u), lo, hi, n):
            roots["HE1"].append(bisect(lambda u: he1_characteristic(fiber, u), *br))
    lo, hi = _open_interval(0.0, v)
    for name, fn in (("TE0", te0_characteristic), ("TM0", tm0_characteristic)):
        for br in sign_changes(lambda u, fn=fn: fn(fiber, u), lo, hi, n):
            roots[name].append(bisect(lambda u, fn=fn: fn(fiber, u), *br))
    return roots


def fiber_he11_field(fiber, r, mode=None):
    """x-polarized HE11 field at ``r`` (m, ``(..., 3)``), propagating along +z.

    ``fiber.amplitude`` is the on-axis ``E_x``. ``E_z`` is in quadrature with the
    transverse field and tangential components are continuous at ``r = a``.
    """
    mode = mode or solve_fiber_he11_dispersion(fiber)
    r = np.asarray(r, dtype=float)
    x, y, z = r[..., 0], r[..., 1], r[..., 2]
    a, u, w = fiber.radius, mode.u, mode.w
    beta = mode.n_eff * fiber.k0
    rad = np.hypot(x, y)
    phi = np.arctan2(y, x)
    R = rad / a
    s = (1.0 / u**2 + 1.0 / w**2) / (_j_ratio(u) + _k_ratio(w))
    lo, hi = 0.5 * (1.0 - s), 0.5 * (1.0 + s)
    amp = -1j * fiber.amplitude / ((beta * a / u) * lo)

    inside = R <= 1.0
    Rin, Rout = np.minimum(R, 1.0), np.maximum(R, 1.0)
    ez_in = special.jv(1, u * Rin)
    er_in = 1j * (beta * a / u) * (lo * special.jv(0, u * Rin) - hi * special.jv(2, u * Rin))
    ep_in = -1j * (beta * a / u) * (lo * special.jv(0, u * Rin) + hi * special.jv(2, u * Rin))
    # scaled K functions: K_n(wR)/K_1(w) = kve_n(wR)/kve_1(w) * exp(-w (R - 1))
    decay = np.exp(-w * (Rout - 1.0)) / special.kve(1, w)
    kc = special.jv(1, u)
    ez_out = kc * special.kve(1, w * Rout) * decay
    er_out = 1j * (beta * a * kc / w) * (lo * special.kve(0, w * Rout) + hi * special.kve(2, w * Rout)) * decay
    ep_out = -1j * (beta * a * kc / w) * (lo * special.kve(0, w * Rout) - hi * special.kve(2, w * Rout)) * decay

    cos_p, sin_p = np.cos(phi), np.sin(phi)
    prop = amp * np.exp(1j * beta * z)
    ez = np.where(inside, ez_in, ez_out) * cos_p * prop
    er = np.where(inside, er_in, er_out) * cos_p * prop
    ep = np.where(inside, ep_in, ep_out) * sin_p * prop
    out = np.empty(np.shape(ez) + (3,), dtype=complex)
    out[..., 0] = er * cos_p - ep * sin_p
    out[..., 1] = er * sin_p + ep * cos_p
    out[..., 2] = ez
    return out
