"""Scenario execution: field -> spin density -> effective field -> XY8 readout, plus fits and CSV output."""
from dataclasses import dataclass, field, replace
import csv
import math

import numpy as np

from . import constants as const
from .fields import circular_about, fiber_he11_field, paraxial_gaussian_field, slab_mix_field, spp_mode_field
from .fields.jones import norm_sq
from .pulse import simulate_measurement
from .scenario import ScenarioError
from .spin import spin_density
from .stark import closed_form_beff, common_detuning, effective_field, projected_spin

NT = 1e9
NM = 1e9


@dataclass
class Table:
    """Column names (unit-suffixed) and rows in output units; ``meta`` holds fit results."""

    columns: list
    rows: list = field(default_factory=list)
    meta: dict = field(default_factory=dict)

    def column(self, name):
        i = self.columns.index(name)
        return np.array([row[i] for row in self.rows], dtype=float)


@dataclass(frozen=True)
class SineFit:
    """``B(theta) = amplitude * sin(2 theta + phase) + offset``; ``angle_offset = phase / 2``."""

    amplitude: float
    offset: float
    phase: float
    rms_residual: float
    angle_offset: float


@dataclass(frozen=True)
class LinearFit:
    slope: float
    intercept: float
    r_squared: float


def _require(s, kinds, sources, what):
    if s.sweep_kind not in kinds:
        raise ScenarioError(f"sweep: {what} needs one of {list(kinds)}, scenario has {s.sweep_kind!r}")
    if s.source_kind not in sources:
        raise ScenarioError(f"source: {what} needs one of {list(sources)}, scenario has {s.source_kind!r}")


def beam_point(s, beam):
    """Spin projection and exact/closed-form ``B_m11`` (T) at the NV for ``beam``.

    The transverse-spin admixture is an incoherent field of intensity
    ``f |E|^2``, circular about ``transverse_spin_axis``; its contributions add to
    those of the coherent beam in both routes.
    """
    nv, omega = s.nv, beam.omega
    e_main = paraxial_gaussian_field(beam, s.position)
    fields = [e_main]
    if beam.transverse_spin_fraction > 0:
        amp = math.sqrt(beam.transverse_spin_fraction * float(norm_sq(e_main)))
        fields.append(amp * circular_about(beam.transverse_spin_axis))
    s_proj = sum(projected_spin(nv, e, omega) for e in fields)
    b_exact = sum(effective_field(nv, e, omega).b_m11 for e in fields)
    b_closed = float(closed_form_beff(s_proj, nv, omega))
    return s_proj, b_exact, b_closed


def _measure(s, b):
    return simulate_measurement(b, s.sequence, s.c_max, s.contrast_offset, method=s.simulator)


def run_qwp_sweep(s):
    _require(s, ("qwp_angles", "single"), ("beam",), "qwp-sweep")
    angles = s.sweep if s.sweep_kind == "qwp_angles" else (s.source.qwp_angle,)
    table = Table(["theta_deg", "S_proj_Js_per_m3", "B_m11_exact_nT", "B_m11_closed_nT",
                   "C1", "C2", "C", "B_est_nT"])
    for theta in angles:
        s_proj, b_exact, b_closed = beam_point(s, replace(s.source, qwp_angle=theta))
        out = _measure(s, b_exact)
        # 12 significant digits undoes the deg -> rad -> deg rounding for display
        table.rows.append((float(f"{math.degrees(theta):.12g}"), s_proj, b_exact * NT, b_closed * NT,
                           out.c1, out.c2, out.c, out.b_est * NT))
    fit = sine_fit(np.asarray(angles), table.column("B_m11_exact_nT")) if len(angles) >= 4 else None
    if fit is not None:
        table.meta.update(amplitude_nT=fit.amplitude, offset_nT=fit.offset, phase_rad=fit.phase,
                          rms_residual_nT=fit.rms_residual, angle_offset_deg=math.degrees(fit.angle_offset))
    return table


def run_power_sweep(s):
    _require(s, ("powers", "single"), ("beam",), "power-sweep")
    powers = s.sweep if s.sweep_kind == "powers" else (s.source.power,)
    table = Table(["P_mW", "S_proj_Js_per_m3", "B_m11_nT", "C", "B_est_nT"])
    for p in powers:
        s_proj, b_exact, _ = beam_point(s, replace(s.source, power=p))
        out = _measure(s, b_exact)
        table.rows.append((p * 1e3, s_proj, b_exact * NT, out.c, out.b_est * NT))
    if len(powers) >= 2:
        fit = linear_fit(table.column("P_mW"), table.column("B_m11_nT"))
        table.meta.update(slope_nT_per_mW=fit.slope, intercept_nT=fit.intercept, r_squared=fit.r_squared)
    return table


def source_field(s, points):
    """Complex field of a guided or surface source at ``points`` (m) and its angular frequency."""
    src = s.source
    if s.source_kind == "spp":
        return spp_mode_field(src, points), const.omega_from_wavelength(src.wavelength)
    if s.source_kind == "slab":
        return slab_mix_field(src, s.slab_mix, points), const.omega_from_wavelength(src.wavelength)
    if s.source_kind == "fiber":
        return fiber_he11_field(src, points), const.omega_from_wavelength(src.wavelength)
    raise ScenarioError(f"source: no near-field model for {s.source_kind!r}")


def effective_field_map(s, points):
    """Closed-form effective field (T) for NV axes x, y, z and the scenario axis; shape ``(..., 4)``."""
    E, omega = source_field(s, points)
    spin = spin_density(E, omega, s.nv.eps_medium)
    coeff = float(closed_form_beff(1.0, s.nv, omega, delta=common_detuning(s.nv, omega)))
    out = np.empty(spin.shape[:-1] + (4,))
    out[..., :3] = coeff * spin
    out[..., 3] = coeff * (spin @ np.asarray(s.nv.axis))
    return out


def run_spatial_map(s):
    _require(s, ("grid",), ("spp", "slab", "fiber"), "map")
    pts = s.sweep.points()
    b = effective_field_map(s, pts) * NT
    flat_p = (pts * NM).reshape(-1, 3)
    flat_b = b.reshape(-1, 4)
    table = Table(["x_nm", "y_nm", "z_nm", "B_x_nT", "B_y_nT", "B_z_nT", "B_proj_nT"])
    table.rows = [tuple(p) + tuple(v) for p, v in zip(flat_p.tolist(), flat_b.tolist())]
    return table


def sine_fit(theta, values):
    """Least-squares ``A sin(2 theta + theta0) + B0`` through the linear form ``a sin 2theta + b cos 2theta + B0``."""
    theta = np.asarray(theta, dtype=float)
    values = np.asarray(values, dtype=float)
    if theta.shape != values.shape or theta.ndim != 1:
        raise ValueError("theta and values must be 1-D arrays of equal length")
    if theta.size < 4:
        raise ValueError(f"sine fit needs at least 4 points, got {theta.size}")
    if np.unique(theta).size != theta.size:
        raise ValueError("sine fit needs distinct angles")
    design = np.column_stack([np.sin(2 * theta), np.cos(2 * theta), np.ones_like(theta)])
    coef, _, rank, _ = np.linalg.lstsq(design, values, rcond=None)
    if rank < 3:
        raise ValueError("sine fit design matrix is rank deficient (angles do not span a period)")
    a, b, b0 = coef
    amp = math.hypot(a, b)
    phase = math.atan2(b, a) if amp > 0 else 0.0
    if phase < 0:
        phase += 2.0 * math.pi
    if phase >= 2.0 * math.pi:  # -tiny + 2 pi can round up to 2 pi
        phase = 0.0
    resid = values - design @ coef
    return SineFit(amp, float(b0), phase, float(np.sqrt(np.mean(resid**2))), phase / 2.0)


def linear_fit(x, y):
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if x.size < 2 or np.ptp(x) == 0:
        raise ValueError("linear fit needs at least two distinct abscissae")
    design = np.column_stack([x, np.ones_like(x)])
    (slope, intercept), *_ = np.linalg.lstsq(design, y, rcond=None)
    ss_res = float(np.sum((y - design @ (slope, intercept)) ** 2))
    ss_tot = float(np.sum((y - y.mean()) ** 2))
    r2 = 1.0 if ss_tot == 0 else 1.0 - ss_res / ss_tot
    return LinearFit(float(slope), float(intercept), r2)


def _fmt(v):
    if isinstance(v, (int, np.integer)) and not isinstance(v, bool):
        return str(int(v))
    if isinstance(v, (float, np.floating)):
        return "%.17g" % (v + 0.0)  # no "-0"
    return str(v)


def emit_csv(table, path):
    """Write ``table`` as CSV (header row, then rows in order, 17 significant digits)."""
    try:
        with open(path, "w", newline="", encoding="utf-8") as fh:
            w = csv.writer(fh, lineterminator="\r\n")
            w.writerow(table.columns)
            for row in table.rows:
                if len(row) != len(table.columns):
                    raise ValueError(f"{path}: row has {len(row)} fields, header has {len(table.columns)}")
                w.writerow([_fmt(v) for v in row])
    except OSError as exc:
        raise OSError(exc.errno, f"cannot write CSV: {exc.strerror}", str(path)) from exc


def read_csv(path):
    """Read a CSV written by ``emit_csv`` back into a ``Table`` of floats.

    Unreadable or malformed input raises ``ScenarioError`` (it is user input).
    """
    try:
        with open(path, newline="", encoding="utf-8") as fh:
            rows = list(csv.reader(fh))
    except OSError as exc:
        raise ScenarioError(f"{path}: cannot read CSV ({exc.strerror})") from exc
    if not rows:
        raise ScenarioError(f"{path}: empty CSV (no header)")
    try:
        data = [tuple(float(v) for v in r) for r in rows[1:]]
    except ValueError as exc:
        raise ScenarioError(f"{path}: non-numeric field ({exc})") from exc
    return Table(rows[0], data)
