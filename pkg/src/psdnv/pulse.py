"""XY8 measurement protocol on a two-level NV qubit.

The closed-form contrast algebra and an independent brute-force propagator,
plus the calibration and effective-field extraction applied to contrast data.

Timing: the sequence lasts ``8 N tau``. Instantaneous pi-pulses sit at
``tau/2 + j tau`` (j = 0 .. 8N-1), which splits the free evolution into 8N+1
intervals: interval 0 and interval 8N are half intervals, intervals 1 .. 8N-1
have length ``tau``. Target pulses of length ``tau'`` are centered in an interval.

- measurement1: even full intervals 2, 4, .., 8N-2 (both half intervals omitted)
- measurement2: odd intervals 1, 3, .., 8N-3 (the last one, 8N-1, omitted)
- calibration: both sets, each pulse ``tau'/2`` long

Each measurement therefore carries 4N-1 target pulses.
"""
from dataclasses import dataclass
import math

import numpy as np

from . import _kernels
from . import constants as const

XY8_AXES = ("x", "y", "x", "y", "y", "x", "y", "x")
SLOTS = ("measurement1", "measurement2", "calibration")


@dataclass(frozen=True)
class SequenceSpec:
    n_blocks: int = const.N_XY8
    tau: float = const.TAU_XY8
    tau_target: float = const.TAU_TARGET
    gamma: float = const.GAMMA_NV
    slot: str = "measurement1"
    mw_detuning: float = 0.0

    def __post_init__(self):
        if int(self.n_blocks) != self.n_blocks or self.n_blocks < 1:
            raise ValueError(f"n_blocks must be an integer >= 1, got {self.n_blocks}")
        if not 0 < self.tau_target <= self.tau / 2:
            raise ValueError(f"need 0 < tau_target <= tau/2, got tau_target={self.tau_target}, tau={self.tau}")
        if self.slot not in SLOTS:
            raise ValueError(f"slot must be one of {SLOTS}, got {self.slot!r}")

    @property
    def duration(self):
        return 8 * self.n_blocks * self.tau

    @property
    def n_target_pulses(self):
        return 4 * self.n_blocks - 1


def rotation_gate(axis, angle):
    """2x2 rotation about x, y or -y by ``angle`` (rad)."""
    c, s = math.cos(angle / 2.0), math.sin(angle / 2.0)
    if axis == "x":
        return np.array([[c, -1j * s], [-1j * s, c]])
    if axis == "y":
        return np.array([[c, -s], [s, c]], dtype=complex)
    if axis == "-y":
        return rotation_gate("y", -angle)
    raise ValueError(f"axis must be 'x', 'y' or '-y', got {axis!r}")


def accumulated_phase(b, seq):
    """Total target-beam phase ``(4N - 1) gamma B tau' / 2``."""
    return seq.n_target_pulses * seq.gamma * b * seq.tau_target / 2.0


def closed_form_contrast(phase, c_max):
    """``(C1, C2, C)`` for total phase ``phase``: ``sin^2(pi/4 -/+ phase) C_max`` and their difference."""
    if not 0 < c_max <= 1:
        raise ValueError(f"C_max must lie in (0, 1], got {c_max}")
    c1 = math.sin(math.pi / 4.0 - phase) ** 2 * c_max
    c2 = math.sin(math.pi / 4.0 + phase) ** 2 * c_max
    return c1, c2, -math.sin(2.0 * phase) * c_max


def pulse_times(seq):
    return seq.tau / 2.0 + seq.tau * np.arange(8 * seq.n_blocks)


def target_windows(seq, slot=None):
    """``(start, stop)`` of every target pulse for ``slot`` (defaults to ``seq.slot``)."""
    slot = slot or seq.slot
    last = 8 * seq.n_blocks - 1
    even = range(2, last, 2)
    odd = range(1, last - 1, 2)
    if slot == "measurement1":
        intervals, length = list(even), seq.tau_target
    elif slot == "measurement2":
        intervals, length = list(odd), seq.tau_target
    elif slot == "calibration":
        intervals, length = sorted(list(even) + list(odd)), seq.tau_target / 2.0
    else:
        raise ValueError(f"unknown slot {slot!r}")
    return [(k * seq.tau - length / 2.0, k * seq.tau + length / 2.0) for k in intervals]


@dataclass(frozen=True)
class FieldTimeline:
    """Piecewise-constant axial field: ``field[i]`` on ``[start[i], stop[i])``."""

    start: np.ndarray
    stop: np.ndarray
    field: np.ndarray

    def __post_init__(self):
        for name in ("start", "stop", "field"):
            object.__setattr__(self, name, np.ascontiguousarray(getattr(self, name), dtype=float))
        if not (self.start.shape == self.stop.shape == self.field.shape) or self.start.ndim != 1:
            raise ValueError("timeline arrays must be 1-D and of equal length")
        if np.any(self.stop <= self.start):
            raise ValueError("timeline segments must have positive length")
        gaps = np.nonzero(self.start[1:] != self.stop[:-1])[0]
        if gaps.size:
            i = gaps[0]
            raise ValueError(f"timeline gap or overlap between t={self.stop[i]!r} and t={self.start[i + 1]!r}")

    def check_covers(self, t0, t1):
        if self.start.size == 0 or self.start[0] > t0 or self.stop[-1] < t1:
            raise ValueError(f"timeline does not cover [{t0!r}, {t1!r}]")


def field_timeline(seq, b, slot=None):
    """Timeline with field ``b`` during the slot's target pulses and zero elsewhere."""
    edges, values = [0.0], []
    for t0, t1 in target_windows(seq, slot):
        edges += [t0, t1]
        values += [0.0, b]
    edges.append(seq.duration)
    values.append(0.0)
    return FieldTimeline(edges[:-1], edges[1:], values)


def brute_force_sequence(seq, timeline, max_step=None):
    """Propagate ``|0>`` through the full sequence; returns the final 2-component state.

    pi/2 about x, then 8N instantaneous XY8 pi-pulses with fine-step phase
    integration of ``gamma B(t) + mw_detuning`` in between, then pi/2 about -y
    (measurements) or x (calibration).
    """
    timeline.check_covers(0.0, seq.duration)
    if max_step is None:
        max_step = seq.tau_target / 100.0
    psi = np.array([1.0, 0.0], dtype=complex)
    psi = rotation_gate("x", math.pi / 2.0) @ psi
    pi_gates = {ax: rotation_gate(ax, math.pi) for ax in ("x", "y")}
    times = pulse_times(seq)
    t = 0.0
    for j, tp in enumerate(times):
        _kernels.free_evolve(psi, t, tp, timeline.start, timeline.stop, timeline.field,
                             seq.gamma, seq.mw_detuning, max_step)
        psi = pi_gates[XY8_AXES[j % 8]] @ psi
        t = tp
    _kernels.free_evolve(psi, t, seq.duration, timeline.start, timeline.stop, timeline.field,
                         seq.gamma, seq.mw_detuning, max_step)
    final_axis = "x" if seq.slot == "calibration" else "-y"
    return rotation_gate(final_axis, math.pi / 2.0) @ psi


def upper_population(psi):
    """Population of the ``|+-1>`` partner level."""
    return float(abs(psi[1]) ** 2)


def cmax_calibration(c1, c2, c_plus1):
    """``C_max = 2 (C^{+1} - (C1 + C2)/2)``."""
    c_max = 2.0 * (c_plus1 - 0.5 * (c1 + c2))
    if not c_max > 0:
        raise ValueError(f"calibration inconsistent: C_max = {c_max} <= 0")
    return c_max


def extract_beff(c, c_max, n_blocks, tau_target, gamma, small_angle=False):
    """Effective axial field (T) from the contrast difference ``C = C1 - C2``.

    ``-arcsin(C/C_max) / ((4N-1) gamma tau')``, or ``-C / ((4N-1) gamma tau' C_max``
    with ``small_angle``.
    """
    ratio = c / c_max
    if abs(ratio) > 1:
        raise ValueError(f"|C/C_max| = {abs(ratio)} exceeds 1")
    denom = (4 * n_blocks - 1) * gamma * tau_target
    return -(ratio if small_angle else math.asin(ratio)) / denom


@dataclass(frozen=True)
class MeasurementOutcome:
    c1: float
    c2: float
    c: float
    c_ave: float
    c_plus1: float
    c_max: float
    b_est: float


def simulate_measurement(b, seq, c_max=const.C_MAX, contrast_offset=0.0, method="brute_force"):
    """Run both measurements and the calibration for axial field ``b`` and extract ``B``.

    Contrast is modeled as ``c_max * P(+-1) + contrast_offset``; ``C_max`` is then
    recovered through the calibration, as it would be from data.
    """
    if method == "brute_force":
        pops = {}
        for slot in SLOTS:
            s = _with_slot(seq, slot)
            pops[slot] = upper_population(brute_force_sequence(s, field_timeline(s, b)))
        c1 = c_max * pops["measurement1"] + contrast_offset
        c2 = c_max * pops["measurement2"] + contrast_offset
        c_plus1 = c_max * pops["calibration"] + contrast_offset
    elif method == "closed_form":
        c1, c2, _ = closed_form_contrast(accumulated_phase(b, seq), c_max)
        c1 += contrast_offset
        c2 += contrast_offset
        c_plus1 = c_max + contrast_offset
    else:
        raise ValueError(f"method must be 'brute_force' or 'closed_form', got {method!r}")
    c = c1 - c2
    c_cal = cmax_calibration(c1, c2, c_plus1)
    return MeasurementOutcome(
        c1, c2, c, 0.5 * (c1 + c2), c_plus1, c_cal,
        extract_beff(c, c_cal, seq.n_blocks, seq.tau_target, seq.gamma),
    )


def _with_slot(seq, slot):
    return SequenceSpec(seq.n_blocks, seq.tau, seq.tau_target, seq.gamma, slot, seq.mw_detuning)
