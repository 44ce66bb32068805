import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from psdnv import _kernels
from psdnv import constants as const
from psdnv.pulse import (
    FieldTimeline, SequenceSpec, accumulated_phase, brute_force_sequence, closed_form_contrast,
    cmax_calibration, extract_beff, field_timeline, pulse_times, rotation_gate, simulate_measurement,
    target_windows, upper_population,
)

KET0 = np.array([1.0, 0.0], dtype=complex)


def with_slot(seq, slot):
    return SequenceSpec(seq.n_blocks, seq.tau, seq.tau_target, seq.gamma, slot, seq.mw_detuning)


@pytest.mark.parametrize("axis", ["x", "y", "-y"])
@pytest.mark.parametrize("angle", [0.3, math.pi / 2, math.pi, 2 * math.pi, -1.7])
def test_gates_are_unitary(axis, angle):
    u = rotation_gate(axis, angle)
    assert np.allclose(u.conj().T @ u, np.eye(2), atol=1e-12)
    assert abs(abs(np.linalg.det(u)) - 1) < 1e-12


def test_gate_examples():
    assert np.allclose(rotation_gate("x", 2 * math.pi), -np.eye(2), atol=1e-15)
    assert np.allclose(rotation_gate("y", math.pi / 2) @ KET0, [1 / math.sqrt(2), 1 / math.sqrt(2)], atol=1e-15)
    rx = rotation_gate("x", math.pi)
    assert np.allclose(rx @ rx, -np.eye(2), atol=1e-15)
    assert np.allclose(rotation_gate("x", 0.4) @ rotation_gate("x", 0.5), rotation_gate("x", 0.9), atol=1e-15)
    assert np.allclose(rotation_gate("-y", 0.7), rotation_gate("y", -0.7))
    with pytest.raises(ValueError):
        rotation_gate("z", 1.0)


def test_phase_examples():
    seq = SequenceSpec(n_blocks=4, tau_target=1e-6)
    assert accumulated_phase(0.0, seq) == 0.0
    per_pulse = const.GAMMA_NV * 10e-9 * 1e-6 / 2
    assert per_pulse == pytest.approx(8.796e-4, rel=1e-3)
    assert accumulated_phase(10e-9, seq) == pytest.approx(15 * per_pulse, rel=1e-15)
    assert accumulated_phase(10e-9, seq) == pytest.approx(1.319e-2, rel=1e-3)
    seq8 = SequenceSpec(n_blocks=8, tau_target=1e-6)
    assert accumulated_phase(1e-8, seq8) / accumulated_phase(1e-8, seq) == pytest.approx(31 / 15, rel=1e-15)


def test_contrast_examples():
    assert closed_form_contrast(0.0, 0.2) == pytest.approx((0.1, 0.1, 0.0))
    c1, c2, c = closed_form_contrast(math.pi / 4, 0.2)
    assert c1 == pytest.approx(0, abs=1e-17) and c2 == pytest.approx(0.2) and c == pytest.approx(-0.2)
    rng = np.random.default_rng(3)
    for phi in rng.uniform(-3, 3, 100):
        c1, c2, c = closed_form_contrast(phi, 0.2)
        assert c1 - c2 == pytest.approx(c, abs=1e-15)
    with pytest.raises(ValueError):
        closed_form_contrast(0.1, 0.0)


def test_sequence_validation():
    with pytest.raises(ValueError):
        SequenceSpec(n_blocks=0)
    with pytest.raises(ValueError):
        SequenceSpec(tau=1e-6, tau_target=0.6e-6)
    with pytest.raises(ValueError):
        SequenceSpec(slot="other")


@pytest.mark.parametrize("n", [1, 2, 4, 6])
def test_window_layout(n):
    seq = SequenceSpec(n_blocks=n)
    w1 = target_windows(seq, "measurement1")
    w2 = target_windows(seq, "measurement2")
    assert len(w1) == len(w2) == 4 * n - 1 == seq.n_target_pulses
    assert len(target_windows(seq, "calibration")) == 8 * n - 2
    pulses = pulse_times(seq)
    assert len(pulses) == 8 * n
    for t0, t1 in w1 + w2:
        assert t1 - t0 == pytest.approx(seq.tau_target)
        # windows sit strictly between pi-pulses
        assert not np.any((pulses > t0) & (pulses < t1))
        assert 0 < t0 and t1 < seq.duration


def test_timeline_validation():
    with pytest.raises(ValueError, match="gap"):
        FieldTimeline([0.0, 2.0], [1.0, 3.0], [0.0, 0.0])
    with pytest.raises(ValueError):
        FieldTimeline([0.0], [0.0], [1.0])
    seq = SequenceSpec()
    short = FieldTimeline([0.0], [seq.duration / 2], [0.0])
    with pytest.raises(ValueError, match="cover"):
        brute_force_sequence(seq, short)


def test_zero_field_gives_half(backend):
    seq = SequenceSpec()
    psi = brute_force_sequence(seq, field_timeline(seq, 0.0))
    assert upper_population(psi) == pytest.approx(0.5, abs=1e-12)
    assert abs(np.vdot(psi, psi) - 1) < 1e-12


def test_constant_field_matches_closed_form(backend):
    seq = SequenceSpec()
    b = 37e-9
    phi = accumulated_phase(b, seq)
    p1 = upper_population(brute_force_sequence(seq, field_timeline(seq, b)))
    p2 = upper_population(brute_force_sequence(with_slot(seq, "measurement2"), field_timeline(
        with_slot(seq, "measurement2"), b)))
    assert p1 == pytest.approx(math.sin(math.pi / 4 - phi) ** 2, abs=1e-10)
    assert p2 == pytest.approx(math.sin(math.pi / 4 + phi) ** 2, abs=1e-10)


def test_calibration_cancels_target(backend):
    seq = SequenceSpec(slot="calibration")
    for b in (0.0, 50e-9, -2e-6):
        assert upper_population(brute_force_sequence(seq, field_timeline(seq, b))) == pytest.approx(1.0, abs=1e-12)


def test_random_oracle_equivalence(backend):
    rng = np.random.default_rng(2024)
    for _ in range(50):
        n = int(rng.integers(1, 7))
        tau_t = rng.uniform(0.2e-6, 1e-6)
        seq = SequenceSpec(n_blocks=n, tau=2e-6, tau_target=tau_t)
        b = rng.uniform(-200e-9, 200e-9)
        c1, c2, _ = closed_form_contrast(accumulated_phase(b, seq), 1.0)
        for slot, expected in (("measurement1", c1), ("measurement2", c2), ("calibration", 1.0)):
            s = with_slot(seq, slot)
            psi = brute_force_sequence(s, field_timeline(s, b))
            assert abs(np.vdot(psi, psi) - 1) < 1e-12
            assert upper_population(psi) == pytest.approx(expected, abs=1e-9)


def test_backends_agree():
    seq = SequenceSpec(n_blocks=3, tau_target=0.7e-6)
    tl = field_timeline(seq, 80e-9)
    results = {}
    for name in _kernels.available_backends():
        previous = _kernels.set_backend(name)
        try:
            results[name] = brute_force_sequence(seq, tl)
        finally:
            _kernels.set_backend(previous)
    ref = results["python"]
    for psi in results.values():
        assert np.allclose(psi, ref, rtol=0, atol=1e-13)


def test_step_count_respects_max_step(backend):
    psi = np.array([1.0, 0.0], dtype=complex)
    start = np.array([0.0, 1e-6]); stop = np.array([1e-6, 3e-6]); field = np.array([0.0, 1e-6])
    steps = _kernels.free_evolve(psi, 0.0, 3e-6, start, stop, field, const.GAMMA_NV, 0.0, 1e-8)
    # ceil of a float ratio may add one step; none may exceed max_step
    assert 300 <= steps <= 302
    assert psi[0] == pytest.approx(np.exp(-0.5j * const.GAMMA_NV * 1e-6 * 2e-6), abs=1e-12)


def test_mw_detuning_is_refocused(backend):
    b = 20e-9
    base = simulate_measurement(b, SequenceSpec())
    for dw in (2 * math.pi * 1e3, 2 * math.pi * 100e3, -2 * math.pi * 37e3):
        out = simulate_measurement(b, SequenceSpec(mw_detuning=dw))
        assert abs(out.c - base.c) <= 1e-6 * abs(base.c)


def test_calibration_arithmetic():
    assert cmax_calibration(0.10, 0.10, 0.20) == pytest.approx(0.20)
    for c_max in (0.203, 0.192):
        c1, c2, _ = closed_form_contrast(0.01, c_max)
        assert cmax_calibration(c1, c2, c_max) == pytest.approx(c_max, rel=1e-12)
    with pytest.raises(ValueError, match="calibration inconsistent"):
        cmax_calibration(0.1, 0.1, 0.05)


def test_extract_examples():
    assert extract_beff(0.0, 0.2, 4, 1e-6, const.GAMMA_NV) == 0
    with pytest.raises(ValueError):
        extract_beff(0.3, 0.2, 4, 1e-6, const.GAMMA_NV)
    ratio = 0.077
    exact = extract_beff(ratio * 0.2, 0.2, 4, 1e-6, const.GAMMA_NV)
    linear = extract_beff(ratio * 0.2, 0.2, 4, 1e-6, const.GAMMA_NV, small_angle=True)
    assert abs(exact - linear) / abs(exact) < 1e-3


@given(st.floats(-1.0, 1.0).map(lambda x: x * math.pi / 4 * 0.999))
def test_extract_inverts_closed_form(phi):
    seq = SequenceSpec()
    b = 2 * phi / (seq.n_target_pulses * seq.gamma * seq.tau_target)
    _, _, c = closed_form_contrast(accumulated_phase(b, seq), 0.2)
    got = extract_beff(c, 0.2, seq.n_blocks, seq.tau_target, seq.gamma)
    assert got == pytest.approx(b, rel=1e-12, abs=1e-30)


@pytest.mark.parametrize("b", [1e-9, 10e-9, 50e-9, -25e-9])
def test_simulate_extract_roundtrip(b, backend):
    out = simulate_measurement(b, SequenceSpec(), c_max=0.2)
    assert out.b_est == pytest.approx(b, rel=1e-9)
    assert out.c == pytest.approx(out.c1 - out.c2, abs=1e-17)
    assert abs(out.c) <= out.c_max
    assert out.c_max == pytest.approx(0.2, rel=1e-12)


@settings(max_examples=20, deadline=None)
@given(st.floats(-0.05, 0.05))
def test_common_offset_cancels(offset):
    a = simulate_measurement(30e-9, SequenceSpec(), contrast_offset=0.0)
    b = simulate_measurement(30e-9, SequenceSpec(), contrast_offset=offset)
    assert b.c == pytest.approx(a.c, abs=1e-15)
    assert b.b_est == pytest.approx(a.b_est, rel=1e-12)


def test_closed_form_method_matches_brute_force():
    a = simulate_measurement(42e-9, SequenceSpec(), method="closed_form")
    b = simulate_measurement(42e-9, SequenceSpec(), method="brute_force")
    assert a.c == pytest.approx(b.c, rel=1e-9)
    with pytest.raises(ValueError):
        simulate_measurement(1e-9, SequenceSpec(), method="other")


def test_python_fallback_when_extension_missing():
    import subprocess
    import sys

    code = ("import sys; sys.modules['psdnv._ckernels'] = None\n"
            "from psdnv import _kernels\n"
            "from psdnv.pulse import SequenceSpec, simulate_measurement\n"
            "assert not _kernels.HAVE_COMPILED and _kernels.get_backend() == 'python'\n"
            "assert abs(simulate_measurement(1e-8, SequenceSpec()).b_est - 1e-8) < 1e-17\n")
    proc = subprocess.run([sys.executable, "-c", code], capture_output=True, text=True)
    assert proc.returncode == 0, proc.stderr
    with pytest.raises(ValueError, match="unknown or unavailable"):
        _kernels.set_backend("fortran")
