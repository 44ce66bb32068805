import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from hypothesis.extra import numpy as hnp
from scipy import constants as sc

from psdnv import constants as const
from psdnv.fields import E_LEFT, E_RIGHT, E_X, BeamParams, paraxial_gaussian_field, qwp_jones
from psdnv.stark import (
    LEVELS, NearResonanceError, NVParams, StarkShifts, axis_from_angle, beff_constant, closed_form_beff,
    common_detuning, detunings, dipole_from_lifetime, effective_field, excited_levels, frame_weights,
    nv_frame_polarization_weights, projected_spin, qubit_effective_fields_per_pol, stark_shifts,
)

NV = NVParams()
OMEGA_800 = const.omega_from_wavelength(800e-9)

# Frozen: B_m11 at the focus of the default 4 mW x 0.78, NA 0.65, 800 nm, theta = pi/4 beam.
# Cross-checked by the independent two-level formula in test_b_m11_independent_route and by
# the closed form (agreement ~3e-9).
B_M11_FOCUS = -8.38004990931313e-08


def random_unit(v):
    v = np.asarray(v, dtype=complex)
    return v / np.linalg.norm(v)


def test_levels_zero_field():
    lv = excited_levels(NVParams(b_bias=0.0))
    assert lv.A_up == lv.A_down and lv.E_up == lv.E_down
    assert lv.E_R == lv.E_L == -2 * NV.delta_es
    assert lv.A_up / (2 * math.pi) == pytest.approx(5.5e9 + 1.42e9 / 3, rel=1e-14)


@given(st.floats(0, 0.05))
def test_levels_trace_and_zeeman(b):
    lv = excited_levels(NVParams(b_bias=b))
    trace = sum(lv[name] for name in LEVELS)
    assert abs(trace) <= 1e-15 * (NV.lambda_z + 2 * NV.gamma * b) * 6
    assert lv.A_up - lv.A_down == pytest.approx(2 * NV.gamma * b, rel=1e-12, abs=1e-3)


def test_dipole_scalings():
    d = dipole_from_lifetime(15e-9, NV.omega_ge)
    assert dipole_from_lifetime(60e-9, NV.omega_ge) == pytest.approx(d / 2, rel=1e-15)
    assert dipole_from_lifetime(1e30, NV.omega_ge) < 1e-47
    expected = math.sqrt(3 * math.pi * sc.hbar * sc.epsilon_0 * sc.c**3 / (NV.omega_ge**3 * 15e-9))
    assert d == pytest.approx(expected, rel=1e-15)
    with pytest.raises(ValueError):
        dipole_from_lifetime(0.0, NV.omega_ge)


def test_optical_detuning_at_800nm():
    d = detunings(NV, OMEGA_800)
    optical = 2 * math.pi * sc.c * (1 / 800e-9 - 1 / 637e-9)
    assert optical / (2 * math.pi) == pytest.approx(-95.8912e12, rel=1e-6)
    assert common_detuning(NV, OMEGA_800) == pytest.approx(optical - NV.delta_es, rel=1e-14)
    assert d[(1, "A_up")] == pytest.approx(optical - NV.delta_es - NV.lambda_z, rel=1e-12)
    assert all(v < 0 for v in d.values())


@given(st.floats(0, 0.01))
def test_detuning_bias_cancellation(b):
    d = detunings(NVParams(b_bias=b), OMEGA_800)
    d0 = detunings(NVParams(b_bias=0.0), OMEGA_800)
    assert d[(-1, "A_down")] == d0[(-1, "A_down")]
    assert d[(1, "A_up")] == d0[(1, "A_up")]


def test_near_resonance_guard():
    lv = excited_levels(NV)
    omega0 = NV.omega_ge + lv.E_L + NV.delta_gs
    with pytest.raises(NearResonanceError, match="near-resonant"):
        detunings(NV, omega0)
    with pytest.raises(NearResonanceError):
        stark_shifts(NV, NV.omega_ge + lv.A_up + 5 * NV.linewidth, 1.0)


def test_zero_intensity_and_validation():
    sh = stark_shifts(NV, OMEGA_800, 0.0)
    assert all(v == 0 for v in vars(sh).values())
    with pytest.raises(ValueError):
        stark_shifts(NV, OMEGA_800, -1.0)


@settings(max_examples=50)
@given(st.floats(0, 10e-3), st.booleans())
def test_cross_symmetry(b, width):
    sh = stark_shifts(NVParams(b_bias=b), OMEGA_800, 1e12, include_linewidth=width)
    assert sh[(-1, "L")] == sh[(1, "R")]
    assert sh[(-1, "R")] == sh[(1, "L")]


def test_shift_linearity_and_sign():
    a = stark_shifts(NV, OMEGA_800, 1e12)
    b = stark_shifts(NV, OMEGA_800, 2e12)
    for k in vars(a):
        assert getattr(b, k) == 2 * getattr(a, k)
        assert getattr(a, k) < 0
    blue = stark_shifts(NV, const.omega_from_wavelength(550e-9), 1e12)
    assert all(v > 0 for v in vars(blue).values())


def test_linewidth_term_is_tiny_here():
    a = stark_shifts(NV, OMEGA_800, 1e12)
    b = stark_shifts(NV, OMEGA_800, 1e12, include_linewidth=True)
    assert b.plus_L == pytest.approx(a.plus_L, rel=1e-14)
    assert abs(b.plus_L) < abs(a.plus_L)


def test_per_pol_fields():
    equal = StarkShifts(*([1.0] * 6))
    per = qubit_effective_fields_per_pol(equal, NV.gamma)
    assert per["L"].b01 == per["L"].b_m10 == per["L"].b_m11 == 0
    per = qubit_effective_fields_per_pol(stark_shifts(NV, OMEGA_800, 1e12), NV.gamma)
    assert per["L"].b_m11 == -per["R"].b_m11
    # red detuning: LCP drives the farther E_up line from +1, so B_m11 for LCP is negative
    assert per["L"].b_m11 < 0


def test_frame_weights_closed_form_examples():
    assert nv_frame_polarization_weights(E_LEFT, 0.0) == pytest.approx((1, 0, 0), abs=1e-15)
    assert nv_frame_polarization_weights(E_X, 0.0) == pytest.approx((0.5, 0.5, 0), abs=1e-15)
    phi = math.radians(54.7)
    wl, wr, wz = nv_frame_polarization_weights(E_LEFT, phi)
    assert wl == pytest.approx(0.25 * (math.cos(phi) + 1) ** 2, rel=1e-14)
    assert wr == pytest.approx(0.25 * (math.cos(phi) - 1) ** 2, rel=1e-14)
    assert wl + wr + wz == pytest.approx(1.0, abs=1e-12)
    with pytest.raises(ValueError):
        nv_frame_polarization_weights(2 * E_LEFT, phi)


@given(hnp.arrays(float, 6, elements=st.floats(-1, 1)).filter(lambda v: np.linalg.norm(v) > 1e-3),
       st.floats(0, math.pi))
def test_frame_weights_two_routes_agree(v, phi):
    e = random_unit(v[:3] + 1j * v[3:])
    closed = nv_frame_polarization_weights(e, phi)
    generic = frame_weights(e, axis_from_angle(phi))
    assert sum(closed) == pytest.approx(1.0, abs=1e-12)
    assert closed == pytest.approx(generic, abs=1e-12)


@given(st.floats(-math.pi, math.pi), st.floats(0, math.pi))
def test_weight_difference_is_spin_projection(theta, phi):
    e = qwp_jones(theta)
    wl, wr, _ = frame_weights(e, axis_from_angle(phi))
    assert wl - wr == pytest.approx(math.sin(2 * theta) * math.cos(phi), abs=1e-12)


def test_nv_params_axis_resolution():
    assert NV.phi == pytest.approx(math.radians(54.7))
    assert NV.axis[2] == pytest.approx(math.cos(NV.phi), abs=1e-15)
    custom = NVParams(axis=(0.0, 0.0, 1.0))
    assert custom.phi == 0.0
    with pytest.raises(ValueError):
        NVParams(axis=(0.0, 0.0, 2.0))
    with pytest.raises(ValueError):
        NVParams(phi=0.3, axis=(0.0, 0.0, 1.0))
    with pytest.raises(ValueError):
        NVParams(tau=0.0)


def test_b_m11_at_focus_frozen():
    beam = BeamParams()
    e = paraxial_gaussian_field(beam, (0, 0, 0))
    assert effective_field(NV, e, beam.omega).b_m11 == pytest.approx(B_M11_FOCUS, rel=1e-12)


def test_b_m11_independent_route():
    # Two-level bookkeeping: only the +1 -> E_up / A_up lines matter for B_m11.
    e_sq = BeamParams().peak_field_sq
    optical = OMEGA_800 - NV.omega_ge
    d_e, d_a = optical - (NV.delta_es - NV.lambda_z), optical - (NV.delta_es + NV.lambda_z)
    pref = NV.d0**2 * e_sq / (2 * sc.hbar**2)
    b_circ = (pref / d_e - pref / d_a) / (2 * NV.gamma)
    expected = b_circ * math.sin(2 * math.pi / 4) * math.cos(NV.phi)
    assert expected == pytest.approx(B_M11_FOCUS, rel=1e-12)


def test_linear_polarization_aligned_axis():
    nv = NVParams(phi=0.0)
    f = effective_field(nv, 1e6 * E_X, OMEGA_800)
    per = qubit_effective_fields_per_pol(stark_shifts(nv, OMEGA_800, 1e12), nv.gamma)
    assert f.b_m11 == pytest.approx(0.0, abs=1e-25)
    assert f.b01 == pytest.approx(0.5 * (per["L"].b01 + per["R"].b01), rel=1e-13)


def test_effective_field_zero_and_power_doubling():
    assert effective_field(NV, np.zeros(3), OMEGA_800).b_m11 == 0
    e = 1e6 * qwp_jones(0.3)
    assert effective_field(NV, math.sqrt(2) * e, OMEGA_800).b_m11 == pytest.approx(
        2 * effective_field(NV, e, OMEGA_800).b_m11, rel=1e-14)


def test_theta_sweep_odd_and_periodic():
    thetas = np.linspace(-1.5, 1.5, 11)
    b = np.array([effective_field(NV, 1e6 * qwp_jones(t), OMEGA_800).b_m11 for t in thetas])
    b_neg = np.array([effective_field(NV, 1e6 * qwp_jones(-t), OMEGA_800).b_m11 for t in thetas])
    b_pi = np.array([effective_field(NV, 1e6 * qwp_jones(t + math.pi), OMEGA_800).b_m11 for t in thetas])
    scale = np.abs(b).max()
    assert np.allclose(b_neg, -b, atol=1e-12 * scale)
    assert np.allclose(b_pi, b, atol=1e-12 * scale)
    amp = effective_field(NV, 1e6 * qwp_jones(math.pi / 4), OMEGA_800).b_m11
    assert np.allclose(b, amp * np.sin(2 * thetas), rtol=0, atol=1e-12 * scale)


def test_sign_follows_spin_projection():
    for theta in (0.3, -0.3, 1.2, 2.0):
        e = 1e6 * qwp_jones(theta)
        s = projected_spin(NV, e, OMEGA_800)
        assert np.sign(effective_field(NV, e, OMEGA_800).b_m11) == -np.sign(s)


def test_closed_form_scalings():
    assert closed_form_beff(0.0, NV, OMEGA_800) == 0
    d = common_detuning(NV, OMEGA_800)
    assert closed_form_beff(1.0, NV, OMEGA_800, 2 * d) == pytest.approx(closed_form_beff(1.0, NV, OMEGA_800, d) / 4,
                                                                       rel=1e-15)
    with pytest.raises(ValueError):
        closed_form_beff(1.0, NV, OMEGA_800, 0.0)
    lam0 = 800e-9
    assert beff_constant(NV, OMEGA_800) / (lam0 * d**2) == pytest.approx(
        float(closed_form_beff(1.0, NV, OMEGA_800)), rel=1e-6)


def test_closed_form_vs_exact_at_800nm():
    e = paraxial_gaussian_field(BeamParams(), (0, 0, 0))
    cf = float(closed_form_beff(projected_spin(NV, e, OMEGA_800), NV, OMEGA_800))
    assert abs(cf - B_M11_FOCUS) / abs(B_M11_FOCUS) < 2e-2
    assert abs(cf - B_M11_FOCUS) / abs(B_M11_FOCUS) < 1e-8


@pytest.mark.parametrize("k", [-1000, -100, -50, -20, -10, 10, 50])
def test_closed_form_deviation_is_lambda_over_delta_squared(k):
    # exact ~ 1/(D - lz) - 1/(D + lz) = 2 lz/(D^2 - lz^2); closed form drops lz^2
    omega0 = NV.omega_ge + NV.delta_es + k * NV.lambda_z
    e = 1e6 * qwp_jones(math.pi / 4)
    exact = effective_field(NV, e, omega0).b_m11
    closed = float(closed_form_beff(projected_spin(NV, e, omega0), NV, omega0))
    assert abs(closed - exact) / abs(exact) == pytest.approx(1.0 / k**2, rel=1e-6)
    if abs(k) >= 50:
        assert abs(closed - exact) / abs(exact) < 0.02
    assert abs(closed - exact) / abs(exact) < 0.2
