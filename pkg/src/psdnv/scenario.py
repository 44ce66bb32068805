"""JSON scenario documents: parsing, defaulting, validation and unit conversion.

A document has the sections ``source`` (exactly one of ``beam``, ``spp``, ``slab``,
``fiber``), ``nv``, ``sequence``, ``position_nm`` and ``sweep`` (exactly one of
``qwp_angles_deg``, ``qwp_angles``, ``powers_mW``, ``grid``, ``single``).
Human units (nm, mW, degrees, GHz, us) are converted to SI here and nowhere else.
The fully defaulted document is kept on the ``Scenario`` so that saving and
reloading reproduces it exactly.
"""
from dataclasses import dataclass
import copy
import json
import math

import numpy as np

from . import constants as const
from .fields import BeamParams, FiberParams, ModeComponent, SlabMix, SlabParams, SppParams
from .pulse import SequenceSpec
from .stark import NVParams

SOURCES = ("beam", "spp", "slab", "fiber")
SWEEPS = ("qwp_angles_deg", "qwp_angles", "powers_mW", "grid", "single")
PLANES = {"xy": (0, 1, 2), "xz": (0, 2, 1), "yz": (1, 2, 0)}


DEFAULTS = {
    "beam": {
        "wavelength_nm": 800.0,
        "power_mW": 4.0,
        "transmission": 0.78,
        "na": 0.65,
        "focus_offset_nm": 0.0,
        "qwp_angle_deg": 45.0,
        "ellipticity": 1.0,
        "transverse_spin_fraction": 0.0,
        "transverse_spin_axis": [1.0, 0.0, 0.0],
    },
    "spp": {
        "eps_metal": [-24.1, 1.47],
        "eps_dielectric": 1.0,
        "wavelength_nm": 800.0,
        "direction": 1,
        "amplitude_V_per_m": 1e6,
    },
    "slab": {
        "n_core": 2.4,
        "n_clad": 1.0,
        "half_thickness_nm": 100.0,
        "wavelength_nm": 800.0,
        "amplitude_V_per_m": 1e6,
        "modes": [
            {"pol": "TE", "order": 0, "amplitude": 1.0, "phase_deg": 0.0},
            {"pol": "TM", "order": 0, "amplitude": 0.5, "phase_deg": 90.0},
        ],
    },
    "fiber": {
        "n_core": 1.46,
        "n_clad": 1.44,
        "radius_nm": 2500.0,
        "wavelength_nm": 800.0,
        "amplitude_V_per_m": 1e6,
    },
    "nv": {
        "lambda_z_GHz": 5.5,
        "delta_es_GHz": 1.42 / 3.0,
        "delta_gs_GHz": 2.87,
        "zpl_nm": 637.0,
        "gamma_GHz_per_T": 28.0,
        "lifetime_ns": 15.0,
        "b_bias_mT": 1.1,
        "phi_deg": 54.7,
        "axis": None,
        "eps_r": const.EPS_R_DIAMOND,
    },
    "sequence": {
        "n_blocks": 4,
        "tau_us": 2.0,
        "tau_target_us": 1.0,
        "mw_detuning_kHz": 0.0,
        "c_max": 0.2,
        "contrast_offset": 0.0,
        "simulator": "brute_force",
    },
    "mode_component": {"pol": "TE", "order": 0, "amplitude": 1.0, "phase_deg": 0.0},
    "qwp_angles": {"start_deg": 0.0, "stop_deg": 180.0, "count": 24},
    "grid": {"plane": "xz", "u_nm": [-500.0, 500.0], "v_nm": [10.0, 510.0], "resolution": [50, 50], "offset_nm": 0.0},
}


def _ghz(v):
    return v * 1e9 * const.TWO_PI


class ScenarioError(ValueError):
    """Invalid scenario document; the message starts with the offending key path."""


@dataclass(frozen=True)
class GridSpec:
    plane: str
    u_range: tuple
    v_range: tuple
    resolution: tuple
    offset: float

    def points(self):
        """Grid positions (m), shape ``(nv, nu, 3)``; rows run along the second plane axis."""
        iu, iv, iw = PLANES[self.plane]
        u = np.linspace(*self.u_range, self.resolution[0])
        v = np.linspace(*self.v_range, self.resolution[1])
        uu, vv = np.meshgrid(u, v)
        pts = np.empty(uu.shape + (3,))
        pts[..., iu] = uu
        pts[..., iv] = vv
        pts[..., iw] = self.offset
        return pts


@dataclass(frozen=True)
class Scenario:
    source_kind: str
    source: object
    nv: NVParams
    sequence: SequenceSpec
    c_max: float
    contrast_offset: float
    simulator: str
    position: tuple
    sweep_kind: str
    sweep: object
    document: dict
    slab_mix: SlabMix = None

    def __eq__(self, other):
        return isinstance(other, Scenario) and self.document == other.document

    __hash__ = None


class _Section:
    """Cursor over one mapping in the document: typed reads with defaults, then unknown-key check."""

    def __init__(self, data, path, defaults):
        if not isinstance(data, dict):
            raise ScenarioError(f"{path}: expected an object, got {type(data).__name__}")
        self.data, self.path, self.defaults = data, path, defaults
        unknown = sorted(set(data) - set(defaults))
        if unknown:
            raise ScenarioError(f"{path}.{unknown[0]}: unknown key (allowed: {', '.join(sorted(defaults))})")
        self.resolved = {}

    def _raw(self, key):
        val = self.data.get(key, copy.deepcopy(self.defaults[key]))
        self.resolved[key] = val
        return val

    def err(self, key, msg):
        return ScenarioError(f"{self.path}.{key}: {msg}")

    def number(self, key, lo=None, hi=None, lo_open=False, hi_open=False, integer=False):
        val = self._raw(key)
        if isinstance(val, bool) or not isinstance(val, (int, float)) or not math.isfinite(val):
            raise self.err(key, f"expected a finite number, got {val!r}")
        if integer and int(val) != val:
            raise self.err(key, f"expected an integer, got {val!r}")
        if lo is not None and (val < lo or (lo_open and val == lo)):
            raise self.err(key, f"must be {'>' if lo_open else '>='} {lo}, got {val!r}")
        if hi is not None and (val > hi or (hi_open and val == hi)):
            raise self.err(key, f"must be {'<' if hi_open else '<='} {hi}, got {val!r}")
        return int(val) if integer else float(val)

    def choice(self, key, options):
        val = self._raw(key)
        if val not in options:
            raise self.err(key, f"must be one of {list(options)}, got {val!r}")
        return val

    def vector(self, key, length, allow_none=False):
        val = self._raw(key)
        if val is None and allow_none:
            return None
        if (not isinstance(val, list) or len(val) != length
                or not all(isinstance(v, (int, float)) and not isinstance(v, bool) and math.isfinite(v) for v in val)):
            raise self.err(key, f"expected a list of {length} finite numbers, got {val!r}")
        return tuple(float(v) for v in val)


def _single_key(data, path, options):
    if not isinstance(data, dict):
        raise ScenarioError(f"{path}: expected an object")
    keys = list(data)
    if len(keys) != 1 or keys[0] not in options:
        raise ScenarioError(f"{path}: expected exactly one of {list(options)}, got {keys}")
    return keys[0]


def _wrap(path, fn):
    try:
        return fn()
    except ScenarioError:
        raise
    except ValueError as exc:
        raise ScenarioError(f"{path}: {exc}") from exc


def _parse_beam(data, path):
    s = _Section(data, path, DEFAULTS["beam"])
    wl = s.number("wavelength_nm", lo=0, lo_open=True)
    power = s.number("power_mW", lo=0)
    trans = s.number("transmission", lo=0, hi=1, lo_open=True)
    na = s.number("na", lo=0, hi=1, lo_open=True, hi_open=True)
    focus = s.number("focus_offset_nm")
    theta = s.number("qwp_angle_deg")
    ell = s.number("ellipticity", lo=0, lo_open=True)
    frac = s.number("transverse_spin_fraction", lo=0)
    axis = s.vector("transverse_spin_axis", 3)
    if not any(axis):
        raise s.err("transverse_spin_axis", "must be nonzero")
    beam = _wrap(path, lambda: BeamParams(
        wavelength=wl / 1e9, power=power / 1e3, transmission=trans, na=na,
        focus_offset=focus / 1e9, qwp_angle=math.radians(theta), ellipticity=ell,
        transverse_spin_fraction=frac, transverse_spin_axis=axis,
    ))
    return beam, s.resolved


def _parse_spp(data, path):
    s = _Section(data, path, DEFAULTS["spp"])
    em = s.vector("eps_metal", 2)
    ed = s.number("eps_dielectric", lo=0, lo_open=True)
    wl = s.number("wavelength_nm", lo=0, lo_open=True)
    direction = s.choice("direction", (1, -1))
    amp = s.number("amplitude_V_per_m", lo=0)
    spp = _wrap(path, lambda: SppParams(complex(*em), ed, wl / 1e9, direction, amp))
    return spp, s.resolved


def _parse_slab(data, path):
    s = _Section(data, path, DEFAULTS["slab"])
    n1 = s.number("n_core", lo=1)
    n2 = s.number("n_clad", lo=1)
    a = s.number("half_thickness_nm", lo=0, lo_open=True)
    wl = s.number("wavelength_nm", lo=0, lo_open=True)
    amp = s.number("amplitude_V_per_m", lo=0)
    modes_raw = s._raw("modes")
    if not isinstance(modes_raw, list) or not modes_raw:
        raise s.err("modes", "expected a non-empty list of mode objects")
    comps, resolved_modes = [], []
    for i, m in enumerate(modes_raw):
        ms = _Section(m, f"{path}.modes[{i}]", DEFAULTS["mode_component"])
        pol = ms.choice("pol", ("TE", "TM"))
        order = ms.number("order", lo=0, integer=True)
        mamp = ms.number("amplitude")
        ph = ms.number("phase_deg")
        comps.append(ModeComponent(pol, order, mamp, math.radians(ph)))
        resolved_modes.append(ms.resolved)
    s.resolved["modes"] = resolved_modes
    slab = _wrap(path, lambda: SlabParams(n1, n2, a / 1e9, wl / 1e9, comps[0].order, amp))
    return slab, SlabMix(tuple(comps)), s.resolved


def _parse_fiber(data, path):
    s = _Section(data, path, DEFAULTS["fiber"])
    n1 = s.number("n_core", lo=1)
    n2 = s.number("n_clad", lo=1)
    a = s.number("radius_nm", lo=0, lo_open=True)
    wl = s.number("wavelength_nm", lo=0, lo_open=True)
    amp = s.number("amplitude_V_per_m", lo=0)
    fiber = _wrap(path, lambda: FiberParams(n1, n2, a / 1e9, wl / 1e9, amp))
    return fiber, s.resolved


def _parse_nv(data, path):
    s = _Section(data, path, DEFAULTS["nv"])
    kw = dict(
        lambda_z=_ghz(s.number("lambda_z_GHz", lo=0, lo_open=True)),
        delta_es=_ghz(s.number("delta_es_GHz", lo=0, lo_open=True)),
        delta_gs=_ghz(s.number("delta_gs_GHz", lo=0, lo_open=True)),
        omega_ge=const.omega_from_wavelength(s.number("zpl_nm", lo=0, lo_open=True) / 1e9),
        gamma=_ghz(s.number("gamma_GHz_per_T", lo=0, lo_open=True)),
        tau=s.number("lifetime_ns", lo=0, lo_open=True) / 1e9,
        b_bias=s.number("b_bias_mT") / 1e3,
        eps_medium=s.number("eps_r", lo=0, lo_open=True) * const.EPS0,
    )
    phi_given = "phi_deg" in data
    phi = math.radians(s.number("phi_deg"))
    axis = s.vector("axis", 3, allow_none=True)
    if axis is not None:
        norm = math.sqrt(sum(v * v for v in axis))
        if norm == 0:
            raise s.err("axis", "must be nonzero")
        axis = tuple(v / norm for v in axis)
        if not phi_given:
            phi = None
            s.resolved.pop("phi_deg")
    nv = _wrap(path, lambda: NVParams(phi=phi, axis=axis, **kw))
    return nv, s.resolved


def _parse_sequence(data, path, gamma):
    s = _Section(data, path, DEFAULTS["sequence"])
    n = s.number("n_blocks", lo=1, integer=True)
    tau = s.number("tau_us", lo=0, lo_open=True) / 1e6
    tau_t = s.number("tau_target_us", lo=0, lo_open=True) / 1e6
    dw = s.number("mw_detuning_kHz") * 2.0 * math.pi * 1e3
    c_max = s.number("c_max", lo=0, hi=1, lo_open=True)
    offset = s.number("contrast_offset")
    sim = s.choice("simulator", ("brute_force", "closed_form"))
    seq = _wrap(path, lambda: SequenceSpec(n, tau, tau_t, gamma, "measurement1", dw))
    return seq, c_max, offset, sim, s.resolved


def _parse_sweep(data, path):
    kind = _single_key(data, path, SWEEPS)
    body = data[kind]
    sub = f"{path}.{kind}"
    if kind in ("qwp_angles_deg", "powers_mW"):
        if (not isinstance(body, list) or not body
                or not all(isinstance(v, (int, float)) and not isinstance(v, bool) and math.isfinite(v) for v in body)):
            raise ScenarioError(f"{sub}: expected a non-empty list of finite numbers")
        if kind == "powers_mW":
            if any(v < 0 for v in body):
                raise ScenarioError(f"{sub}: powers must be >= 0")
            return "powers", tuple(v / 1e3 for v in body), {kind: list(body)}
        return "qwp_angles", tuple(math.radians(v) for v in body), {kind: list(body)}
    if kind == "qwp_angles":
        s = _Section(body, sub, DEFAULTS["qwp_angles"])
        start = s.number("start_deg")
        stop = s.number("stop_deg")
        count = s.number("count", lo=1, integer=True)
        angles = np.linspace(math.radians(start), math.radians(stop), count, endpoint=False)
        return "qwp_angles", tuple(float(a) for a in angles), {kind: s.resolved}
    if kind == "grid":
        s = _Section(body, sub, DEFAULTS["grid"])
        plane = s.choice("plane", tuple(PLANES))
        u = s.vector("u_nm", 2)
        v = s.vector("v_nm", 2)
        res = s.vector("resolution", 2)
        if not all(r >= 2 and int(r) == r for r in res):
            raise s.err("resolution", f"expected two integers >= 2, got {list(res)}")
        off = s.number("offset_nm")
        if u[1] <= u[0] or v[1] <= v[0]:
            raise s.err("u_nm" if u[1] <= u[0] else "v_nm", "range must be increasing")
        grid = GridSpec(plane, (u[0] / 1e9, u[1] / 1e9), (v[0] / 1e9, v[1] / 1e9),
                        (int(res[0]), int(res[1])), off / 1e9)
        s.resolved["resolution"] = [int(r) for r in res]
        return "grid", grid, {kind: s.resolved}
    _Section(body, sub, {})
    return "single", None, {kind: {}}


_TOP = ("source", "nv", "sequence", "position_nm", "sweep")


def scenario_from_dict(doc):
    """Validate a scenario document and build the SI-unit ``Scenario``."""
    if not isinstance(doc, dict):
        raise ScenarioError("scenario: expected a JSON object at top level")
    unknown = sorted(set(doc) - set(_TOP))
    if unknown:
        raise ScenarioError(f"{unknown[0]}: unknown key (allowed: {', '.join(_TOP)})")
    if "source" not in doc:
        raise ScenarioError("source: missing (one of beam, spp, slab, fiber)")
    kind = _single_key(doc["source"], "source", SOURCES)
    body = doc["source"][kind]
    mix = None
    if kind == "beam":
        source, res = _parse_beam(body, "source.beam")
    elif kind == "spp":
        source, res = _parse_spp(body, "source.spp")
    elif kind == "slab":
        source, mix, res = _parse_slab(body, "source.slab")
    else:
        source, res = _parse_fiber(body, "source.fiber")
    nv, nv_res = _parse_nv(doc.get("nv", {}), "nv")
    seq, c_max, offset, sim, seq_res = _parse_sequence(doc.get("sequence", {}), "sequence", nv.gamma)
    pos = _Section({"position_nm": doc.get("position_nm", [0.0, 0.0, 0.0])}, "scenario",
                   {"position_nm": [0.0, 0.0, 0.0]}).vector("position_nm", 3)
    sweep_kind, sweep, sweep_res = _parse_sweep(doc.get("sweep", {"single": {}}), "sweep")
    resolved = {
        "source": {kind: res},
        "nv": nv_res,
        "sequence": seq_res,
        "position_nm": list(pos),
        "sweep": sweep_res,
    }
    return Scenario(kind, source, nv, seq, c_max, offset, sim, tuple(p / 1e9 for p in pos),
                    sweep_kind, sweep, resolved, mix)


def load_scenario(path):
    try:
        with open(path, encoding="utf-8") as fh:
            doc = json.load(fh)
    except OSError as exc:
        raise ScenarioError(f"{path}: cannot read scenario ({exc.strerror})") from exc
    except json.JSONDecodeError as exc:
        raise ScenarioError(f"{path}: JSON parse error at line {exc.lineno} column {exc.colno}: {exc.msg}") from exc
    return scenario_from_dict(doc)


def dump_scenario(scenario):
    """The resolved document (all defaults filled) as JSON text."""
    return json.dumps(scenario.document, indent=2) + "\n"


def save_scenario(scenario, path):
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(dump_scenario(scenario))
