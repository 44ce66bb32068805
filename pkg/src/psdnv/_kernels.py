"""Kernel dispatch: the compiled extension when it was built, else the pure-Python fallback."""
from . import _pykernels

try:
    from . import _ckernels
except ImportError:  # extension not built
    _ckernels = None

_BACKENDS = {"python": _pykernels}
if _ckernels is not None:
    _BACKENDS["compiled"] = _ckernels

HAVE_COMPILED = _ckernels is not None
_active = "compiled" if HAVE_COMPILED else "python"


def available_backends():
    return tuple(_BACKENDS)


def get_backend():
    return _active


def set_backend(name):
    """Select ``"compiled"`` or ``"python"``; returns the previous backend name."""
    global _active
    if name not in _BACKENDS:
        raise ValueError(f"unknown or unavailable kernel backend {name!r}; have {available_backends()}")
    previous, _active = _active, name
    return previous


def free_evolve(psi, t0, t1, seg_start, seg_stop, seg_field, gamma, detuning, max_step):
    return _BACKENDS[_active].free_evolve(
        psi, t0, t1, seg_start, seg_stop, seg_field, gamma, detuning, max_step
    )
