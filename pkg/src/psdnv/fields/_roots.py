import numpy as np
from scipy import optimize

MAX_ITER = 200
# smallest rtol scipy's bisect accepts
_RTOL = 4.0 * np.finfo(float).eps


class NoGuidedModeError(ValueError):
    """Raised when a waveguide supports no guided mode of the requested kind."""


def bisect(f, lo, hi):
    """Bracketed bisection to machine precision (``MAX_ITER`` cap)."""
    flo, fhi = f(lo), f(hi)
    if flo == 0.0:
        return lo
    if fhi == 0.0:
        return hi
    if np.sign(flo) == np.sign(fhi):
        raise NoGuidedModeError(f"no sign change in bracket [{lo!r}, {hi!r}]")
    return optimize.bisect(f, lo, hi, xtol=1e-300, rtol=_RTOL, maxiter=MAX_ITER, disp=False)


def sign_changes(f, lo, hi, n=2000):
    """Sub-brackets of ``[lo, hi]`` over which ``f`` changes sign, on an ``n``-point grid."""
    xs = np.linspace(lo, hi, n)
    vals = np.array([f(x) for x in xs])
    out = []
    for i in range(n - 1):
        if np.isfinite(vals[i]) and np.isfinite(vals[i + 1]) and vals[i] * vals[i + 1] < 0:
            out.append((xs[i], xs[i + 1]))
        elif vals[i] == 0.0:
            out.append((xs[i], xs[i]))
    return out
