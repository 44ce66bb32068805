"""Complex 3-vectors and Jones-calculus polarization states.

Fields and polarization vectors are plain ``complex128`` numpy arrays whose last
axis has length 3 (x, y, z). Functions accept a single vector or any batch shape.
"""
import numpy as np

E_X = np.array([1.0, 0.0, 0.0], dtype=complex)
E_Y = np.array([0.0, 1.0, 0.0], dtype=complex)
E_Z = np.array([0.0, 0.0, 1.0], dtype=complex)
E_LEFT = (E_X + 1j * E_Y) / np.sqrt(2.0)
E_RIGHT = (E_X - 1j * E_Y) / np.sqrt(2.0)


def vec3(x, y, z):
    """Build a complex 3-vector."""
    return np.array([x, y, z], dtype=complex)


def norm_sq(v):
    """|x|^2 + |y|^2 + |z|^2 along the last axis."""
    v = np.asarray(v)
    return np.sum(np.abs(v) ** 2, axis=-1)


def is_unit(v, tol=1e-12):
    return bool(np.all(np.abs(norm_sq(v) - 1.0) <= tol))


def qwp_jones(theta):
    """Polarization after a linear polarizer and a quarter-wave plate at angle ``theta``.

    Returns ``e_L cos(theta - pi/4) + e_R sin(theta - pi/4)``. The result is a
    unit vector with zero z-component and ``conj(e) x e = i sin(2 theta) z``.
    ``theta`` may be an array; the vector axis is appended last.
    """
    theta = np.asarray(theta, dtype=float)
    c = np.cos(theta - np.pi / 4.0)[..., None]
    s = np.sin(theta - np.pi / 4.0)[..., None]
    return c * E_LEFT + s * E_RIGHT


def apply_ellipticity(e, ellipticity=1.0):
    """Stretch the x/y axes of a transverse Jones vector to the given axis ratio.

    A circular input comes out with major/minor axis ratio ``ellipticity``. The
    output is renormalized to unit length. ``ellipticity == 1`` is the identity.
    """
    if ellipticity <= 0:
        raise ValueError(f"ellipticity must be positive, got {ellipticity}")
    if ellipticity == 1.0:
        return np.asarray(e, dtype=complex)
    k = np.sqrt(ellipticity)
    out = np.asarray(e, dtype=complex) * np.array([k, 1.0 / k, 1.0])
    return out / np.sqrt(norm_sq(out))[..., None]


def circular_about(axis):
    """Unit circular polarization whose spin points along real unit vector ``axis``.

    Returns ``(u + i v)/sqrt(2)`` with ``u x v = axis`` so that
    ``conj(e) x e = i axis``.
    """
    n = np.asarray(axis, dtype=float)
    n = n / np.linalg.norm(n)
    helper = np.array([1.0, 0.0, 0.0]) if abs(n[0]) < 0.9 else np.array([0.0, 1.0, 0.0])
    u = np.cross(helper, n)
    u /= np.linalg.norm(u)
    v = np.cross(n, u)
    return (u + 1j * v) / np.sqrt(2.0)
