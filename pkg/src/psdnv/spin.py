"""Electric photonic spin density of monochromatic fields."""
import numpy as np

_RESIDUE_TOL = 1e-12


def spin_density(E, omega, eps):
    """Electric spin density ``-(i eps / 4 omega) conj(E) x E`` in J s / m^3.

    ``E`` is a complex field (V/m) with components on the last axis. The
    analytic result is real; the imaginary residue is checked and dropped.
    """
    if not omega > 0:
        raise ValueError(f"omega must be > 0, got {omega}")
    if not eps > 0:
        raise ValueError(f"permittivity must be > 0, got {eps}")
    E = np.asarray(E, dtype=complex)
    if not np.all(np.isfinite(E)):
        raise ValueError("field has non-finite components")
    s = (-1j * eps / (4.0 * omega)) * np.cross(np.conj(E), E)
    scale = eps * np.sum(np.abs(E) ** 2, axis=-1) / (4.0 * omega)
    residue = np.linalg.norm(s.imag, axis=-1)
    if np.any(residue > _RESIDUE_TOL * np.maximum(scale, np.finfo(float).tiny)):
        raise ArithmeticError("spin density has a non-negligible imaginary part")
    return s.real


def project_on_axis(s, axis):
    """Projection ``s . n`` onto a unit axis (error if ``|n| != 1`` within 1e-9)."""
    n = np.asarray(axis, dtype=float)
    if abs(np.linalg.norm(n) - 1.0) > 1e-9:
        raise ValueError(f"axis must be a unit vector, |n| = {np.linalg.norm(n)}")
    return np.asarray(s, dtype=float) @ n


def degree_of_circularity(E, k_hat=(0.0, 0.0, 1.0)):
    """Signed ``|conj(E) x E| / |E|^2`` in [-1, 1].

    The sign follows the spin component along ``k_hat``; when that vanishes the
    sign of the dominant spin component is used.
    """
    E = np.asarray(E, dtype=complex)
    mag_sq = float(np.sum(np.abs(E) ** 2))
    if mag_sq == 0.0:
        raise ValueError("degree of circularity is undefined for a zero field")
    spin = np.cross(np.conj(E), E).imag   # = 4 omega s / eps
    along = float(spin @ np.asarray(k_hat, dtype=float))
    if abs(along) > 1e-14 * mag_sq:
        sign = np.sign(along)
    else:
        sign = np.sign(spin[np.argmax(np.abs(spin))])
    return float(np.clip(sign * np.linalg.norm(spin) / mag_sq, -1.0, 1.0))
