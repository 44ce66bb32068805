"""Single-interface surface plasmon polariton: metal for z < 0, dielectric for z > 0, guided along x."""
from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class SppParams:
    eps_metal: complex = complex(-24.1, 1.47)   # gold near 800 nm
    eps_dielectric: float = 1.0
    wavelength: float = 800e-9
    direction: int = 1
    amplitude: float = 1e6

    def __post_init__(self):
        if self.direction not in (1, -1):
            raise ValueError(f"direction must be +1 or -1, got {self.direction}")
        if not self.eps_dielectric > 0:
            raise ValueError(f"eps_dielectric must be > 0, got {self.eps_dielectric}")
        if not complex(self.eps_metal).real < -self.eps_dielectric:
            raise ValueError(
                f"no bound SPP: Re(eps_metal) = {complex(self.eps_metal).real} must be < -eps_dielectric"
            )
        if not self.wavelength > 0:
            raise ValueError(f"wavelength must be > 0, got {self.wavelength}")

    @property
    def k0(self):
        return 2.0 * np.pi / self.wavelength

    @property
    def k_spp_complex(self):
        em, ed = complex(self.eps_metal), self.eps_dielectric
        return self.k0 * np.sqrt(em * ed / (em + ed))

    @property
    def k_spp(self):
        """Propagation constant used for the field (real part; no attenuation along x)."""
        return self.k_spp_complex.real

    @property
    def kappa_d(self):
        """Evanescent decay constant into the dielectric."""
        return np.sqrt(self.k_spp**2 - self.eps_dielectric * self.k0**2)

    @property
    def kappa_m(self):
        return np.sqrt(self.k_spp**2 - complex(self.eps_metal) * self.k0**2)


def spp_mode_field(spp, r):
    """Complex SPP field at ``r`` (m, ``(..., 3)``).

    Dielectric side: ``E0 (x + i s k/kappa_d z) exp(i s k x - kappa_d z)`` with
    ``s = spp.direction``; the metal side continues ``E_x`` and stays divergence-free.
    """
    r = np.asarray(r, dtype=float)
    x, z = r[..., 0], r[..., 2]
    s, k = spp.direction, spp.k_spp
    kd, km = spp.kappa_d, spp.kappa_m
    above = z >= 0
    carrier = spp.amplitude * np.exp(1j * s * k * x)
    # clip exponents so the unused branch of np.where cannot overflow
    ex = carrier * np.where(above, np.exp(-kd * np.maximum(z, 0.0)), np.exp(km * np.minimum(z, 0.0)))
    ez = np.where(above, 1j * s * k / kd, -1j * s * k / km) * ex
    out = np.zeros(ex.shape + (3,), dtype=complex)
    out[..., 0] = ex
    out[..., 2] = ez
    return out
