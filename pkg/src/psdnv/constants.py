"""Physical constants and default NV / optics parameters (SI units, angular frequencies in rad/s)."""
import math

from scipy import constants as _sc

HBAR = _sc.hbar
EPS0 = _sc.epsilon_0
C_LIGHT = _sc.c
TWO_PI = 2.0 * math.pi

# NV-center defaults
LAMBDA_Z = TWO_PI * 5.5e9            # excited-state spin-orbit coupling
DELTA_ES = (1.42 / 3.0) * 1e9 * TWO_PI  # excited-state spin-spin splitting
DELTA_GS = TWO_PI * 2.87e9           # ground-state zero-field splitting (not given in source; textbook value)
LAMBDA_GE = 637e-9                   # zero-phonon line wavelength
OMEGA_GE = TWO_PI * C_LIGHT / LAMBDA_GE
GAMMA_NV = TWO_PI * 28e9             # 2.8 MHz/G expressed in rad/(s T)
TAU_NV = 15e-9                       # excited-state lifetime
B_BIAS = 1.1e-3
PHI_NV = math.radians(54.7)          # NV axis vs beam axis for a (100) cut
EPS_R_DIAMOND = 5.7

# Target beam
WAVELENGTH_TARGET = 800e-9
NA_TARGET = 0.65
POWER_TARGET = 4e-3
TRANSMISSION = 0.78

# XY8 readout
N_XY8 = 4
TAU_TARGET = 1e-6
TAU_XY8 = 2e-6
C_MAX = 0.2


def omega_from_wavelength(wavelength):
    """Angular frequency (rad/s) of vacuum wavelength ``wavelength`` (m)."""
    return TWO_PI * C_LIGHT / wavelength
