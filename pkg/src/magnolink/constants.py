"""Physical constants (SI, CODATA 2018 exact or recommended values)."""

import math

HBAR = 1.054571817e-34  # J s
K_B = 1.380649e-23  # J / K
MU_0 = 4e-7 * math.pi  # H / m
C_LIGHT = 2.99792458e8  # m / s

TWO_PI = 2.0 * math.pi

# YIG material defaults; both are overridable through the drive config.
YIG_SPIN_DENSITY = 4.22e27  # m^-3
GYROMAGNETIC_RATIO = TWO_PI * 28e9  # rad / (s T)
