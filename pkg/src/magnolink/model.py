"""Mode bookkeeping, operating points and the linearized drift/diffusion
matrices of the four-mode system.

Quadrature ordering is fixed throughout the package::

    u = (X_a, Y_a, X_m, Y_m, q, p, X_c, Y_c)

with ``X = (j + j^dag)/sqrt(2)`` and ``Y = i(j^dag - j)/sqrt(2)``, so the
vacuum variance of every quadrature is 1/2. All rates are angular (rad/s).
"""

import enum
import math
import warnings
from dataclasses import dataclass
from typing import Optional

import numpy as np

from magnolink.constants import HBAR, K_B
from magnolink.errors import DomainError

N_QUADRATURES = 8
MIN_QUALITY_FACTOR = 100.0


class ModeKind(enum.Enum):
    MICROWAVE = "a"
    MAGNON = "m"
    PHONON = "b"
    OPTICAL = "c"

    @property
    def quadratures(self):
        """Indices of (X, Y) -- or (q, p) for the phonon -- in the 8-vector."""
        return _QUADRATURE_INDEX[self]

    @classmethod
    def parse(cls, label):
        if isinstance(label, cls):
            return label
        try:
            return cls(label)
        except ValueError:
            try:
                return cls[str(label).upper()]
            except KeyError:
                raise DomainError(f"unknown mode {label!r}; expected one of a, m, b, c") from None


_QUADRATURE_INDEX = {
    ModeKind.MICROWAVE: (0, 1),
    ModeKind.MAGNON: (2, 3),
    ModeKind.PHONON: (4, 5),
    ModeKind.OPTICAL: (6, 7),
}


def thermal_occupation(omega, T):
    """Bose-Einstein occupation ``1 / (exp(hbar omega / k_B T) - 1)``.

    Evaluated as ``exp(-x) / (1 - exp(-x))`` through ``expm1`` so that small
    exponents keep full precision and very large ones underflow to 0 instead
    of overflowing.
    """
    if not omega > 0:
        raise DomainError(f"thermal_occupation needs omega > 0, got {omega!r}")
    if T < 0:
        raise DomainError(f"temperature must be >= 0, got {T!r}")
    if T == 0:
        return 0.0
    x = HBAR * omega / (K_B * T)
    return math.exp(-x) / -math.expm1(-x)


@dataclass(frozen=True)
class SystemParams:
    """One physical configuration of the system, everything in rad/s and K.

    ``delta_a``, ``delta_m_bare`` and ``delta_c_bare`` are the bare
    detunings from the drive frames. When ``drive_omega0`` / ``drive_omegaL``
    are given they take precedence (see :meth:`bare_detunings`).
    """

    omega_a: float
    omega_m: float
    omega_c: float
    omega_b: float
    kappa_a: float
    kappa_m: float
    kappa_c: float
    gamma_b: float
    g_a: float
    temperature: float
    g_m: float = 0.0
    g_c: float = 0.0
    delta_a: float = 0.0
    delta_m_bare: float = 0.0
    delta_c_bare: float = 0.0
    drive_omega0: Optional[float] = None
    drive_omegaL: Optional[float] = None

    def __post_init__(self):
        for name in ("omega_a", "omega_m", "omega_c", "omega_b", "kappa_a", "kappa_m", "kappa_c", "gamma_b"):
            value = getattr(self, name)
            if not (math.isfinite(value) and value > 0):
                raise DomainError(f"{name} must be finite and > 0, got {value!r}")
        for name in ("g_a", "g_m", "g_c", "temperature"):
            value = getattr(self, name)
            if not (math.isfinite(value) and value >= 0):
                raise DomainError(f"{name} must be finite and >= 0, got {value!r}")
        for name in ("delta_a", "delta_m_bare", "delta_c_bare"):
            if not math.isfinite(getattr(self, name)):
                raise DomainError(f"{name} must be finite")
        for name in ("drive_omega0", "drive_omegaL"):
            value = getattr(self, name)
            if value is not None and not (math.isfinite(value) and value >= 0):
                raise DomainError(f"{name} must be finite and >= 0, got {value!r}")
        if self.quality_factor < MIN_QUALITY_FACTOR:
            warnings.warn(
                f"mechanical Q = {self.quality_factor:.3g} < {MIN_QUALITY_FACTOR:g}; "
                "the Markovian Brownian-noise model is not reliable here",
                RuntimeWarning,
                stacklevel=3,
            )

    @property
    def quality_factor(self):
        return self.omega_b / self.gamma_b

    def bare_detunings(self):
        """``(Delta_a, Delta_m, Delta_c)`` in the rotating frames of the drives."""
        if self.drive_omega0 is not None:
            delta_a = self.omega_a - self.drive_omega0
            delta_m = self.omega_m - self.drive_omega0
        else:
            delta_a, delta_m = self.delta_a, self.delta_m_bare
        if self.drive_omegaL is not None:
            delta_c = self.omega_c - self.drive_omegaL
        else:
            delta_c = self.delta_c_bare
        return delta_a, delta_m, delta_c

    def occupations(self):
        """Thermal occupations ``(N_a, N_m, N_b, N_c)`` at the bath temperature.

        Each mode sees its bath at the lab-frame mode frequency.
        """
        T = self.temperature
        return (
            thermal_occupation(self.omega_a, T),
            thermal_occupation(self.omega_m, T),
            thermal_occupation(self.omega_b, T),
            thermal_occupation(self.omega_c, T),
        )


@dataclass(frozen=True)
class OperatingPoint:
    """Every symbol that enters the drift and diffusion matrices."""

    delta_a: float
    delta_m_eff: float
    delta_c_eff: float
    G_m: float
    G_c: float
    g_a: float
    kappa_a: float
    kappa_m: float
    kappa_c: float
    gamma_b: float
    omega_b: float
    N_a: float = 0.0
    N_m: float = 0.0
    N_b: float = 0.0
    N_c: float = 0.0

    def __post_init__(self):
        for name in ("kappa_a", "kappa_m", "kappa_c", "gamma_b", "omega_b"):
            if not getattr(self, name) > 0:
                raise DomainError(f"{name} must be > 0, got {getattr(self, name)!r}")
        for name in ("G_m", "G_c", "g_a", "N_a", "N_m", "N_b", "N_c"):
            if not getattr(self, name) >= 0:
                raise DomainError(f"{name} must be >= 0, got {getattr(self, name)!r}")


def build_drift(op):
    """Drift matrix ``A`` of ``du/dt = A u + n`` for the quadrature fluctuations.

    The two effective couplings enter as real numbers: ``G_m`` couples Y_m
    to the mechanical momentum (magnomechanical down-conversion with the
    magnon drive blue detuned) and ``G_c`` couples q to the optical cavity.
    """
    ka, km, kc = op.kappa_a, op.kappa_m, op.kappa_c
    da, dm, dc = op.delta_a, op.delta_m_eff, op.delta_c_eff
    ga, Gm, Gc = op.g_a, op.G_m, op.G_c
    wb, gb = op.omega_b, op.gamma_b
    return np.array(
        [
            [-ka, da, 0.0, ga, 0.0, 0.0, 0.0, 0.0],
            [-da, -ka, -ga, 0.0, 0.0, 0.0, 0.0, 0.0],
            [0.0, ga, -km, dm, Gm, 0.0, 0.0, 0.0],
            [-ga, 0.0, -dm, -km, 0.0, 0.0, 0.0, 0.0],
            [0.0, 0.0, 0.0, 0.0, 0.0, wb, 0.0, 0.0],
            [0.0, 0.0, 0.0, -Gm, -wb, -gb, 0.0, -Gc],
            [0.0, 0.0, 0.0, 0.0, Gc, 0.0, -kc, dc],
            [0.0, 0.0, 0.0, 0.0, 0.0, 0.0, -dc, -kc],
        ]
    )


def build_diffusion(op):
    """Diagonal diffusion matrix of the input noises.

    Position ``q`` receives no noise directly; the optical entries use the
    optical linewidth ``kappa_c``.
    """
    return np.diag(
        [
            op.kappa_a * (2 * op.N_a + 1),
            op.kappa_a * (2 * op.N_a + 1),
            op.kappa_m * (2 * op.N_m + 1),
            op.kappa_m * (2 * op.N_m + 1),
            0.0,
            op.gamma_b * (2 * op.N_b + 1),
            op.kappa_c * (2 * op.N_c + 1),
            op.kappa_c * (2 * op.N_c + 1),
        ]
    )


def symplectic_form(n_modes=4):
    """Block-diagonal ``(+) [[0, 1], [-1, 0]]`` for ``n_modes`` modes."""
    return np.kron(np.eye(n_modes), np.array([[0.0, 1.0], [-1.0, 0.0]]))
