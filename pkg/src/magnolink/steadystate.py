"""Mean-field steady state: drive amplitudes, static displacement and the
effective (drive-enhanced) couplings."""

import math
from dataclasses import dataclass

from magnolink.errors import DegenerateDriveError, DomainError, NonConvergenceError
from magnolink.model import OperatingPoint

SQRT2 = math.sqrt(2.0)

RELAXATION = 0.5
MAX_ITERATIONS = 10_000
Q_RTOL = 1e-10
DEGENERACY_RTOL = 1e-3


@dataclass(frozen=True)
class DriveSpec:
    """Magnon Rabi frequency ``Omega`` and laser coupling ``E_drive`` (rad/s)."""

    Omega: float = 0.0
    E_drive: float = 0.0

    def __post_init__(self):
        if not (self.Omega >= 0 and self.E_drive >= 0):
            raise DomainError(f"drive strengths must be >= 0, got {self}")


@dataclass(frozen=True)
class SteadyState:
    m_amp: complex
    c_amp: complex
    q_disp: float
    delta_m_eff: float
    delta_c_eff: float
    G_m: complex
    G_c: complex
    phase_diagnostic: float
    iterations: int = 0

    @property
    def G_m_abs(self):
        return abs(self.G_m)

    @property
    def G_c_abs(self):
        return abs(self.G_c)


def _off_real_axis(z):
    """Angular distance of ``z`` from the real axis, in [0, pi/2]."""
    if z == 0:
        return 0.0
    theta = abs(math.atan2(z.imag, z.real))
    return min(theta, math.pi - theta)


def magnon_amplitude(Omega, delta_a, delta_m_eff, kappa_a, kappa_m, g_a):
    """``Omega (kappa_a + i Delta_a) / (g_a^2 + (kappa_m + i Delta_m)(kappa_a + i Delta_a))``."""
    cavity = complex(kappa_a, delta_a)
    denom = g_a**2 + complex(kappa_m, delta_m_eff) * cavity
    if abs(denom) < DEGENERACY_RTOL * max(kappa_m**2, g_a**2):
        raise DegenerateDriveError(
            f"magnon amplitude denominator |{denom:.3e}| vanishes (anti-resonance at "
            f"Delta_a={delta_a:.6e}, Delta_m={delta_m_eff:.6e})"
        )
    return Omega * cavity / denom


def optical_amplitude(E_drive, delta_c_eff, kappa_c):
    return E_drive / complex(kappa_c, delta_c_eff)


def displacement(m_amp, c_amp, g_m, g_c, omega_b):
    """Static mechanical shift from radiation pressure minus magnetostriction."""
    return (g_c * abs(c_amp) ** 2 - g_m * abs(m_amp) ** 2) / omega_b


def amplitudes_from_drives(params, drives, delta_m_eff, delta_c_eff):
    """Exact steady-state amplitudes at prescribed effective detunings.

    The displacement is computed from the resulting amplitudes; the
    effective detunings are taken as given (they already include it).
    """
    delta_a = params.bare_detunings()[0]
    m = magnon_amplitude(drives.Omega, delta_a, delta_m_eff, params.kappa_a, params.kappa_m, params.g_a)
    c = optical_amplitude(drives.E_drive, delta_c_eff, params.kappa_c)
    return _assemble(params, m, c, delta_m_eff, delta_c_eff)


def _assemble(params, m, c, delta_m_eff, delta_c_eff, iterations=0, q=None):
    if q is None:
        q = displacement(m, c, params.g_m, params.g_c, params.omega_b)
    G_m = -1j * SQRT2 * params.g_m * m
    G_c = 1j * SQRT2 * params.g_c * c
    return SteadyState(
        m_amp=m,
        c_amp=c,
        q_disp=q,
        delta_m_eff=delta_m_eff,
        delta_c_eff=delta_c_eff,
        G_m=G_m,
        G_c=G_c,
        phase_diagnostic=max(_off_real_axis(G_m), _off_real_axis(G_c)),
        iterations=iterations,
    )


def selfconsistent_point(params, drives):
    """Solve the mean-field equations at the bare detunings of ``params``.

    Under-relaxed fixed-point iteration on the displacement, starting from
    ``q = 0``. The cubic mean-field problem can be multivalued at strong
    drive; in that case iteration fails and :class:`NonConvergenceError`
    reports the last two iterates instead of picking a branch.
    """
    delta_a, delta_m, delta_c = params.bare_detunings()
    q = 0.0
    previous = q
    for iteration in range(1, MAX_ITERATIONS + 1):
        dm = delta_m + params.g_m * q
        dc = delta_c - params.g_c * q
        m = magnon_amplitude(drives.Omega, delta_a, dm, params.kappa_a, params.kappa_m, params.g_a)
        c = optical_amplitude(drives.E_drive, dc, params.kappa_c)
        target = displacement(m, c, params.g_m, params.g_c, params.omega_b)
        residual = target - q
        if abs(residual) < Q_RTOL * max(1.0, abs(q)):
            q = target
            break
        previous = q
        q = q + RELAXATION * residual
    else:
        raise NonConvergenceError(
            f"mean-field displacement did not converge in {MAX_ITERATIONS} iterations "
            "(possible bistability)",
            last_iterates=(previous, q),
        )
    dm = delta_m + params.g_m * q
    dc = delta_c - params.g_c * q
    m = magnon_amplitude(drives.Omega, delta_a, dm, params.kappa_a, params.kappa_m, params.g_a)
    c = optical_amplitude(drives.E_drive, dc, params.kappa_c)
    return _assemble(params, m, c, dm, dc, iterations=iteration, q=q)


def bare_detunings_for(params, drives, delta_m_eff, delta_c_eff):
    """Bare ``(Delta_m, Delta_c)`` that land on the requested effective detunings."""
    state = amplitudes_from_drives(params, drives, delta_m_eff, delta_c_eff)
    q = state.q_disp
    return delta_m_eff - params.g_m * q, delta_c_eff + params.g_c * q


def operating_point_from_couplings(G_m, G_c, delta_m_eff, delta_c_eff, delta_a, params):
    """Operating point for directly specified effective couplings."""
    if G_m < 0 or G_c < 0:
        raise DomainError(f"effective couplings must be >= 0, got G_m={G_m!r}, G_c={G_c!r}")
    N_a, N_m, N_b, N_c = params.occupations()
    return OperatingPoint(
        delta_a=delta_a,
        delta_m_eff=delta_m_eff,
        delta_c_eff=delta_c_eff,
        G_m=G_m,
        G_c=G_c,
        g_a=params.g_a,
        kappa_a=params.kappa_a,
        kappa_m=params.kappa_m,
        kappa_c=params.kappa_c,
        gamma_b=params.gamma_b,
        omega_b=params.omega_b,
        N_a=N_a,
        N_m=N_m,
        N_b=N_b,
        N_c=N_c,
    )


def operating_point_from_state(state, params, delta_a=None):
    """Operating point from a mean-field solution, keeping only ``|G|``."""
    if delta_a is None:
        delta_a = params.bare_detunings()[0]
    return operating_point_from_couplings(
        state.G_m_abs, state.G_c_abs, state.delta_m_eff, state.delta_c_eff, delta_a, params
    )
