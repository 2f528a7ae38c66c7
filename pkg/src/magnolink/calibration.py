"""Laboratory drive quantities <-> model couplings.

Forward chain::

    P_0 --(energy density)--> H_d --(spins)--> Omega --(mean field)--> |<m>| --> G_m
    P_L --(photon flux)-----> E  --(mean field)--> |<c>| --> G_c

:func:`required_powers` inverts it using the resolved-sideband amplitudes
``<m> ~ i Omega Delta_a / (g_a^2 - Delta_m Delta_a)`` and ``<c> ~ -i E / Delta_c``.
"""

import math
from dataclasses import asdict, dataclass

from magnolink.constants import C_LIGHT, GYROMAGNETIC_RATIO, HBAR, MU_0, TWO_PI, YIG_SPIN_DENSITY
from magnolink.errors import CalibrationError, DomainError

SQRT2 = math.sqrt(2.0)
RABI_PREFACTOR = math.sqrt(5.0) / 4.0
DEGENERACY_RTOL = 1e-9


@dataclass(frozen=True)
class CrystalGeometry:
    """Cuboid crystal, dimensions in metres; ``spin_density`` in m^-3."""

    length: float
    width: float
    height: float
    spin_density: float = YIG_SPIN_DENSITY

    def __post_init__(self):
        for name in ("length", "width", "height", "spin_density"):
            if not getattr(self, name) > 0:
                raise DomainError(f"crystal {name} must be > 0, got {getattr(self, name)!r}")

    @property
    def volume(self):
        return self.length * self.width * self.height

    @property
    def n_spins(self):
        return self.spin_density * self.volume


@dataclass(frozen=True)
class CalibrationResult:
    P_0: float
    P_L: float
    H_d: float
    Omega: float
    E: float
    N_spins: float
    m_amp_abs: float
    c_amp_abs: float
    omega_L: float

    def as_dict(self):
        return asdict(self)


def laser_frequency(lambda_c):
    if not lambda_c > 0:
        raise DomainError(f"wavelength must be > 0, got {lambda_c!r}")
    return TWO_PI * C_LIGHT / lambda_c


def laser_coupling(P_L, lambda_c, kappa_c):
    """``E = sqrt(2 kappa_c P_L / (hbar omega_L))`` in rad/s."""
    if P_L < 0 or not kappa_c > 0:
        raise DomainError("laser_coupling needs P_L >= 0 and kappa_c > 0")
    return math.sqrt(2.0 * kappa_c * P_L / (HBAR * laser_frequency(lambda_c)))


def laser_power(E, lambda_c, kappa_c):
    """Inverse of :func:`laser_coupling`."""
    return E**2 * HBAR * laser_frequency(lambda_c) / (2.0 * kappa_c)


def field_from_power(P_0, geom):
    """Drive field amplitude (T) of a microwave beam of power ``P_0`` through
    the ``length x width`` cross-section: ``sqrt(2 mu_0 P_0 / (l w c))``."""
    if P_0 < 0:
        raise DomainError(f"microwave power must be >= 0, got {P_0!r}")
    return math.sqrt(2.0 * MU_0 * P_0 / (geom.length * geom.width * C_LIGHT))


def power_from_field(H_d, geom):
    return H_d**2 * geom.length * geom.width * C_LIGHT / (2.0 * MU_0)


def rabi_frequency(H_d, geom, gamma_gyro=GYROMAGNETIC_RATIO):
    """Magnon drive Rabi frequency ``(sqrt(5)/4) gamma sqrt(N) H_d``."""
    if H_d < 0 or gamma_gyro < 0:
        raise DomainError("rabi_frequency needs H_d >= 0 and gamma >= 0")
    return RABI_PREFACTOR * gamma_gyro * math.sqrt(geom.n_spins) * H_d


def field_from_rabi(Omega, geom, gamma_gyro=GYROMAGNETIC_RATIO):
    return Omega / (RABI_PREFACTOR * gamma_gyro * math.sqrt(geom.n_spins))


def approx_magnon_amplitude(Omega, g_a, delta_m_eff, delta_a):
    """Resolved-sideband magnon amplitude (purely imaginary)."""
    denom = g_a**2 - delta_m_eff * delta_a
    _check_denominator(denom, g_a, delta_m_eff, delta_a)
    return 1j * Omega * delta_a / denom


def approx_optical_amplitude(E, delta_c_eff):
    if delta_c_eff == 0:
        raise CalibrationError("optical detuning is zero; resolved-sideband amplitude undefined", step="optical")
    return -1j * E / delta_c_eff


def _check_denominator(denom, g_a, delta_m_eff, delta_a):
    scale = max(g_a**2, abs(delta_m_eff * delta_a))
    if scale == 0 or abs(denom) <= DEGENERACY_RTOL * scale:
        raise CalibrationError(
            f"g_a^2 = Delta_m * Delta_a (g_a={g_a:.6e}, Delta_m={delta_m_eff:.6e}, "
            f"Delta_a={delta_a:.6e}): magnon amplitude denominator vanishes",
            step="magnon",
        )


def required_powers(
    target_Gm,
    target_Gc,
    params,
    geom,
    delta_m_eff,
    delta_c_eff,
    delta_a=None,
    lambda_c=1550e-9,
    gamma_gyro=GYROMAGNETIC_RATIO,
):
    """Microwave and laser powers that produce the target effective couplings.

    ``delta_a`` defaults to ``delta_m_eff`` (magnon resonant with the
    microwave cavity). Returns every intermediate quantity of the chain.
    """
    if target_Gm < 0 or target_Gc < 0:
        raise DomainError("target couplings must be >= 0")
    if delta_a is None:
        delta_a = delta_m_eff

    if target_Gm > 0:
        if params.g_m <= 0:
            raise CalibrationError("g_m = 0 cannot produce a magnomechanical coupling", step="magnon")
        if delta_a == 0:
            raise CalibrationError("Delta_a = 0 decouples the approximate magnon amplitude", step="magnon")
        denom = params.g_a**2 - delta_m_eff * delta_a
        _check_denominator(denom, params.g_a, delta_m_eff, delta_a)
        m_abs = target_Gm / (SQRT2 * params.g_m)
        Omega = m_abs * abs(denom) / abs(delta_a)
    else:
        m_abs = Omega = 0.0
    H_d = field_from_rabi(Omega, geom, gamma_gyro)
    P_0 = power_from_field(H_d, geom)

    if target_Gc > 0:
        if params.g_c <= 0:
            raise CalibrationError("g_c = 0 cannot produce an optomechanical coupling", step="optical")
        if delta_c_eff == 0:
            raise CalibrationError("optical detuning is zero", step="optical")
        c_abs = target_Gc / (SQRT2 * params.g_c)
        E = c_abs * abs(delta_c_eff)
    else:
        c_abs = E = 0.0
    P_L = laser_power(E, lambda_c, params.kappa_c)

    return CalibrationResult(
        P_0=P_0,
        P_L=P_L,
        H_d=H_d,
        Omega=Omega,
        E=E,
        N_spins=geom.n_spins,
        m_amp_abs=m_abs,
        c_amp_abs=c_abs,
        omega_L=laser_frequency(lambda_c),
    )


def drives_from_powers(P_0, P_L, geom, lambda_c, kappa_c, gamma_gyro=GYROMAGNETIC_RATIO):
    """``(Omega, E)`` from the two drive powers."""
    Omega = rabi_frequency(field_from_power(P_0, geom), geom, gamma_gyro)
    return Omega, laser_coupling(P_L, lambda_c, kappa_c)
