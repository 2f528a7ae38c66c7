import math

import pytest
from hypothesis import given
from hypothesis import strategies as st

from magnolink.calibration import (
    CrystalGeometry,
    approx_magnon_amplitude,
    approx_optical_amplitude,
    drives_from_powers,
    field_from_power,
    field_from_rabi,
    laser_coupling,
    laser_power,
    power_from_field,
    rabi_frequency,
    required_powers,
)
from magnolink.constants import TWO_PI
from magnolink.errors import CalibrationError, DomainError
from magnolink.sweep import baseline_params

GEOMETRY = CrystalGeometry(5e-6, 2e-6, 1e-6)
KAPPA_C = TWO_PI * 2e6
LAMBDA = 1550e-9

positive = st.floats(1e-9, 1e3, allow_nan=False, allow_infinity=False)


def _wb(params):
    return params.omega_b


class TestGeometry:
    def test_spin_number(self):
        assert GEOMETRY.volume == pytest.approx(1e-17)
        assert GEOMETRY.n_spins == pytest.approx(4.22e10)

    @pytest.mark.parametrize("field", ["length", "width", "height", "spin_density"])
    def test_rejects_nonpositive(self, field):
        kwargs = dict(length=1.0, width=1.0, height=1.0)
        kwargs[field] = 0.0
        with pytest.raises(DomainError):
            CrystalGeometry(**kwargs)


class TestForwardChain:
    def test_laser_coupling_worked_example(self):
        E = laser_coupling(2.56e-3, LAMBDA, KAPPA_C)
        # hand substitution with literal constants
        omega_L = 2 * math.pi * 299792458.0 / 1550e-9
        oracle = math.sqrt(2 * KAPPA_C * 2.56e-3 / (1.054571817e-34 * omega_L))
        assert E == pytest.approx(oracle, rel=1e-9)
        assert E == pytest.approx(7.1e11, rel=0.02)

    def test_optical_chain_gives_Gc(self, params):
        E = laser_coupling(2.56e-3, LAMBDA, params.kappa_c)
        c = approx_optical_amplitude(E, _wb(params))
        G_c = math.sqrt(2) * params.g_c * abs(c)
        assert G_c / TWO_PI == pytest.approx(8e6, rel=0.02)

    def test_field_worked_example(self):
        H = field_from_power(0.91e-3, GEOMETRY)
        oracle = math.sqrt(2 * 4e-7 * math.pi * 0.91e-3 / (5e-6 * 2e-6 * 299792458.0))
        assert H == pytest.approx(oracle, rel=1e-9)
        assert H == pytest.approx(8.7e-4, rel=0.02)

    def test_rabi_worked_example(self):
        Omega = rabi_frequency(8.7e-4, GEOMETRY)
        oracle = math.sqrt(5) / 4 * 2 * math.pi * 28e9 * math.sqrt(4.22e10) * 8.7e-4
        assert Omega == pytest.approx(oracle, rel=1e-9)
        assert Omega == pytest.approx(1.76e13, rel=0.01)

    def test_magnon_chain_gives_Gm(self, params):
        wb = _wb(params)
        m = approx_magnon_amplitude(1.76e13, params.g_a, -wb, -wb)
        assert abs(m) == pytest.approx(7.1e4, rel=0.02)
        assert math.sqrt(2) * params.g_m * abs(m) / TWO_PI == pytest.approx(2e6, rel=0.02)

    @pytest.mark.parametrize(
        "fn, args",
        [
            (laser_coupling, (0.0, LAMBDA, KAPPA_C)),
            (field_from_power, (0.0, GEOMETRY)),
            (rabi_frequency, (0.0, GEOMETRY)),
        ],
    )
    def test_zero_input(self, fn, args):
        assert fn(*args) == 0.0

    @given(positive)
    def test_laser_sqrt_law(self, P):
        assert laser_coupling(2 * P, LAMBDA, KAPPA_C) == pytest.approx(
            math.sqrt(2) * laser_coupling(P, LAMBDA, KAPPA_C), rel=1e-12
        )

    @given(positive)
    def test_field_sqrt_law(self, P):
        assert field_from_power(4 * P, GEOMETRY) == pytest.approx(2 * field_from_power(P, GEOMETRY), rel=1e-12)

    @given(st.floats(1e-8, 1.0))
    def test_rabi_spin_scaling(self, H):
        quad = CrystalGeometry(GEOMETRY.length, GEOMETRY.width, GEOMETRY.height, 4 * GEOMETRY.spin_density)
        assert rabi_frequency(H, quad) == pytest.approx(2 * rabi_frequency(H, GEOMETRY), rel=1e-12)

    @given(positive)
    def test_inverse_pairs(self, x):
        assert laser_power(laser_coupling(x, LAMBDA, KAPPA_C), LAMBDA, KAPPA_C) == pytest.approx(x, rel=1e-12)
        assert power_from_field(field_from_power(x, GEOMETRY), GEOMETRY) == pytest.approx(x, rel=1e-12)
        assert field_from_rabi(rabi_frequency(x, GEOMETRY), GEOMETRY) == pytest.approx(x, rel=1e-12)

    @pytest.mark.parametrize("P", [-1e-3])
    def test_negative_power(self, P):
        with pytest.raises(DomainError):
            field_from_power(P, GEOMETRY)
        with pytest.raises(DomainError):
            laser_coupling(P, LAMBDA, KAPPA_C)


class TestRequiredPowers:
    def _baseline(self, params, **kw):
        wb = _wb(params)
        return required_powers(TWO_PI * 2e6, TWO_PI * 8e6, params, GEOMETRY, -wb, wb, **kw)

    def test_baseline_powers(self, params):
        r = self._baseline(params)
        assert r.P_0 == pytest.approx(0.91e-3, rel=0.03)
        assert r.P_L == pytest.approx(2.56e-3, rel=0.03)
        assert r.H_d == pytest.approx(8.7e-4, rel=0.02)
        assert r.Omega == pytest.approx(1.76e13, rel=0.01)
        assert r.N_spins == pytest.approx(4.22e10)

    def test_zero_targets(self, params):
        wb = _wb(params)
        r = required_powers(0.0, 0.0, params, GEOMETRY, -wb, wb)
        assert (r.P_0, r.P_L, r.H_d, r.Omega, r.E) == (0.0, 0.0, 0.0, 0.0, 0.0)

    def test_round_trip(self, params):
        wb = _wb(params)
        r = self._baseline(params)
        Omega, E = drives_from_powers(r.P_0, r.P_L, GEOMETRY, LAMBDA, params.kappa_c)
        G_m = math.sqrt(2) * params.g_m * abs(approx_magnon_amplitude(Omega, params.g_a, -wb, -wb))
        G_c = math.sqrt(2) * params.g_c * abs(approx_optical_amplitude(E, wb))
        assert G_m == pytest.approx(TWO_PI * 2e6, rel=1e-3)
        assert G_c == pytest.approx(TWO_PI * 8e6, rel=1e-3)

    @given(st.floats(0.1, 10.0), st.floats(0.1, 10.0))
    def test_power_scales_with_target_squared(self, s_m, s_c):
        params = baseline_params()
        wb = params.omega_b
        base = required_powers(TWO_PI * 2e6, TWO_PI * 8e6, params, GEOMETRY, -wb, wb)
        r = required_powers(s_m * TWO_PI * 2e6, s_c * TWO_PI * 8e6, params, GEOMETRY, -wb, wb)
        assert r.P_0 == pytest.approx(s_m**2 * base.P_0, rel=1e-12)
        assert r.P_L == pytest.approx(s_c**2 * base.P_L, rel=1e-12)

    def test_degenerate_denominator(self, params):
        # g_a^2 = Delta_m * Delta_a
        with pytest.raises(CalibrationError) as info:
            required_powers(1.0, 1.0, params, GEOMETRY, params.g_a, params.g_a, delta_a=params.g_a)
        assert info.value.step == "magnon"

    def test_zero_optical_detuning(self, params):
        with pytest.raises(CalibrationError) as info:
            required_powers(0.0, 1.0, params, GEOMETRY, -params.omega_b, 0.0)
        assert info.value.step == "optical"

    def test_negative_target(self, params):
        with pytest.raises(DomainError):
            required_powers(-1.0, 0.0, params, GEOMETRY, -params.omega_b, params.omega_b)
