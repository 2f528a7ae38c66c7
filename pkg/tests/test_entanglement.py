import dataclasses
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from magnolink.constants import TWO_PI
from magnolink.entanglement import (
    PairCM,
    min_symplectic_eigenvalue_closed_form,
    min_symplectic_eigenvalue_pt,
    covariance_matrix,
    evaluate_point,
    log_negativity,
    phonon_occupation,
    physicality_min_eig,
    reduce_pair,
)
from magnolink.errors import DomainError, UnphysicalCovarianceError
from magnolink.model import ModeKind
from pointgen import random_stable_points

PAIR = (ModeKind.OPTICAL, ModeKind.MICROWAVE)


def tmsv(r):
    c, s = math.cosh(2 * r) / 2, math.sinh(2 * r) / 2
    V = np.zeros((4, 4))
    V[:2, :2] = V[2:, 2:] = c * np.eye(2)
    V[:2, 2:] = V[2:, :2] = s * np.diag([1.0, -1.0])
    return V


def rotation(theta):
    c, s = math.cos(theta), math.sin(theta)
    return np.array([[c, -s], [s, c]])


def pair(V):
    return PairCM(matrix=np.asarray(V, dtype=float), pair=PAIR)


class TestReducePair:
    def test_vacuum(self):
        p = reduce_pair(np.eye(8) / 2, ("c", "a"))
        np.testing.assert_array_equal(p.matrix, np.eye(4) / 2)
        assert p.pair == PAIR

    def test_order_and_blocks(self):
        V = np.arange(64, dtype=float).reshape(8, 8)
        V = V + V.T
        p = reduce_pair(V, (ModeKind.OPTICAL, ModeKind.MICROWAVE))
        idx = [6, 7, 0, 1]
        np.testing.assert_array_equal(p.matrix, V[np.ix_(idx, idx)])
        np.testing.assert_array_equal(p.first, V[6:8, 6:8])
        np.testing.assert_array_equal(p.cross, V[6:8, 0:2])

    def test_block_diagonal_has_no_cross(self):
        V = np.diag(np.arange(1.0, 9.0))
        assert not reduce_pair(V, ("m", "b")).cross.any()

    def test_same_mode_rejected(self):
        with pytest.raises(DomainError):
            reduce_pair(np.eye(8), ("a", "a"))


class TestLogNegativity:
    def test_vacuum(self):
        assert log_negativity(pair(np.eye(4) / 2)) == 0.0

    def test_tmsv_half(self):
        assert log_negativity(pair(tmsv(0.5))) == pytest.approx(1.0, abs=1e-12)

    def test_tmsv_family(self):
        r = np.linspace(0.0, 2.0, 401)
        err = max(abs(log_negativity(pair(tmsv(x))) - 2 * x) for x in r)
        assert err < 1e-9

    def test_thermal_product(self):
        assert log_negativity(pair(3.5 * np.eye(4))) == 0.0

    def test_natural_log(self):
        # eta^- = e^{-2r}/2 for the TMSV, so E = -ln(e^{-2r}) in nats
        assert log_negativity(pair(tmsv(1.0))) == pytest.approx(2.0, abs=1e-12)

    def test_unphysical(self):
        V = tmsv(0.5)
        V[:2, 2:] = V[2:, :2] = 5.0 * np.eye(2)
        with pytest.raises(UnphysicalCovarianceError) as info:
            log_negativity(pair(V))
        assert "det_v" in info.value.details

    @settings(max_examples=200, deadline=None)
    @given(
        r=st.floats(0.0, 2.0),
        theta=st.floats(-math.pi, math.pi),
        phi=st.floats(-math.pi, math.pi),
        nth=st.floats(0.0, 3.0),
    )
    def test_local_rotation_invariance(self, r, theta, phi, nth):
        V = tmsv(r) + nth * np.eye(4)
        S = np.zeros((4, 4))
        S[:2, :2] = rotation(theta)
        S[2:, 2:] = rotation(phi)
        assert abs(log_negativity(pair(S @ V @ S.T)) - log_negativity(pair(V))) < 1e-10

    @settings(max_examples=100, deadline=None)
    @given(seed=st.integers(0, 2**32 - 1))
    def test_product_states_are_separable(self, seed):
        rng = np.random.default_rng(seed)
        V = np.zeros((4, 4))
        for k in (0, 2):
            # random single-mode Gaussian: rotated squeezed thermal state
            r, n, th = rng.uniform(0, 1.5), rng.uniform(0, 5), rng.uniform(0, math.pi)
            R = rotation(th)
            V[k:k + 2, k:k + 2] = (n + 0.5) * R @ np.diag([math.exp(2 * r), math.exp(-2 * r)]) @ R.T
        assert log_negativity(pair(V)) == 0.0


class TestPhononOccupation:
    def test_ground(self):
        assert phonon_occupation(np.eye(8) / 2) == 0.0

    def test_thermal(self):
        V = np.eye(8) / 2
        V[4, 4] = V[5, 5] = 5.23
        assert phonon_occupation(V) == pytest.approx(4.73, abs=1e-12)

    def test_cooled_baseline(self, scenario):
        V = covariance_matrix(scenario.operating_point())
        assert phonon_occupation(V) == pytest.approx(0.17, abs=0.02)

    def test_unphysical(self):
        V = np.eye(8) / 4
        with pytest.raises(UnphysicalCovarianceError):
            phonon_occupation(V)


class TestEvaluatePoint:
    def test_baseline_entangled(self, scenario):
        r = scenario.evaluate()
        assert r.stable and r.E_ca > 0
        assert r.n_b_eff == pytest.approx(0.17, abs=0.02)
        assert r.physicality_min_eig >= -1e-8

    def test_magnon_optics_entangled_at_weak_electromagnonic_coupling(self, scenario):
        r = scenario.with_value("g_a", TWO_PI * 1e6).evaluate()
        assert r.E_cm > 0 and r.E_ca > 0

    def test_no_parametric_source(self, scenario):
        r = scenario.with_value("G_m", 0.0).evaluate()
        assert r.stable
        assert r.E_ca == 0.0 and r.E_cm == 0.0

    def test_hot_bath_kills_entanglement(self, scenario):
        assert scenario.with_value("T", 1.0).evaluate().E_ca == 0.0

    def test_unstable_point(self, scenario):
        r = scenario.with_value("G_m", TWO_PI * 6e6).evaluate()
        assert not r.stable and r.max_re > 0
        assert (r.E_ca, r.E_cm, r.E_ab, r.E_mb) == (0.0, 0.0, 0.0, 0.0)
        assert math.isnan(r.n_b_eff)
        assert len(r.eigenvalues) == 8

    def test_deterministic(self, scenario):
        op = scenario.operating_point()
        assert evaluate_point(op) == evaluate_point(op)

    def test_error_carries_point(self, scenario, monkeypatch):
        import magnolink.entanglement as ent

        def broken(V):
            raise UnphysicalCovarianceError("synthetic")

        monkeypatch.setattr(ent, "phonon_occupation", broken)
        op = scenario.operating_point()
        with pytest.raises(UnphysicalCovarianceError) as info:
            evaluate_point(op)
        assert info.value.point == op

    def test_physical_random_points(self, rng):
        for op in random_stable_points(rng, 100):
            assert physicality_min_eig(covariance_matrix(op)) >= -1e-8

    def test_no_down_conversion_random_points(self, rng):
        for op in random_stable_points(rng, 30, G_m=0.0):
            r = evaluate_point(op)
            assert r.E_ca == 0.0 and r.E_cm == 0.0

    def test_continuity_in_optical_detuning(self, scenario):
        wb = scenario.params.omega_b
        # the baseline is stable for roughly 0.58 < delta_c / omega_b < 1.4
        x = np.linspace(0.6, 1.38, 401) * wb
        results = [dataclasses.replace(scenario, delta_c_eff=d).evaluate() for d in x]
        assert all(r.stable for r in results)
        E = np.array([r.E_ca for r in results])
        jumps = np.abs(np.diff(E))
        # Lipschitz estimate from the coarse grid, with generous headroom
        coarse = np.abs(np.diff(E[::8])).max() / 8
        assert jumps.max() <= 4 * coarse + 1e-12

    def test_monotone_temperature_decay(self, scenario):
        temps = np.linspace(0.01, 0.5, 50)
        E = [scenario.with_value("T", T).evaluate().E_ca for T in temps]
        assert all(b <= a for a, b in zip(E, E[1:]))


def test_closed_form_agrees_on_random_points(rng):
    for op in random_stable_points(rng, 30):
        V = covariance_matrix(op)
        for pair in (("c", "a"), ("c", "m"), ("a", "b"), ("m", "b")):
            p = reduce_pair(V, pair)
            a = min_symplectic_eigenvalue_pt(p)
            b = min_symplectic_eigenvalue_closed_form(p)
            assert a == pytest.approx(b, rel=1e-6)
