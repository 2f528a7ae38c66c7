"""Two-mode reductions of the steady-state covariance matrix and the
logarithmic negativity of each pair."""

import math
from dataclasses import dataclass

import numpy as np

from magnolink.errors import DomainError, MagnolinkError, UnphysicalCovarianceError
from magnolink.lyapunov import solve_lyapunov, stability
from magnolink.model import ModeKind, build_diffusion, build_drift, symplectic_form

DISCRIMINANT_ATOL = 1e-12
OCCUPATION_ATOL = 1e-9
# 2 eta^- within this of 1 is separable to working precision
SEPARABLE_RTOL = 1e-13

# (name, first mode, second mode) for every pair reported per point
PAIRS = (
    ("E_ca", ModeKind.OPTICAL, ModeKind.MICROWAVE),
    ("E_cm", ModeKind.OPTICAL, ModeKind.MAGNON),
    ("E_ab", ModeKind.MICROWAVE, ModeKind.PHONON),
    ("E_mb", ModeKind.MAGNON, ModeKind.PHONON),
)
METRICS = ("E_ca", "E_cm", "E_ab", "E_mb", "n_b_eff")


@dataclass(frozen=True)
class PairCM:
    """4x4 covariance matrix of two modes, first-named mode first."""

    matrix: np.ndarray
    pair: tuple

    @property
    def first(self):
        return self.matrix[:2, :2]

    @property
    def second(self):
        return self.matrix[2:, 2:]

    @property
    def cross(self):
        return self.matrix[:2, 2:]


@dataclass(frozen=True)
class PointResult:
    stable: bool
    max_re: float
    E_ca: float = 0.0
    E_cm: float = 0.0
    E_ab: float = 0.0
    E_mb: float = 0.0
    n_b_eff: float = math.nan
    physicality_min_eig: float = math.nan
    eigenvalues: tuple = ()

    def metric(self, name):
        if name not in METRICS and name not in ("stable", "max_re", "physicality_min_eig"):
            raise KeyError(f"unknown metric {name!r}")
        return getattr(self, name)

    def as_dict(self, spectrum=False):
        out = {
            "stable": self.stable,
            "max_re": self.max_re,
            "E_ca": self.E_ca,
            "E_cm": self.E_cm,
            "E_ab": self.E_ab,
            "E_mb": self.E_mb,
            "n_b_eff": self.n_b_eff,
            "physicality_min_eig": self.physicality_min_eig,
        }
        if spectrum:
            out["eigenvalues"] = [[z.real, z.imag] for z in self.eigenvalues]
        return out


def reduce_pair(V, pair):
    first, second = (ModeKind.parse(mode) for mode in pair)
    if first is second:
        raise DomainError(f"pair needs two distinct modes, got {first.value}{second.value}")
    idx = list(first.quadratures + second.quadratures)
    return PairCM(matrix=np.array(V)[np.ix_(idx, idx)], pair=(first, second))


_PT_FLIP = np.diag([1.0, 1.0, 1.0, -1.0])


def _invariants(p):
    det_a = np.linalg.det(p.first)
    det_c = np.linalg.det(p.second)
    det_ac = np.linalg.det(p.cross)
    det_v = np.linalg.det(p.matrix)
    return dict(det_a=det_a, det_c=det_c, det_ac=det_ac, det_v=det_v)


def min_symplectic_eigenvalue_closed_form(p):
    """``eta^-`` from the determinant invariants.

    Loses about half the digits when the two symplectic eigenvalues are
    close (sqrt of a near-zero discriminant); kept as a cross-check.
    """
    inv = _invariants(p)
    sigma = inv["det_a"] + inv["det_c"] - 2.0 * inv["det_ac"]
    disc = sigma**2 - 4.0 * inv["det_v"]
    if disc < 0:
        if disc < -DISCRIMINANT_ATOL:
            raise UnphysicalCovarianceError(
                f"negative discriminant {disc:.3e} in symplectic spectrum", details=inv
            )
        disc = 0.0
    # sigma - sqrt(disc) rewritten as 4 det / (sigma + sqrt(disc)) to avoid cancellation
    root = math.sqrt(disc)
    if sigma > 0:
        inner = 4.0 * inv["det_v"] / (sigma + root)
    else:
        inner = sigma - root
    eta = math.sqrt(inner / 2.0) if inner > 0 else 0.0
    if not (eta > 0 and math.isfinite(eta)):
        raise UnphysicalCovarianceError(f"symplectic eigenvalue eta^- = {eta!r} is not positive", details=inv)
    return eta


def min_symplectic_eigenvalue_pt(p):
    """Smallest symplectic eigenvalue of the partially transposed pair CM.

    With ``V~ = L L^T`` the symplectic eigenvalues are the moduli of the
    eigenvalues of the Hermitian ``L^T (i Omega) L``, which stay accurate
    when the two eigenvalues coincide (e.g. product of vacua).
    """
    Vt = _PT_FLIP @ np.asarray(p.matrix, dtype=float) @ _PT_FLIP
    if not np.all(np.isfinite(Vt)):
        raise UnphysicalCovarianceError("pair covariance matrix is not finite", details=_invariants(p))
    try:
        L = np.linalg.cholesky(0.5 * (Vt + Vt.T))
    except np.linalg.LinAlgError:
        raise UnphysicalCovarianceError(
            "pair covariance matrix is not positive definite", details=_invariants(p)
        ) from None
    H = L.T @ (1j * symplectic_form(2)) @ L
    eta = float(np.min(np.abs(np.linalg.eigvalsh(H))))
    if not (eta > 0 and math.isfinite(eta)):
        raise UnphysicalCovarianceError(f"symplectic eigenvalue eta^- = {eta!r} is not positive", details=_invariants(p))
    return eta


def log_negativity(p):
    """``max(0, -ln(2 eta^-))`` in nats."""
    two_eta = 2.0 * min_symplectic_eigenvalue_pt(p)
    if two_eta >= 1.0 - SEPARABLE_RTOL:
        return 0.0
    return -math.log(two_eta)


def phonon_occupation(V):
    """``<b^dag b> = (V_qq + V_pp - 1) / 2``."""
    n = 0.5 * (V[4, 4] + V[5, 5] - 1.0)
    if n < 0:
        if n < -OCCUPATION_ATOL:
            raise UnphysicalCovarianceError(f"negative phonon occupation {n:.3e}")
        n = 0.0
    return float(n)


def physicality_min_eig(V):
    """Smallest eigenvalue of ``V + i Omega / 2`` (>= 0 for a physical state)."""
    n_modes = V.shape[0] // 2
    H = V + 0.5j * symplectic_form(n_modes)
    return float(np.min(np.linalg.eigvalsh(H)))


def covariance_matrix(op):
    """Steady-state CM of an operating point (raises if unstable)."""
    return solve_lyapunov(build_drift(op), build_diffusion(op), omega_b=op.omega_b)


def evaluate_point(op):
    """Drift -> stability -> covariance -> pair entanglement for one point.

    Unstable points come back with ``stable=False``, zero entanglement and
    NaN occupation; they have no steady state to characterize.
    """
    try:
        A = build_drift(op)
        report = stability(A, omega_b=op.omega_b)
        if not report.stable:
            return PointResult(stable=False, max_re=report.max_re, eigenvalues=report.eigenvalues)
        V = solve_lyapunov(A, build_diffusion(op), omega_b=op.omega_b, check_stability=False)
        values = {name: log_negativity(reduce_pair(V, (x, y))) for name, x, y in PAIRS}
        return PointResult(
            stable=True,
            max_re=report.max_re,
            n_b_eff=phonon_occupation(V),
            physicality_min_eig=physicality_min_eig(V),
            eigenvalues=report.eigenvalues,
            **values,
        )
    except MagnolinkError as exc:
        if exc.point is None:
            exc.point = op
        raise
