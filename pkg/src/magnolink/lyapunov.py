"""Steady-state covariance from ``A V + V A^T = -D`` and drift stability.

The solve vectorizes the equation into a dense ``n^2 x n^2`` linear system.
That is O(n^6) and only meant for the small fixed-size systems used here.
"""

from dataclasses import dataclass, field

import numpy as np

from magnolink.errors import DegenerateLyapunovError, NumericalError, UnstableSystemError

STABILITY_RTOL = 1e-6
RESIDUAL_RTOL = 1e-8
ASYMMETRY_RTOL = 1e-9


@dataclass(frozen=True)
class StabilityReport:
    stable: bool
    max_re: float
    eigenvalues: tuple = field(repr=False)
    margin: float = 0.0


def stability(A, omega_b=None):
    """Decide whether the linear dynamics generated by ``A`` decay.

    Stable means every eigenvalue satisfies ``Re(lambda) < -eps`` with
    ``eps = 1e-6 * omega_b``, which keeps round-off at the marginal boundary
    from being read as stable. Without ``omega_b`` the spectral radius sets
    the scale.
    """
    A = np.asarray(A, dtype=float)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise ValueError(f"drift matrix must be square, got shape {A.shape}")
    try:
        eigenvalues = np.linalg.eigvals(A)
    except np.linalg.LinAlgError as exc:
        raise NumericalError(f"eigenvalue computation failed: {exc}") from exc
    if not np.all(np.isfinite(eigenvalues)):
        raise NumericalError("drift spectrum contains non-finite values")
    scale = omega_b if omega_b is not None else float(np.max(np.abs(eigenvalues)))
    margin = STABILITY_RTOL * scale
    max_re = float(np.max(eigenvalues.real))
    return StabilityReport(
        stable=bool(max_re < -margin),
        max_re=max_re,
        eigenvalues=tuple(complex(z) for z in eigenvalues),
        margin=margin,
    )


def lyapunov_operator(A):
    """Matrix of ``V -> A V + V A^T`` acting on row-major ``vec(V)``."""
    n = A.shape[0]
    eye = np.eye(n)
    return np.kron(A, eye) + np.kron(eye, A)


def residual_norm(A, V, D):
    """Relative Frobenius residual ``||A V + V A^T + D|| / ||D||``."""
    r = np.linalg.norm(A @ V + V @ A.T + D)
    d = np.linalg.norm(D)
    return r / d if d > 0 else r


def solve_lyapunov(A, D, omega_b=None, check_stability=True):
    """Return the symmetric solution ``V`` of ``A V + V A^T = -D``.

    Raises
    ------
    UnstableSystemError
        If ``A`` fails :func:`stability`; no steady state exists.
    DegenerateLyapunovError
        If the vectorized operator is singular (``lambda_i + lambda_j = 0``).
    NumericalError
        If the solution fails the residual or symmetry checks.
    """
    A = np.asarray(A, dtype=float)
    D = np.asarray(D, dtype=float)
    n = A.shape[0]
    if D.shape != (n, n):
        raise ValueError(f"diffusion matrix shape {D.shape} does not match drift {A.shape}")
    if check_stability:
        report = stability(A, omega_b)
        if not report.stable:
            raise UnstableSystemError(
                f"drift matrix is not stable (max Re(lambda) = {report.max_re:.6e})", report=report
            )
    try:
        vec = np.linalg.solve(lyapunov_operator(A), -D.reshape(-1))
    except np.linalg.LinAlgError as exc:
        raise DegenerateLyapunovError(f"Lyapunov operator is singular: {exc}") from exc
    V = vec.reshape(n, n)

    scale = np.max(np.abs(V))
    if scale > 0 and np.max(np.abs(V - V.T)) > ASYMMETRY_RTOL * scale:
        raise NumericalError(
            f"Lyapunov solution asymmetry {np.max(np.abs(V - V.T)) / scale:.3e} exceeds {ASYMMETRY_RTOL:g}"
        )
    V = 0.5 * (V + V.T)

    res = residual_norm(A, V, D)
    if res >= RESIDUAL_RTOL:
        raise NumericalError(f"Lyapunov residual {res:.3e} exceeds {RESIDUAL_RTOL:g}")
    return V
