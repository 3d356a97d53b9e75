"""Signal alphabet for binary phase-shift keying with displaced squeezed vacuum.

The two symbols are phase-opposite displaced squeezed states D(+/-alpha)S(r)|0>
with real alpha >= 0 and r >= 0.  Total mean photon number N = alpha^2 + sinh^2(r)
is split between displacement and squeezing by the squeezing fraction
beta = sinh^2(r)/N.  Quadrature convention: X = (a + a^dag)/sqrt(2), so the
vacuum variance is 1/2 and the squeezed X-variance is exp(-2r)/2.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class SignalDesign:
    """One point of the alphabet parameterization.

    Attributes
    ----------
    N : float
        Mean photon number per symbol, N = alpha^2 + sinh^2(r).
    beta : float
        Squeezing fraction sinh^2(r)/N, in [0, 1].
    alpha : float
        Real displacement amplitude, >= 0.
    r : float
        Squeezing magnitude, >= 0.
    gamma : float
        Effective amplitude alpha*exp(r) seen after inverse squeezing.
    n_eff : float
        Effective photon number gamma^2.  Equals N(N+1) at the optimal beta.
    """

    N: float
    beta: float
    alpha: float
    r: float
    gamma: float
    n_eff: float


@dataclass(frozen=True)
class PhaseSpacePoint:
    x: float
    p: float

    def __post_init__(self):
        if not (math.isfinite(self.x) and math.isfinite(self.p)):
            raise ValueError("phase-space coordinates must be finite")


@dataclass(frozen=True)
class GaussianState:
    """First and second moments of a single-mode Gaussian state.

    d is the (2,) displacement vector (<X>, <P>); V is the 2x2 symmetric
    covariance matrix.  For the pure states of this package det V = 1/4.
    """

    d: np.ndarray
    V: np.ndarray

    def __post_init__(self):
        d = np.asarray(self.d, dtype=float)
        V = np.asarray(self.V, dtype=float)
        if d.shape != (2,) or V.shape != (2, 2):
            raise ValueError("expected shapes d=(2,), V=(2,2)")
        if not np.allclose(V, V.T, rtol=0.0, atol=1e-12):
            raise ValueError("covariance matrix must be symmetric")
        if np.linalg.det(V) <= 0 or V[0, 0] <= 0:
            raise ValueError("covariance matrix must be positive definite")
        object.__setattr__(self, "d", d)
        object.__setattr__(self, "V", V)


def _check_symbol(symbol: int) -> int:
    if symbol not in (0, 1):
        raise ValueError(f"symbol must be 0 or 1, got {symbol!r}")
    return symbol


def optimal_beta(N: float) -> float:
    """Energy split that minimizes the discrimination error at fixed N."""
    if N < 0:
        raise ValueError(f"mean photon number must be >= 0, got {N}")
    return N / (2.0 * N + 1.0)


def make_design(N: float, beta: float) -> SignalDesign:
    """Build the alphabet point for total energy N and squeezing fraction beta."""
    if N < 0:
        raise ValueError(f"mean photon number must be >= 0, got {N}")
    if not 0.0 <= beta <= 1.0:
        raise ValueError(f"squeezing fraction must lie in [0, 1], got {beta}")
    alpha = math.sqrt(N * (1.0 - beta))
    r = math.asinh(math.sqrt(N * beta))
    gamma = alpha * math.exp(r)
    return SignalDesign(N=N, beta=beta, alpha=alpha, r=r, gamma=gamma, n_eff=gamma * gamma)


def design_at_optimal_beta(N: float) -> SignalDesign:
    return make_design(N, optimal_beta(N))


def gaussian_state(design: SignalDesign, symbol: int) -> GaussianState:
    """Moments of the symbol state: d = (+/- sqrt(2) alpha, 0), V = diag(e^-2r, e^2r)/2."""
    s = 1.0 if _check_symbol(symbol) == 1 else -1.0
    d = np.array([s * math.sqrt(2.0) * design.alpha, 0.0])
    V = np.diag([0.5 * math.exp(-2.0 * design.r), 0.5 * math.exp(2.0 * design.r)])
    return GaussianState(d=d, V=V)


def wigner_dss(point: PhaseSpacePoint, design: SignalDesign, symbol: int) -> float:
    """Wigner density (1/pi) exp{-e^2r (x -/+ sqrt(2)a)^2 - e^-2r p^2} at a point."""
    s = 1.0 if _check_symbol(symbol) == 1 else -1.0
    dx = point.x - s * math.sqrt(2.0) * design.alpha
    expo = -math.exp(2.0 * design.r) * dx * dx - math.exp(-2.0 * design.r) * point.p * point.p
    return math.exp(expo) / math.pi


def homodyne_pdf(x: float, design: SignalDesign, symbol: int) -> float:
    """Probability density of the X-quadrature outcome given the sent symbol.

    This is the p-marginal of the Wigner function: a Gaussian of variance
    exp(-2r)/2 centered at +/- sqrt(2) alpha.
    """
    s = 1.0 if _check_symbol(symbol) == 1 else -1.0
    dx = x - s * math.sqrt(2.0) * design.alpha
    return math.exp(design.r) / math.sqrt(math.pi) * math.exp(-math.exp(2.0 * design.r) * dx * dx)
