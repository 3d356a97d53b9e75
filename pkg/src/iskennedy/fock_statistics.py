"""Photon-number statistics: Poisson, squeezed vacuum, displaced squeezed states.

Everything that can under/overflow (factorials, tanh^n powers, Hermite
polynomial magnitudes) is evaluated in log space.  Hermite polynomials are
the physicists' convention H_{n+1}(z) = 2 z H_n(z) - 2 n H_{n-1}(z).

The displaced-squeezed-state pmf implemented here is, as a quantum state,
the photon distribution of squeezing applied after displacement,
S(r e^{j theta}) D(alpha_c) |0>; its n = 0 element is the vacuum overlap
(1/cosh r) exp(-|a|^2 + Re[e^{-j theta} a^2] tanh r), and the Hermite
argument alpha_c e^{-j theta/2} / sqrt(sinh 2r) is the unique scaling for
which the distribution is normalized (checked against an independent
Fock-space oracle in the test suite).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np
from scipy.special import gammaln, gammainc, gammaincc

from .errors import DegenerateSqueezingError, NumericalConsistencyError

# Partial pmf mass may exceed 1 by accumulated rounding; anything above this
# slack indicates a real bug in the pmf, not rounding.
_MASS_SLACK = 1e-9

# Magnitude at which the Hermite recurrence is rescaled to avoid overflow.
_RESCALE_AT = 1e150


def poisson_pmf(n: int, mu: float) -> float:
    """e^{-mu} mu^n / n!  (log-gamma evaluation once n exceeds 20)."""
    if mu < 0:
        raise ValueError(f"Poisson mean must be >= 0, got {mu}")
    if n < 0 or n != int(n):
        raise ValueError(f"count must be a nonnegative integer, got {n!r}")
    n = int(n)
    if mu == 0.0:
        return 1.0 if n == 0 else 0.0
    if n <= 20:
        return math.exp(-mu) * mu ** n / math.factorial(n)
    return math.exp(n * math.log(mu) - mu - gammaln(n + 1))


def poisson_tail_ge(k: int, mu: float) -> float:
    """P(X >= k) for X ~ Poisson(mu), via the regularized incomplete gamma."""
    if mu < 0:
        raise ValueError(f"Poisson mean must be >= 0, got {mu}")
    if k <= 0:
        return 1.0
    if mu == 0.0:
        return 0.0
    return float(gammainc(k, mu))


def poisson_cdf_below(k: int, mu: float) -> float:
    """P(X < k) for X ~ Poisson(mu)."""
    if mu < 0:
        raise ValueError(f"Poisson mean must be >= 0, got {mu}")
    if k <= 0:
        return 0.0
    if mu == 0.0:
        return 1.0
    return float(gammaincc(k, mu))


def sv_pmf(n: int, r: float) -> float:
    """Squeezed-vacuum photon pmf: zero for odd n, else
    (2k)!/(2^{2k} (k!)^2) tanh^{2k}(r) / cosh(r) with n = 2k."""
    if r < 0:
        raise ValueError(f"squeezing magnitude must be >= 0, got {r}")
    if n < 0 or n != int(n):
        raise ValueError(f"count must be a nonnegative integer, got {n!r}")
    n = int(n)
    if n % 2 == 1:
        return 0.0
    if r == 0.0:
        return 1.0 if n == 0 else 0.0
    k = n // 2
    if k == 0:
        return 1.0 / math.cosh(r)
    log_t = math.log(math.tanh(r))
    log_p = (
        gammaln(2 * k + 1)
        - 2 * k * math.log(2.0)
        - 2 * gammaln(k + 1)
        + 2 * k * log_t
        - math.log(math.cosh(r))
    )
    return math.exp(log_p)


def sv_tail_ge(n_min: int, r: float) -> float:
    """Sum of the squeezed-vacuum pmf over all n >= n_min.

    Terms decay geometrically like tanh^2(r), so the direct sum converges
    quickly; it stops once the running term falls below 1e-30 of the total.
    """
    if n_min <= 0:
        return 1.0
    k0 = (n_min + 1) // 2
    total = 0.0
    for k in range(k0, k0 + 100000):
        term = sv_pmf(2 * k, r)
        total += term
        if term < 1e-30 * max(total, 1e-300):
            break
    return total


def hermite_complex(n: int, z: complex) -> complex:
    """Physicists' Hermite polynomial H_n(z) by the three-term recurrence."""
    if n < 0 or n != int(n):
        raise ValueError(f"order must be a nonnegative integer, got {n!r}")
    h_prev, h = 0.0 + 0.0j, 1.0 + 0.0j
    for k in range(int(n)):
        h_prev, h = h, 2.0 * z * h - 2.0 * k * h_prev
    return h


def _hermite_abs2_log(n: int, z: complex) -> float:
    """log |H_n(z)|^2 with on-the-fly rescaling; -inf when H_n(z) = 0."""
    h_prev, h = 0.0 + 0.0j, 1.0 + 0.0j
    log_scale = 0.0
    for k in range(n):
        h_prev, h = h, 2.0 * z * h - 2.0 * k * h_prev
        m = max(abs(h), abs(h_prev))
        if m > _RESCALE_AT:
            h /= m
            h_prev /= m
            log_scale += math.log(m)
    if h == 0:
        return -math.inf
    return 2.0 * (math.log(abs(h)) + log_scale)


def dss_pmf(n: int, alpha_c: complex, r: float, theta: float = 0.0) -> float:
    """Photon pmf of a displaced squeezed state with complex displacement.

    Valid only for r > 0; the r -> 0 limit is a coherent state and callers
    must switch to poisson_pmf(n, |alpha_c|^2) below r = 1e-8.
    """
    if r <= 0:
        raise DegenerateSqueezingError(
            f"dss_pmf requires r > 0 (got {r}); use poisson_pmf(|alpha_c|^2) instead"
        )
    if n < 0 or n != int(n):
        raise ValueError(f"count must be a nonnegative integer, got {n!r}")
    n = int(n)
    alpha_c = complex(alpha_c)
    t = math.tanh(r)
    arg = alpha_c * np.exp(-0.5j * theta) / math.sqrt(math.sinh(2.0 * r))
    log_h2 = _hermite_abs2_log(n, complex(arg))
    if log_h2 == -math.inf:
        return 0.0
    log_p = (
        n * math.log(t / 2.0)
        - gammaln(n + 1)
        - math.log(math.cosh(r))
        + log_h2
        - abs(alpha_c) ** 2
        + (np.exp(-1j * theta) * alpha_c * alpha_c).real * t
    )
    return math.exp(log_p) if log_p < 0 else float(np.exp(log_p))


@dataclass(frozen=True)
class CountDistribution:
    """Pmf over detector outcomes 0..M, the last bin lumping all counts >= M."""

    probs: np.ndarray
    M: int
    truncated: bool = True

    def __post_init__(self):
        p = np.asarray(self.probs, dtype=float)
        if p.shape != (self.M + 1,):
            raise ValueError(f"expected {self.M + 1} probabilities, got shape {p.shape}")
        if np.any(p < -1e-15) or np.any(p > 1.0 + 1e-12):
            raise ValueError("probabilities out of [0, 1]")
        if abs(p.sum() - 1.0) > 1e-12:
            raise NumericalConsistencyError(f"pmf mass {p.sum()!r} != 1")
        object.__setattr__(self, "probs", np.clip(p, 0.0, 1.0))

    def mean(self) -> float:
        return float(np.arange(self.M + 1) @ self.probs)


def clamp_to_resolution(pmf: Callable[[int], float], M: int) -> CountDistribution:
    """Truncate an unbounded pmf to resolution M, lumping the tail into bin M."""
    if M < 1 or M != int(M):
        raise ValueError(f"resolution must be an integer >= 1, got {M!r}")
    M = int(M)
    probs = np.empty(M + 1)
    partial = 0.0
    for n in range(M):
        probs[n] = pmf(n)
        partial += probs[n]
    if partial > 1.0 + _MASS_SLACK:
        raise NumericalConsistencyError(f"partial pmf mass {partial} exceeds 1")
    probs[M] = max(0.0, 1.0 - partial)
    return CountDistribution(probs=probs, M=M)
