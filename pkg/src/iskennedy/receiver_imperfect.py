"""Receiver performance with a lossy, noisy, finite-resolution photon counter.

Detection efficiency eta and mean dark count rate nu turn the ideal Poisson
statistics into Poisson(eta * mu_i + nu); resolution M lumps all counts >= M
into one bin.  The likelihood ratio stays monotone in n, so the MAP decision
is an integer threshold, clipped at M.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import gammaln

from .errors import UndefinedProblemError
from .fock_statistics import (
    CountDistribution,
    clamp_to_resolution,
    poisson_cdf_below,
    poisson_pmf,
    poisson_tail_ge,
)
from .gaussian_states import SignalDesign
from .receiver_ideal import DecisionRule, threshold_accept_set, transform_means

# Below this dark rate the threshold formula's denominator blows up and the
# rule is plain on-off detection.
_NU_ONOFF_CUTOFF = 1e-12


@dataclass(frozen=True)
class DetectorModel:
    """Photon counter with efficiency eta, dark rate nu, resolution M.

    M = 1 models a single-photon (click / no-click) detector.
    """

    eta: float
    nu: float
    M: int

    def __post_init__(self):
        if not 0.0 < self.eta <= 1.0:
            raise ValueError(f"eta must lie in (0, 1], got {self.eta}")
        if self.nu < 0:
            raise ValueError(f"nu must be >= 0, got {self.nu}")
        if self.M < 1 or self.M != int(self.M):
            raise ValueError(f"M must be an integer >= 1, got {self.M!r}")


def detected_count_pmf(design: SignalDesign, det: DetectorModel, symbol: int) -> CountDistribution:
    """Poisson(eta * mu_i + nu) truncated to the detector resolution."""
    if symbol not in (0, 1):
        raise ValueError(f"symbol must be 0 or 1, got {symbol!r}")
    mu = det.eta * transform_means(design)[symbol] + det.nu
    return clamp_to_resolution(lambda n: poisson_pmf(n, mu), det.M)


def optimal_threshold(det: DetectorModel, n_eff: float) -> int:
    """MAP threshold min{ceil(4 eta n_eff / ln(1 + 4 eta n_eff / nu)), M}."""
    if n_eff < 0:
        raise ValueError("n_eff must be >= 0")
    signal = 4.0 * det.eta * n_eff
    if det.nu < _NU_ONOFF_CUTOFF:
        if signal == 0.0:
            raise UndefinedProblemError("no signal and no dark counts: nothing to decide")
        return 1
    if signal == 0.0:
        # Continuous limit of signal/log1p(signal/nu) as signal -> 0.
        return min(max(1, math.ceil(det.nu)), det.M)
    return min(math.ceil(signal / math.log1p(signal / det.nu)), det.M)


def p_err_imperfect(design: SignalDesign, det: DetectorModel) -> DecisionRule:
    """Threshold rule and its exact error rates.

    False alarms are the upper Poisson tail of the dark-count mean at the
    threshold; misses are the lower tail of the signal+dark mean.  Lumping
    counts >= M into one bin changes neither tail for thresholds <= M.
    """
    n_th = optimal_threshold(det, design.n_eff)
    mu1 = 4.0 * det.eta * design.n_eff + det.nu
    p_fa = poisson_tail_ge(n_th, det.nu)
    p_mi = poisson_cdf_below(n_th, mu1)
    return DecisionRule.from_rates(threshold_accept_set(n_th, det.M), n_th, p_fa, p_mi)


def map_error_imperfect(design: SignalDesign, det: DetectorModel) -> float:
    """Brute-force MAP error over the truncated outcome space.

    Must coincide with the thresholded rule; exposed so callers can verify.
    """
    p0 = detected_count_pmf(design, det, 0).probs
    p1 = detected_count_pmf(design, det, 1).probs
    return 1.0 - 0.5 * sum(max(a, b) for a, b in zip(p0, p1))


def saturation_floor(M: int, nu: float) -> float:
    """High-energy error floor nu^M / (2 M!)."""
    if nu < 0:
        raise ValueError("nu must be >= 0")
    if M < 1 or M != int(M):
        raise ValueError(f"M must be an integer >= 1, got {M!r}")
    if nu == 0.0:
        return 0.0
    return 0.5 * math.exp(M * math.log(nu) - gammaln(M + 1))


def exact_saturation_floor(M: int, nu: float) -> float:
    """Exact high-energy limit: half the dark-count tail P(n >= M; nu)."""
    if nu < 0:
        raise ValueError("nu must be >= 0")
    if M < 1 or M != int(M):
        raise ValueError(f"M must be an integer >= 1, got {M!r}")
    return 0.5 * poisson_tail_ge(M, nu)


def apply_detector_to_pmf(pmf, det: DetectorModel, incident_cutoff: int | None = None) -> CountDistribution:
    """Push an arbitrary incident-photon pmf through the (eta, nu) detector.

    Experimental composition used only by the CLI: detected counts are a
    binomial thinning of the incident count plus independent Poisson darks.
    `pmf` maps an incident photon number to its probability; incident numbers
    are summed until 1 - 1e-12 of the mass is covered (or incident_cutoff).
    """
    limit = incident_cutoff if incident_cutoff is not None else 100000
    detected = [0.0] * (det.M + 1)
    covered = 0.0
    dark = [poisson_pmf(j, det.nu) for j in range(det.M)]
    for k in range(limit + 1):
        pk = pmf(k)
        covered += pk
        if pk > 0.0:
            # P(j detected | k incident) = Binom(j; k, eta), j <= min(k, M-1)
            for j in range(0, min(k, det.M - 1) + 1):
                b = _binom_pmf(j, k, det.eta)
                for n in range(j, det.M):
                    detected[n] += pk * b * dark[n - j]
        if 1.0 - covered < 1e-12:
            break
    partial = sum(detected[:det.M])
    detected[det.M] = max(0.0, 1.0 - partial)
    return CountDistribution(probs=np.array(detected), M=det.M)


def _binom_pmf(j: int, k: int, eta: float) -> float:
    if eta == 1.0:
        return 1.0 if j == k else 0.0
    log_b = (
        gammaln(k + 1) - gammaln(j + 1) - gammaln(k - j + 1)
        + j * math.log(eta) + (k - j) * math.log1p(-eta)
    )
    return math.exp(log_b)
