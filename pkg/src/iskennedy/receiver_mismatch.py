"""Receiver performance when the inverse squeezer is slightly wrong.

The inverse-squeezing module applies squeezing parameter (-r + dr) e^{j dt}
instead of -r.  Composing it with the transmitter squeezing leaves a single
residual squeezing (r_m, theta_m) after factoring out a photon-number-
preserving rotation; the symbol-0 output becomes a weakly squeezed vacuum
(even photon numbers only) and the symbol-1 output a displaced squeezed
state.  The MAP decision is then a set over outcomes rather than a single
threshold.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

from scipy.special import gammaln

from .fock_statistics import (
    CountDistribution,
    clamp_to_resolution,
    dss_pmf,
    poisson_pmf,
    sv_pmf,
    sv_tail_ge,
)
from .gaussian_states import SignalDesign
from .receiver_ideal import DecisionProblem, DecisionRule, threshold_accept_set

# Residual squeezing below this is numerically indistinguishable from the
# matched case; the coherent-state (Poisson) statistics take over.
_R_M_POISSON_CUTOFF = 1e-8


@dataclass(frozen=True)
class MismatchModel:
    """Magnitude error dr and axis error dt (radians) of the inverse squeezer."""

    delta_r: float
    delta_theta: float

    def __post_init__(self):
        if not (math.isfinite(self.delta_r) and math.isfinite(self.delta_theta)):
            raise ValueError("mismatch parameters must be finite")
        if abs(self.delta_theta) >= math.pi:
            raise ValueError(f"|delta_theta| must be < pi, got {self.delta_theta}")


@dataclass(frozen=True)
class ResidualSqueezing:
    """Reduction of transmitter + receiver squeezing to a single operation.

    x, y are the Bogoliubov coefficients of the composite (|x|^2 - |y|^2 = 1),
    r_m = asinh|y| the residual magnitude, theta_m its phase in (-pi, pi],
    vartheta the factored-out rotation angle (photon statistics ignore it),
    and gamma_m the effective complex displacement of the symbol-1 output.
    """

    x: complex
    y: complex
    r_m: float
    theta_m: float
    vartheta: float
    gamma_m: complex


def bogoliubov(r: float, mm: MismatchModel) -> tuple[complex, complex]:
    """Coefficients of a -> x a + y a^dag for receiver-then-transmitter squeezing."""
    if r < 0:
        raise ValueError("r must be >= 0")
    r_s = -r + mm.delta_r
    phase = cmath.exp(1j * mm.delta_theta)
    x = math.cosh(r_s) * math.cosh(r) + phase * math.sinh(r_s) * math.sinh(r)
    y = -math.cosh(r_s) * math.sinh(r) - phase * math.sinh(r_s) * math.cosh(r)
    return x, y


def _wrap_angle(t: float) -> float:
    """Wrap to (-pi, pi]."""
    w = math.remainder(t, math.tau)
    if w <= -math.pi:
        w += math.tau
    return w


def residual(design: SignalDesign, mm: MismatchModel) -> ResidualSqueezing:
    """Residual squeezing of the full receiver chain for a given signal design."""
    x, y = bogoliubov(design.r, mm)
    r_m = math.asinh(abs(y))
    vartheta = -cmath.phase(x)
    if abs(y) == 0.0:
        theta_m = 0.0  # degenerate phase: matched squeezing
    else:
        theta_m = _wrap_angle(cmath.phase(-y) - cmath.phase(x))
    gamma = design.gamma
    gamma_m = gamma * math.cosh(r_m) + gamma * cmath.exp(1j * theta_m) * math.sinh(r_m)
    return ResidualSqueezing(x=x, y=y, r_m=r_m, theta_m=theta_m,
                             vartheta=vartheta, gamma_m=gamma_m)


def first_order_residual(r: float, mm: MismatchModel) -> tuple[float, float]:
    """Small-mismatch approximations of (r_m, theta_m).

    r_m ~ sqrt(dr^2 + (dt/2 sinh 2r)^2) is accurate to second order; the
    theta_m expression arg(dr - j dt/2 sinh 2r) + dt sinh^2 r carries a
    first-order phase error of order dt/2 and is validation-only.
    """
    if r < 0:
        raise ValueError("r must be >= 0")
    if abs(mm.delta_r) > 0.2 or abs(mm.delta_theta) > 0.2:
        raise ValueError("first-order form is restricted to |dr|, |dt| <= 0.2")
    s2r = math.sinh(2.0 * r)
    r_m = math.hypot(mm.delta_r, 0.5 * mm.delta_theta * s2r)
    theta_m = (
        cmath.phase(complex(mm.delta_r, -0.5 * mm.delta_theta * s2r))
        + mm.delta_theta * math.sinh(r) ** 2
    )
    return r_m, _wrap_angle(theta_m)


def mismatch_count_pmf(design: SignalDesign, res: ResidualSqueezing, M: int,
                       symbol: int) -> CountDistribution:
    """Count statistics under residual squeezing, truncated to resolution M.

    Symbol 0 sees the squeezed-vacuum distribution of r_m; symbol 1 the
    displaced-squeezed distribution with displacement 2 gamma_m.  At
    negligible r_m both collapse to the matched-case statistics.
    """
    if symbol not in (0, 1):
        raise ValueError(f"symbol must be 0 or 1, got {symbol!r}")
    if res.r_m < _R_M_POISSON_CUTOFF:
        if symbol == 0:
            return clamp_to_resolution(lambda n: 1.0 if n == 0 else 0.0, M)
        mu = abs(2.0 * res.gamma_m) ** 2
        return clamp_to_resolution(lambda n: poisson_pmf(n, mu), M)
    if symbol == 0:
        return clamp_to_resolution(lambda n: sv_pmf(n, res.r_m), M)
    return clamp_to_resolution(
        lambda n: dss_pmf(n, 2.0 * res.gamma_m, res.r_m, res.theta_m), M
    )


def map_set_decision(problem: DecisionProblem) -> DecisionRule:
    """Bayes-optimal outcome labeling over the truncated space.

    Accept (decide 1) exactly where the weighted likelihood of symbol 1 is
    at least that of symbol 0; the resulting error is
    1 - sum_n max{pi0 P(n|0), pi1 P(n|1)}, the minimum over all labelings.
    """
    p0 = problem.dist0.probs
    p1 = problem.dist1.probs
    accept = frozenset(
        n for n in range(problem.M + 1)
        if problem.prior1 * p1[n] >= problem.prior0 * p0[n]
    )
    p_fa = float(sum(p0[n] for n in accept))
    p_mi = float(sum(p1[n] for n in range(problem.M + 1) if n not in accept))
    threshold = None
    if accept == threshold_accept_set(min(accept, default=problem.M + 1), problem.M):
        threshold = min(accept, default=None)
    return DecisionRule(accept_set=accept, threshold=threshold, p_fa=p_fa, p_mi=p_mi,
                        p_err=problem.prior0 * p_fa + problem.prior1 * p_mi)


def spd_mismatch_error(design: SignalDesign, res: ResidualSqueezing) -> DecisionRule:
    """Click/no-click receiver under mismatch, in closed form.

    P_FA = 1 - 1/cosh r_m (squeezed vacuum is not empty); P_Mi is the vacuum
    element of the symbol-1 distribution.
    """
    r_m, theta_m, gm2 = res.r_m, res.theta_m, 2.0 * res.gamma_m
    p_fa = -math.expm1(-math.log(math.cosh(r_m)))  # 1 - 1/cosh r_m
    p_mi = (1.0 / math.cosh(r_m)) * math.exp(
        -abs(gm2) ** 2 + (cmath.exp(-1j * theta_m) * gm2 * gm2).real * math.tanh(r_m)
    )
    return DecisionRule.from_rates(frozenset({1}), 1, p_fa, p_mi)


def parity_saturation_floor(M: int, delta_r: float) -> float:
    """Small-mismatch, high-energy error floor.

    Only even photon numbers populate the symbol-0 state, so the floor is
    set by the lowest even count at or above the detector resolution:
    n_min = 2 ceil(M/2) and
    P_sat ~ (1/2) n_min! / (2^{n_min} ((n_min/2)!)^2) dr^{n_min}.
    """
    if M < 1 or M != int(M):
        raise ValueError(f"M must be an integer >= 1, got {M!r}")
    n_min = 2 * math.ceil(M / 2)
    k = n_min // 2
    log_coef = gammaln(n_min + 1) - n_min * math.log(2.0) - 2.0 * gammaln(k + 1)
    return 0.5 * math.exp(log_coef) * abs(delta_r) ** n_min


def exact_parity_floor(M: int, r_m: float) -> float:
    """High-energy limit of the mismatch error: half the squeezed-vacuum tail
    over counts >= M (only even terms contribute)."""
    if M < 1 or M != int(M):
        raise ValueError(f"M must be an integer >= 1, got {M!r}")
    return 0.5 * sv_tail_ge(M, r_m)


def p_err_mismatch(design: SignalDesign, mm: MismatchModel, M: int) -> DecisionRule:
    """Full pipeline: Bogoliubov reduction, count statistics, set-based MAP."""
    res = residual(design, mm)
    problem = DecisionProblem(
        prior0=0.5,
        prior1=0.5,
        dist0=mismatch_count_pmf(design, res, M, 0),
        dist1=mismatch_count_pmf(design, res, M, 1),
    )
    return map_set_decision(problem)
