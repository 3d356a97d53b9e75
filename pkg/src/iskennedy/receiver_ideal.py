"""The inverse-squeezing Kennedy receiver with perfect optics and detection.

Chain: a nulling displacement D(alpha) maps the BPSK pair to on-off keying,
then the inverse squeezer S(-r) turns both hypotheses into coherent states
{|0>, |2 gamma>} with gamma = alpha e^r.  Photon counting then sees Poisson
statistics with means mu0 = 0 and mu1 = 4 n_eff, and the MAP rule reduces to
an integer threshold.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .benchmarks import helstrom_cs, sql_cs, sql_dss_opt, bisect_root
from .errors import UndefinedProblemError
from .fock_statistics import CountDistribution, clamp_to_resolution, poisson_pmf
from .gaussian_states import SignalDesign


@dataclass(frozen=True)
class DecisionProblem:
    """Binary hypothesis test over a shared truncated outcome space."""

    prior0: float
    prior1: float
    dist0: CountDistribution
    dist1: CountDistribution

    def __post_init__(self):
        if abs(self.prior0 + self.prior1 - 1.0) > 1e-12 or self.prior0 < 0 or self.prior1 < 0:
            raise ValueError("priors must be nonnegative and sum to 1")
        # The signaling model fixes equal priors; they are stored for clarity.
        if abs(self.prior0 - 0.5) > 1e-12:
            raise ValueError("only equal priors (1/2, 1/2) are supported")
        if self.dist0.M != self.dist1.M:
            raise ValueError("both conditionals must share the same resolution M")

    @property
    def M(self) -> int:
        return self.dist0.M


@dataclass(frozen=True)
class DecisionRule:
    """Outcome -> symbol map plus its error budget.

    accept_set holds the outcomes mapped to symbol 1.  threshold is set when
    the rule is of the form {n >= n_th} and None otherwise.
    """

    accept_set: frozenset[int]
    threshold: int | None
    p_fa: float
    p_mi: float
    p_err: float

    def __post_init__(self):
        expected = 0.5 * (self.p_fa + self.p_mi)
        if abs(self.p_err - expected) > 1e-14:
            raise ValueError("p_err inconsistent with (p_fa + p_mi)/2")

    @classmethod
    def from_rates(cls, accept_set: frozenset[int], threshold: int | None,
                   p_fa: float, p_mi: float) -> "DecisionRule":
        return cls(accept_set=accept_set, threshold=threshold, p_fa=p_fa, p_mi=p_mi,
                   p_err=0.5 * (p_fa + p_mi))


def threshold_accept_set(n_th: int, M: int) -> frozenset[int]:
    return frozenset(range(max(n_th, 0), M + 1))


def transform_means(design: SignalDesign) -> tuple[float, float]:
    """Poisson means after the receiver front end: (0, 4 n_eff)."""
    return 0.0, 4.0 * design.n_eff


def ideal_count_pmf(design: SignalDesign, symbol: int, M: int) -> CountDistribution:
    """Count statistics behind a perfect detector, truncated to resolution M."""
    if symbol not in (0, 1):
        raise ValueError(f"symbol must be 0 or 1, got {symbol!r}")
    mu = transform_means(design)[symbol]
    return clamp_to_resolution(lambda n: poisson_pmf(n, mu), M)


def map_threshold_ideal(mu0: float, mu1: float) -> int:
    """Smallest count deciding symbol 1: ceil((mu1-mu0)/(ln mu1 - ln mu0)).

    The mu0 -> 0 limit of the ratio is 0+, so the threshold is 1 there.
    """
    if mu0 < 0 or mu1 <= mu0:
        raise ValueError(f"need mu1 > mu0 >= 0, got ({mu0}, {mu1})")
    if mu0 == 0.0:
        return 1
    return math.ceil((mu1 - mu0) / (math.log(mu1) - math.log(mu0)))


def p_err_ideal(N: float) -> float:
    """Receiver error exp(-4N(N+1))/2 at the optimal energy split."""
    if N < 0:
        raise ValueError("N must be >= 0")
    return 0.5 * math.exp(-4.0 * N * (N + 1.0))


def p_err_kennedy(N: float) -> float:
    """Conventional Kennedy (coherent-state on-off) error exp(-4N)/2."""
    if N < 0:
        raise ValueError("N must be >= 0")
    return 0.5 * math.exp(-4.0 * N)


def ratio_to_helstrom(N: float) -> float:
    """p_err_ideal / Helstrom bound.

    Algebraically E/(1 - sqrt(1-E)) = 1 + sqrt(1-E) with E = exp(-4N(N+1)),
    which avoids the cancellation in the quotient form and makes the [1, 2]
    range explicit.
    """
    if N < 0:
        raise ValueError("N must be >= 0")
    E = math.exp(-4.0 * N * (N + 1.0))
    return 1.0 + math.sqrt(1.0 - E)


@dataclass(frozen=True)
class BenchmarkCrossings:
    """Energies where the ideal receiver curve crosses each benchmark."""

    vs_sql_cs: float
    vs_sql_dss: float
    vs_hb_cs: float


def crossings_vs_benchmarks() -> BenchmarkCrossings:
    """Locate the three crossings on N in (0.05, 1]; about 0.21, 0.30, 0.40."""
    return BenchmarkCrossings(
        vs_sql_cs=bisect_root(lambda N: p_err_ideal(N) - sql_cs(N), 0.05, 1.0),
        vs_sql_dss=bisect_root(lambda N: p_err_ideal(N) - sql_dss_opt(N), 0.05, 1.0),
        vs_hb_cs=bisect_root(lambda N: p_err_ideal(N) - helstrom_cs(N), 0.05, 1.0),
    )


def ideal_decision(design: SignalDesign, M: int) -> DecisionRule:
    """Threshold-1 rule with its exact error rates over the truncated space."""
    mu0, mu1 = transform_means(design)
    if mu1 <= mu0:
        raise UndefinedProblemError("hypotheses are identical at zero energy")
    p_mi = math.exp(-mu1)  # P(n = 0 | symbol 1)
    return DecisionRule.from_rates(threshold_accept_set(1, M), 1, 0.0, p_mi)
