"""Face-occupancy laws of the Apollonian insertion process.

Watching only how insertions distribute over a fixed set of faces turns
the process into a reinforced urn: every insertion picks a live face
uniformly, and a group holding c of the live faces both receives the
pick with probability proportional to c and then grows by two live
faces.  The same dynamics describe a pure-birth particle system where
each death spawns k = 3 offspring and every particle carries a mean-one
exponential clock; that equivalence is what makes the distributions
below exact rather than asymptotic.

The module provides the log-scale coefficient of the death-count pmf,
the pmf itself, the conditional occupancy law of a marked face group
(identical to a beta-binomial, which the evaluator cross-checks), a
sequential urn sampler, and a Monte Carlo check of the heavy-tail
threshold for adversarially chosen face groups.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import NamedTuple, Optional, Union

import numpy as np
from scipy.special import gammaln
from scipy.stats import betabinom

from . import _kernels
from .errors import DomainError
from .ran import Ran

__all__ = [
    "BranchingParams",
    "OccupancyLaw",
    "log_branching_coeff",
    "branching_coeff_exact",
    "death_count_pmf",
    "death_count_distribution",
    "occupancy_pmf",
    "occupancy_pmf_exact",
    "sample_occupancy",
    "tail_threshold",
    "count_tail_violations",
    "ViolationReport",
]

_EXACT_LIMIT = 30


@dataclass(frozen=True)
class BranchingParams:
    """A pure-birth particle system observed after a fixed number of deaths.

    ``s`` particles start alive, each with an independent mean-one
    exponential clock; a particle whose clock fires dies and spawns
    ``k`` children with fresh clocks.  After ``deaths`` deaths the
    population is s + deaths*(k-1).  ``t`` is the elapsed time.
    """

    k: int = 3
    s: int = 1
    deaths: int = 0
    t: float = 0.0

    def __post_init__(self):
        if self.k < 2:
            raise DomainError(f"offspring count must be >= 2, got {self.k}")
        if self.s < 1:
            raise DomainError(f"initial particle count must be >= 1, got {self.s}")
        if self.deaths < 0:
            raise DomainError(f"death count must be >= 0, got {self.deaths}")
        if not self.t >= 0:
            raise DomainError(f"time must be >= 0, got {self.t}")

    @property
    def population(self) -> int:
        return self.s + self.deaths * (self.k - 1)


@dataclass(frozen=True)
class OccupancyLaw:
    """Conditional law of insertions landing in a marked face group.

    ``faces`` live faces, of which ``marked`` are watched; out of
    ``insertions`` sequential insertions, the law gives the count that
    lands inside the marked group (equivalently inside the regions the
    marked faces develop into).
    """

    faces: int
    marked: int
    insertions: int

    def __post_init__(self):
        if self.faces < 1:
            raise DomainError(f"face count must be >= 1, got {self.faces}")
        if not 1 <= self.marked <= self.faces:
            raise DomainError(
                f"marked count must be in [1, {self.faces}], got {self.marked}"
            )
        if self.insertions < 0:
            raise DomainError(f"insertion count must be >= 0, got {self.insertions}")

    @classmethod
    def for_prefix(cls, sigma: int, marked: int, insertions: int) -> "OccupancyLaw":
        """Law over the 2*sigma+1 live faces of a sigma-step instance."""
        if sigma < 0:
            raise DomainError(f"sigma must be >= 0, got {sigma}")
        return cls(faces=2 * sigma + 1, marked=marked, insertions=insertions)


def log_branching_coeff(deaths: int, s: int, k: int = 3) -> float:
    """Log of the combinatorial coefficient of the death-count pmf.

    For even s this is log C(deaths + s/2 - 1, s/2 - 1); for odd s the
    product prod_{i=1..deaths} (2i-2+s)/(2i).  Both collapse to
    lgamma(deaths + h) - lgamma(h) - lgamma(deaths + 1) with
    h = s/(k-1), which also covers offspring counts other than 3.
    """
    if s < 1:
        raise DomainError(f"initial particle count must be >= 1, got {s}")
    if deaths < 0:
        raise DomainError(f"death count must be >= 0, got {deaths}")
    if k < 2:
        raise DomainError(f"offspring count must be >= 2, got {k}")
    h = s / (k - 1)
    return float(gammaln(deaths + h) - gammaln(h) - gammaln(deaths + 1))


def branching_coeff_exact(deaths: int, s: int, k: int = 3) -> Fraction:
    """Exact rational branching coefficient for small death counts.

    Only available for deaths <= 30; the value grows too fast beyond
    that for exactness to stay useful.  For even s the result is the
    integer C(deaths + s/2 - 1, s/2 - 1) and is checked against the
    crude bound s**deaths.
    """
    if deaths > _EXACT_LIMIT:
        raise DomainError(
            f"exact coefficients are limited to {_EXACT_LIMIT} deaths, got {deaths}"
        )
    if s < 1 or deaths < 0 or k < 2:
        raise DomainError("invalid branching parameters")
    out = Fraction(1)
    for i in range(1, deaths + 1):
        out *= Fraction((k - 1) * (i - 1) + s, (k - 1) * i)
    if k == 3 and s % 2 == 0:
        assert out.denominator == 1
        assert out <= Fraction(s) ** deaths
    return out


def death_count_pmf(params: BranchingParams) -> float:
    """Probability of exactly ``params.deaths`` deaths by time ``params.t``."""
    n, s, k, t = params.deaths, params.s, params.k, params.t
    if t == 0:
        return 1.0 if n == 0 else 0.0
    log_p = log_branching_coeff(n, s, k) - s * t
    if n > 0:
        log_p += n * math.log1p(-math.exp(-(k - 1) * t))
    return math.exp(log_p)


def death_count_distribution(s: int, t: float, k: int = 3, tol: float = 1e-12):
    """Death-count pmf as an array, truncated adaptively.

    Terms are accumulated until the remaining tail is provably below
    ``tol`` (the summands are unimodal in the count, so once past the
    peak a geometric majorant bounds the rest).
    """
    if not t >= 0:
        raise DomainError(f"time must be >= 0, got {t}")
    if t == 0:
        return np.array([1.0])
    log_growth = math.log1p(-math.exp(-(k - 1) * t))
    h = s / (k - 1)
    out = [math.exp(-s * t)]
    log_p = -s * t
    n = 1
    while True:
        # p_n / p_{n-1} = (n - 1 + h)/n * (1 - e^{-(k-1)t})
        log_p += math.log((n - 1 + h) / n) + log_growth
        out.append(math.exp(log_p))
        # later ratios are monotone between this one and the growth
        # factor, so their max caps the whole tail geometrically
        cap = max((n + h) / (n + 1), 1.0) * math.exp(log_growth)
        if cap < 1 and out[-1] * cap / (1 - cap) < tol:
            break
        n += 1
        if n > 50_000_000:  # pragma: no cover
            raise DomainError("death-count distribution did not converge")
    return np.array(out)


def occupancy_pmf(law: OccupancyLaw, m: int) -> float:
    """Probability that exactly ``m`` insertions land in the marked group.

    Evaluated in log space from the branching coefficients; every call
    cross-checks the equivalent beta-binomial form (marked and unmarked
    weights grow by two per pick, so the group totals follow a Polya
    urn) and insists on 1e-10 relative agreement.
    """
    n = law.insertions
    if not 0 <= m <= n:
        raise DomainError(f"occupancy must be in [0, {n}], got {m}")
    if law.marked == law.faces:
        return 1.0 if m == n else 0.0
    log_p = (
        log_branching_coeff(m, law.marked)
        + log_branching_coeff(n - m, law.faces - law.marked)
        - log_branching_coeff(n, law.faces)
    )
    p = math.exp(log_p)
    q = float(betabinom.pmf(m, n, law.marked / 2, (law.faces - law.marked) / 2))
    if max(p, q) > 1e-280:
        assert abs(p - q) <= 1e-10 * max(p, q), (p, q, law, m)
    return p


def occupancy_pmf_exact(law: OccupancyLaw, m: int) -> Fraction:
    """Exact rational occupancy probability (small insertion counts)."""
    n = law.insertions
    if not 0 <= m <= n:
        raise DomainError(f"occupancy must be in [0, {n}], got {m}")
    if law.marked == law.faces:
        return Fraction(1 if m == n else 0)
    return (
        branching_coeff_exact(m, law.marked)
        * branching_coeff_exact(n - m, law.faces - law.marked)
        / branching_coeff_exact(n, law.faces)
    )


def sample_occupancy(
    law: OccupancyLaw, seed: int, size: Optional[int] = None
) -> Union[int, np.ndarray]:
    """Simulate the urn: how many insertions land in the marked group.

    Runs the sequential dynamics literally: at step j the marked group
    is picked with probability (marked + 2*hits) / (faces + 2*j).  With
    ``size`` set, that many independent runs are returned as an array
    (one PCG64 stream seeded by ``seed`` drives them all).
    """
    k = 1 if size is None else int(size)
    if k < 0:
        raise DomainError(f"size must be >= 0, got {size}")
    rng = np.random.Generator(np.random.PCG64(seed))
    hits = np.zeros(k, dtype=np.int64)
    for j in range(law.insertions):
        u = rng.random(k)
        hits += u * (law.faces + 2 * j) < (law.marked + 2 * hits)
    return int(hits[0]) if size is None else hits


def tail_threshold(tau: int, sigma: int, insertions: int) -> float:
    """Occupancy ceiling for any tau-face group: 100*tau*N/sigma*ln(sigma/tau).

    Only meaningful for tau < sigma (the log must be positive).
    """
    if not 1 <= tau < sigma:
        raise DomainError(
            f"need 1 <= tau < sigma for a positive log, got tau={tau} sigma={sigma}"
        )
    if insertions < 0:
        raise DomainError(f"insertion count must be >= 0, got {insertions}")
    return 100.0 * tau * insertions / sigma * math.log(sigma / tau)


class ViolationReport(NamedTuple):
    """Outcome of a tail-threshold Monte Carlo run."""

    violations: int
    trials: int
    threshold: float
    worst: int
    vacuous: bool
    below_min_marked: bool


def count_tail_violations(
    ran: Ran, sigma: int, tau: int, insertions: int, trials: int, seed: int
) -> ViolationReport:
    """Monte Carlo check of the tail threshold against the worst face group.

    Each trial continues the insertion process ``insertions`` steps past
    the ``sigma``-prefix and totals the occupancy of the tau faces that
    received the most insertions -- the adversarial group choice, which
    dominates every fixed choice.  Occupancy counts are exchangeable
    over the 2*sigma+1 prefix faces, so only the face count matters and
    the instance argument serves validation.

    ``vacuous`` reports threshold >= insertions (the bound cannot fail);
    ``below_min_marked`` reports tau < ln(sigma)**2, outside the regime
    the threshold is designed for.
    """
    if not 0 <= sigma <= ran.n:
        raise DomainError(f"sigma must be in [0, {ran.n}], got {sigma}")
    faces = 2 * sigma + 1
    if tau > faces:
        raise DomainError(f"tau must be at most {faces}, got {tau}")
    if trials < 0:
        raise DomainError(f"trial count must be >= 0, got {trials}")
    threshold = tail_threshold(tau, sigma, insertions)
    viol, worst = _kernels.urn_tail_violations(
        faces, tau, insertions, trials, threshold, np.uint64(seed & 0xFFFFFFFFFFFFFFFF)
    )
    return ViolationReport(
        violations=int(viol),
        trials=trials,
        threshold=threshold,
        worst=int(worst),
        vacuous=threshold >= insertions,
        below_min_marked=tau < math.log(sigma) ** 2,
    )
