"""Analytic scales and the round-decomposition experiment.

The long-path analysis of the insertion process runs in rounds: take a
prefix of about sqrt(n) insertions, grow it by a multiple of its size,
look at how the longest path of the final instance threads through the
prefix's faces, and repeat.  This module provides the small analytic
gadgets that parameterize the argument (all logarithms natural), the
round checkpoints, closed-form reference lengths to compare measured
paths against, and the experiment driver that measures, per checkpoint:

* how many prefix faces the path visits and the visit ratio,
* how many visited faces receive a rich load of next-round insertions,
* how many of those rich faces internally contain a long path of their
  own (solved exactly on the extracted sub-instance).

The upper side of the projection sandwich (visited faces at most the
projected vertex count plus one) is asserted outright at every
checkpoint; the lower side and the statistical claims (ratio halving,
the rich-survivor ceiling) are reported as counts, with trend
assertions left to ensemble-level tests.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from . import _kernels
from .errors import DomainError
from .longest_path import heuristic_long_path, longest_path_exact
from .ran import Ran, generate, projection_face_bounds, face_subinstance

__all__ = [
    "AnalysisParams",
    "log_power",
    "exp_square",
    "richness_cutoff",
    "inverse_failure_rate",
    "derived_scales",
    "RoundSchedule",
    "round_schedule",
    "reference_bounds",
    "RoundRow",
    "RoundReport",
    "round_decomposition_experiment",
    "round_trial",
    "scaling_trial",
]

_MIN_N = 27  # the first integer with ln(ln(n)) safely above zero


@dataclass(frozen=True)
class AnalysisParams:
    """Knobs of the round analysis.

    ``alpha`` drives the polylog target length n/(ln n)^alpha and the
    default scale exponent alpha/2; ``c`` drives the stretched
    exponential target n*exp(-(ln n)^c).  ``scale_exponent_override``
    replaces the exponent of the log-power scale (the stretched target
    is reached by rerunning the argument with exponent 1/3).
    """

    n: int
    alpha: float = 0.3
    c: float = 0.6
    scale_exponent_override: Optional[float] = None

    def __post_init__(self):
        if self.n < _MIN_N:
            raise DomainError(f"n must be at least {_MIN_N}, got {self.n}")
        if not 0 < self.alpha < 1 / 3:
            raise DomainError(f"alpha must be in (0, 1/3), got {self.alpha}")
        if not 0 < self.c < 2 / 3:
            raise DomainError(f"c must be in (0, 2/3), got {self.c}")
        if self.scale_exponent_override is not None and not (
            0 < self.scale_exponent_override < 1
        ):
            raise DomainError(
                f"scale exponent must be in (0, 1), got {self.scale_exponent_override}"
            )

    @property
    def scale_exponent(self) -> float:
        if self.scale_exponent_override is not None:
            return self.scale_exponent_override
        return self.alpha / 2


def log_power(x: float, exponent: float) -> float:
    """(ln x) ** exponent, the slowly growing scale everything runs on."""
    if not x > 1:
        raise DomainError(f"log_power needs x > 1, got {x}")
    return math.log(x) ** exponent


def exp_square(x: float) -> float:
    """exp(x**2); refuses arguments whose square overflows a float."""
    if x * x > 700:
        raise DomainError(f"exp_square overflows at |x| > ~26.5, got {x}")
    return math.exp(x * x)


def richness_cutoff(params: AnalysisParams) -> float:
    """Occupancy level above which a face counts as rich.

    exp of the squared log-power scale at n; its log is
    (ln n) ** (2 * scale exponent).
    """
    return exp_square(log_power(params.n, params.scale_exponent))


def inverse_failure_rate(x: float, y: float) -> float:
    """exp(ln x / (y * ln ln x)): the reciprocal failure odds at scale y.

    Decreasing in y; needs x > e so the inner log is positive.
    """
    if not x > math.e:
        raise DomainError(f"inverse_failure_rate needs x > e, got {x}")
    if not y > 0:
        raise DomainError(f"rate scale must be positive, got {y}")
    return math.exp(math.log(x) / (y * math.log(math.log(x))))


def _checked_exp(log_value: float, what: str) -> float:
    if log_value > 700:
        raise DomainError(f"{what} overflows: exp({log_value:.3g})")
    return math.exp(log_value)


def derived_scales(params: AnalysisParams) -> dict:
    """The scale family derived from the richness cutoff.

    Keys:
      scale_at_cutoff        log-power scale evaluated at the cutoff
      confidence_at_cutoff   exp(scale / (2 ln scale)), the per-face
                             confidence weight (the simplified form;
                             the general inverse-failure-rate value is
                             reported as a ratio diagnostic)
      survivor_factor        confidence_at_cutoff / scale_at_cutoff
      block_occupancy_max    200 n ln ln n / ln n
      partition_block_size   (ln n)**2
      partition_total        (ln n)**3
      partition_blocks       ln n
      confidence_ratio_diagnostic  general / simplified confidence
    """
    e = params.scale_exponent
    n = params.n
    log_cutoff = math.log(n) ** (2 * e)
    if not log_cutoff > 1:
        raise DomainError("richness cutoff too small; increase n or the exponent")
    w0 = log_cutoff**e
    if not w0 > 1:
        raise DomainError("scale at cutoff must exceed 1")
    phi0 = _checked_exp(w0 / (2 * math.log(w0)), "confidence at cutoff")
    general = _checked_exp(log_cutoff / (w0 * math.log(log_cutoff)), "confidence")
    log_n = math.log(n)
    return {
        "scale_at_cutoff": w0,
        "confidence_at_cutoff": phi0,
        "survivor_factor": phi0 / w0,
        "block_occupancy_max": 200.0 * n * math.log(log_n) / log_n,
        "partition_block_size": log_n**2,
        "partition_total": log_n**3,
        "partition_blocks": log_n,
        "confidence_ratio_diagnostic": general / phi0,
    }


@dataclass(frozen=True)
class RoundSchedule:
    """Checkpoint prefix sizes for the round experiment.

    Starts at ceil(sqrt(n)) and grows every round by three times the
    current size times the richness cutoff (rounded up), stopping at
    the last checkpoint that fits inside n.  ``predicted_min_rounds``
    is the asymptotic round-count floor (ln n) ** (1 - 2 * exponent),
    reported for comparison only; at desk scale the actual count is
    far below it.
    """

    params: AnalysisParams
    checkpoints: tuple
    predicted_min_rounds: float

    @property
    def rounds(self) -> int:
        return len(self.checkpoints) - 1


def round_schedule(params: AnalysisParams) -> RoundSchedule:
    cutoff = richness_cutoff(params)
    s = math.isqrt(params.n)
    if s * s < params.n:
        s += 1  # integer-exact ceil(sqrt(n))
    cps = [s]
    while True:
        nxt = s + math.ceil(3 * s * cutoff)
        if nxt > params.n:
            break
        cps.append(nxt)
        s = nxt
    predicted = math.log(params.n) ** (1 - 2 * params.scale_exponent)
    return RoundSchedule(
        params=params, checkpoints=tuple(cps), predicted_min_rounds=predicted
    )


def reference_bounds(params: AnalysisParams) -> dict:
    """Closed-form reference path lengths at size n.

    ``polylog`` is n / (ln n)^alpha, ``stretched_exp`` is
    n * exp(-(ln n)^c), and ``rounds`` is the survivor count the round
    argument guarantees: ln n + 100 ln n / exp(w0 / ln w0) * n.
    ``crossover_n`` is the smallest valid n at which polylog exceeds
    stretched_exp for these exponents (the ratio is monotone, so the
    comparison is settled from there on).
    """
    n = params.n
    log_n = math.log(n)
    scales = derived_scales(params)
    w0 = scales["scale_at_cutoff"]
    survivor_rate = _checked_exp(w0 / math.log(w0), "survivor rate")
    out = {
        "polylog": n / log_n**params.alpha,
        "stretched_exp": n * math.exp(-(log_n**params.c)),
        "rounds": log_n + 100.0 * log_n / survivor_rate * n,
    }
    m = _MIN_N
    while m <= 10**18:
        u = math.log(m)
        if u**params.c > params.alpha * math.log(u):
            break
        m *= 2
    out["crossover_n"] = m
    return out


@dataclass(frozen=True)
class RoundRow:
    """Measurements at one checkpoint of the round experiment."""

    index: int
    sigma: int
    visited_faces: int
    projected_vertices: int
    ratio: float
    rich_count: int
    rich_long_count: int
    rich_long_bound: float
    rich_long_ok: bool
    regime_ok: bool
    sandwich_ok: bool


@dataclass(frozen=True)
class RoundReport:
    """Per-checkpoint rows for one instance and one path."""

    n: int
    path_length: int
    rows: tuple

    @property
    def ratios(self) -> list:
        return [r.ratio for r in self.rows]

    @property
    def sandwich_violations(self) -> int:
        return sum(1 for r in self.rows if not r.sandwich_ok)


def round_decomposition_experiment(
    ran: Ran, path: Sequence[int], schedule: RoundSchedule
) -> RoundReport:
    """Measure how a path threads the face structure, round by round.

    At each checkpoint sigma the path is projected onto the
    sigma-prefix and the projection sandwich is checked.  Its upper
    side (visited faces at most projected vertices plus one) is a
    structural fact and is asserted outright; its lower side fails for
    any path that walks two prefix vertices in a row, so it is recorded
    per row (``sandwich_ok``) and totalled on the report
    (``sandwich_violations``) instead of raised.  Faces the
    path visits are *rich* when the next window (this checkpoint to the
    next, the last one running to n) inserts at least the richness
    cutoff into them; rich faces are *long* when their extracted
    sub-instance has an exact longest path of at least occupancy
    divided by the log-power scale of the occupancy.  The long-rich
    count is compared against survivor_factor * visited /
    confidence_at_cutoff and the comparison reported, not asserted.
    """
    p = list(map(int, path))
    if not ran.is_path(p):
        raise DomainError("input path invalid")
    params = schedule.params
    cps = schedule.checkpoints
    if not cps:
        raise DomainError("schedule has no checkpoints")
    if any(b <= a for a, b in zip(cps, cps[1:])) or not 0 <= cps[0] <= cps[-1] <= ran.n:
        raise DomainError("schedule does not fit the instance")
    scales = derived_scales(params)
    cutoff = richness_cutoff(params)
    e = params.scale_exponent
    w0 = scales["scale_at_cutoff"]
    loglog_n = math.log(math.log(params.n))
    rows = []
    for i, sigma in enumerate(cps):
        hi = cps[i + 1] if i + 1 < len(cps) else ran.n
        bounds = projection_face_bounds(ran, sigma, p)
        assert bounds["upper_ok"], (
            f"face visits exceed projected vertices + 1 at checkpoint {i}: {bounds}"
        )
        visited = bounds["tau_prime"]
        # occupancy of each visited face over the window (sigma, hi]
        window = np.arange(sigma + 1, hi + 1, dtype=np.int64)
        occupancy: dict = {}
        if window.size:
            anc = _kernels.ancestor_leaf_faces(
                ran.choices, sigma, ran.choices[window - 1]
            )
            faces, counts = np.unique(anc, return_counts=True)
            occupancy = dict(zip(faces.tolist(), counts.tolist()))
        young = [v for v in p if v >= sigma + 3]
        if young:
            hit = _kernels.ancestor_leaf_faces(
                ran.choices, sigma, ran.choices[np.array(young) - 3]
            )
            visited_set = set(hit.tolist())
        else:
            visited_set = set()
        assert len(visited_set) == visited
        rich = [f for f in sorted(visited_set) if occupancy.get(f, 0) >= cutoff]
        rich_long = 0
        for f in rich:
            load = occupancy[f]
            sub = face_subinstance(ran, sigma, hi, f)
            assert sub.n == load
            length, _ = longest_path_exact(sub)
            if length >= load / log_power(load, e):
                rich_long += 1
        bound = scales["survivor_factor"] * visited / scales["confidence_at_cutoff"]
        ratio = visited / sigma
        if visited > 0:
            spread = math.log(sigma / visited)
            regime_ok = e * loglog_n <= spread <= w0 / math.log(w0)
        else:
            regime_ok = False
        rows.append(
            RoundRow(
                index=i,
                sigma=sigma,
                visited_faces=visited,
                projected_vertices=bounds["tau"],
                ratio=ratio,
                rich_count=len(rich),
                rich_long_count=rich_long,
                rich_long_bound=bound,
                rich_long_ok=rich_long <= bound,
                regime_ok=regime_ok,
                sandwich_ok=bool(bounds["lower_ok"] and bounds["upper_ok"]),
            )
        )
    return RoundReport(n=ran.n, path_length=len(p) - 1, rows=tuple(rows))


def round_trial(
    n: int,
    seed: int,
    alpha: float = 0.3,
    c: float = 0.6,
    scale_exponent_override: Optional[float] = None,
) -> RoundReport:
    """Generate an instance, solve it exactly, run the round experiment."""
    params = AnalysisParams(
        n=n, alpha=alpha, c=c, scale_exponent_override=scale_exponent_override
    )
    ran = generate(n, seed)
    _, path = longest_path_exact(ran)
    return round_decomposition_experiment(ran, path, round_schedule(params))


def scaling_trial(n: int, seed: int, alpha: float = 0.3, c: float = 0.6) -> dict:
    """One row of the length-scaling experiment: exact vs heuristic vs
    the closed-form reference lengths."""
    ran = generate(n, seed)
    exact_len, _ = longest_path_exact(ran)
    heur_len = len(heuristic_long_path(ran)) - 1
    bounds = reference_bounds(AnalysisParams(n=n, alpha=alpha, c=c))
    return {
        "n": n,
        "seed": seed,
        "L_exact": exact_len,
        "L_heuristic": heur_len,
        "polylog": bounds["polylog"],
        "stretched_exp": bounds["stretched_exp"],
        "rounds": bounds["rounds"],
    }
