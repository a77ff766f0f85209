"""Analytic gadgets, round schedule, reference bounds, experiment driver."""

import math

import pytest

from apollonia import ran as R
from apollonia.analysis import (
    AnalysisParams,
    derived_scales,
    exp_square,
    inverse_failure_rate,
    log_power,
    reference_bounds,
    richness_cutoff,
    round_decomposition_experiment,
    round_schedule,
    round_trial,
    scaling_trial,
)
from apollonia.errors import DomainError
from apollonia.longest_path import longest_path_exact


def test_params_validation():
    AnalysisParams(n=27)
    with pytest.raises(DomainError):
        AnalysisParams(n=26)
    with pytest.raises(DomainError):
        AnalysisParams(n=100, alpha=1 / 3)
    with pytest.raises(DomainError):
        AnalysisParams(n=100, alpha=0.0)
    with pytest.raises(DomainError):
        AnalysisParams(n=100, c=2 / 3)
    with pytest.raises(DomainError):
        AnalysisParams(n=100, scale_exponent_override=1.0)
    assert AnalysisParams(n=100, alpha=0.2).scale_exponent == 0.1
    assert AnalysisParams(n=100, scale_exponent_override=1 / 3).scale_exponent == 1 / 3


def test_gadget_anchors():
    assert log_power(math.e, 0.77) == 1.0
    assert math.isclose(log_power(math.exp(16), 1 / 8), math.sqrt(2), rel_tol=1e-12)
    assert exp_square(0.0) == 1.0
    assert math.isclose(exp_square(1.0), math.e, rel_tol=1e-12)
    assert math.isclose(
        inverse_failure_rate(math.exp(math.e), 2.0), math.exp(math.e / 2), rel_tol=1e-12
    )
    assert math.isclose(
        inverse_failure_rate(math.exp(math.e**2), math.e),
        math.exp(math.e / 2),
        rel_tol=1e-12,
    )


def test_gadget_domains():
    with pytest.raises(DomainError):
        log_power(1.0, 0.5)
    with pytest.raises(DomainError):
        exp_square(27.0)
    with pytest.raises(DomainError):
        inverse_failure_rate(math.e, 1.0)
    with pytest.raises(DomainError):
        inverse_failure_rate(10.0, 0.0)


def test_gadget_monotonicity_sampled():
    xs = [1.0 + 0.37 * i for i in range(1, 101)]
    lp = [log_power(x, 0.15) for x in xs]
    assert all(a < b for a, b in zip(lp, lp[1:]))
    es = [exp_square(x / 10) for x in range(0, 100)]
    assert all(a < b for a, b in zip(es, es[1:]))
    ys = [0.1 * i for i in range(1, 101)]
    fr = [inverse_failure_rate(100.0, y) for y in ys]
    assert all(a > b for a, b in zip(fr, fr[1:]))


def test_cutoff_log_identity():
    # the log of the richness cutoff is (ln n)^(2 * exponent)
    for n, alpha in [(10**6, 0.3), (10**4, 0.2), (50, 0.1)]:
        p = AnalysisParams(n=n, alpha=alpha)
        assert math.isclose(
            math.log(richness_cutoff(p)),
            math.log(n) ** (2 * p.scale_exponent),
            rel_tol=1e-12,
        )


FROZEN_1E6 = {
    "scale_at_cutoff": 1.1254248807694627,
    "confidence_at_cutoff": 117.01083184016498,
    "survivor_factor": 103.97036162925745,
    "block_occupancy_max": 38012231.30277023,
    "partition_block_size": 190.8683319772223,
    "partition_total": 2636.9434556123447,
    "partition_blocks": 13.815510557964274,
    "confidence_ratio_diagnostic": 0.10202952490030834,
}


def test_derived_scales_frozen_at_target_size():
    p = AnalysisParams(n=10**6, alpha=0.3)
    assert math.isclose(richness_cutoff(p), 9.01073857003075, rel_tol=1e-12)
    scales = derived_scales(p)
    assert set(scales) == set(FROZEN_1E6)
    for key, want in FROZEN_1E6.items():
        assert math.isclose(scales[key], want, rel_tol=1e-10), key


def test_derived_scale_identities():
    for n in (10**4, 10**6):
        p = AnalysisParams(n=n, alpha=0.25)
        d = derived_scales(p)
        assert math.isclose(
            d["survivor_factor"] * d["scale_at_cutoff"],
            d["confidence_at_cutoff"],
            rel_tol=1e-12,
        )
        assert math.isclose(
            d["partition_total"],
            d["partition_block_size"] * d["partition_blocks"],
            rel_tol=1e-12,
        )
        assert math.isclose(d["partition_blocks"], math.log(n), rel_tol=1e-12)


def test_round_schedule_frozen_and_closed_form():
    p = AnalysisParams(n=10**6, alpha=0.3)
    s = round_schedule(p)
    assert s.checkpoints == (1000, 28033, 785828)
    assert s.rounds == 2
    assert math.isclose(s.predicted_min_rounds, 6.284299249570146, rel_tol=1e-10)
    # geometric closed form of the recursion, within one round
    cutoff = richness_cutoff(p)
    closed = math.floor(math.log(math.sqrt(p.n)) / math.log(1 + 3 * cutoff))
    assert abs(s.rounds - closed) <= 1
    # profile switch: the steeper exponent collapses the schedule
    pt = AnalysisParams(n=10**6, alpha=0.3, scale_exponent_override=1 / 3)
    assert math.isclose(richness_cutoff(pt), 316.6007702193575, rel_tol=1e-10)
    assert round_schedule(pt).checkpoints == (1000, 950803)


def test_round_schedule_contract():
    for n in (27, 100, 12345, 10**6):
        p = AnalysisParams(n=n, alpha=0.3)
        s = round_schedule(p)
        cps = s.checkpoints
        assert cps[0] == math.isqrt(n) + (0 if math.isqrt(n) ** 2 == n else 1)
        assert all(a < b for a, b in zip(cps, cps[1:]))
        assert cps[-1] <= n
        cutoff = richness_cutoff(p)
        for a, b in zip(cps, cps[1:]):
            ratio = b / a
            assert 1 + 3 * cutoff * (1 - 1 / a) <= ratio <= 1 + 3 * cutoff + 1 / a


def test_reference_bounds_frozen():
    p = AnalysisParams(n=10**6, alpha=0.3)
    b = reference_bounds(p)
    assert math.isclose(b["polylog"], 454872.7477861768, rel_tol=1e-10)
    assert math.isclose(b["stretched_exp"], 7962.29914088732, rel_tol=1e-10)
    assert math.isclose(b["rounds"], 100919.30778836543, rel_tol=1e-10)
    assert b["crossover_n"] == 27
    assert b["polylog"] > b["stretched_exp"]  # n is past the crossover


def test_experiment_rejects_bad_inputs():
    g = R.generate(40, 0)
    params = AnalysisParams(n=40)
    schedule = round_schedule(params)
    with pytest.raises(DomainError):
        round_decomposition_experiment(g, [0, 0], schedule)
    big = round_schedule(AnalysisParams(n=10**4))
    with pytest.raises(DomainError):
        round_decomposition_experiment(g, [0, 1, 2], big)


def test_experiment_confined_path():
    """A path living entirely inside the first checkpoint's prefix:
    nothing young is ever visited, so visited faces stay zero, the
    projected count is the whole path, and only the upper bound of the
    sandwich can hold."""
    g = R.generate(120, 3)
    params = AnalysisParams(n=120)
    schedule = round_schedule(params)
    sigma0 = schedule.checkpoints[0]
    _, path = longest_path_exact(R.prefix(g, sigma0))
    report = round_decomposition_experiment(g, path, schedule)
    assert report.path_length == len(path) - 1
    for row in report.rows:
        assert row.visited_faces == 0
        assert row.projected_vertices == len(path)
        assert not row.sandwich_ok  # the lower bound needs tau' >= tau-1
        assert row.ratio == 0.0
        assert row.rich_count == 0 and row.rich_long_count == 0
    assert report.sandwich_violations == len(report.rows)


def test_round_trial_end_to_end_small():
    report = round_trial(200, 1)
    assert report.n == 200
    assert len(report.rows) == len(round_schedule(AnalysisParams(n=200)).checkpoints)
    for row in report.rows:
        assert 0 <= row.visited_faces <= 2 * row.sigma + 1
        assert row.visited_faces <= row.projected_vertices + 1  # upper bound
        assert row.ratio == row.visited_faces / row.sigma
        assert row.rich_long_count <= row.rich_count
        assert isinstance(row.regime_ok, bool) or row.regime_ok in (True, False)
    assert report.ratios == [r.ratio for r in report.rows]


def test_round_trial_regression_values():
    """Pinned output of one full trial (instance, exact path, experiment)."""
    report = round_trial(2000, 0)
    got = [
        (r.sigma, r.visited_faces, r.rich_count, r.rich_long_count)
        for r in report.rows
    ]
    assert got == [(45, 42, 30, 30), (894, 398, 3, 3)]
    assert report.sandwich_violations == 2


def test_scaling_trial_row():
    row = scaling_trial(64, 5)
    assert set(row) == {
        "n",
        "seed",
        "L_exact",
        "L_heuristic",
        "polylog",
        "stretched_exp",
        "rounds",
    }
    assert row["n"] == 64 and row["seed"] == 5
    assert row["L_exact"] >= row["L_heuristic"] >= 2
    assert row["polylog"] > 0 and row["stretched_exp"] > 0 and row["rounds"] > 0
