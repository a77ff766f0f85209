"""Branching coefficients, occupancy laws, samplers, tail thresholds."""

import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from apollonia import ran as R
from apollonia.errors import DomainError
from apollonia.occupancy import (
    BranchingParams,
    OccupancyLaw,
    branching_coeff_exact,
    count_tail_violations,
    death_count_distribution,
    death_count_pmf,
    log_branching_coeff,
    occupancy_pmf,
    occupancy_pmf_exact,
    sample_occupancy,
    tail_threshold,
)

from _reference import reference_branching_coeff, reference_occupancy_pmf


# -- branching coefficients ------------------------------------------------


def test_coefficient_anchors():
    assert branching_coeff_exact(1, 2) == 1  # C(1, 0): one death, pair start
    assert branching_coeff_exact(1, 6) == 3  # C(3, 2)
    assert branching_coeff_exact(1, 1) == Fraction(1, 2)
    assert branching_coeff_exact(2, 1) == Fraction(3, 8)
    assert branching_coeff_exact(2, 3) == Fraction(15, 8)
    assert branching_coeff_exact(0, 5) == 1


def test_coefficient_matches_both_parity_forms():
    for s in range(1, 9):
        for deaths in range(0, 12):
            assert branching_coeff_exact(deaths, s) == reference_branching_coeff(
                deaths, s
            )


def test_log_coefficient_matches_exact():
    for s in range(1, 8):
        for deaths in range(0, 25):
            want = math.log(branching_coeff_exact(deaths, s))
            got = log_branching_coeff(deaths, s)
            assert abs(got - want) <= 1e-11 * max(1.0, abs(want))


def test_even_s_coefficients_are_integers_bounded_by_powers():
    for s in (2, 4, 6, 8):
        for deaths in range(0, 15):
            c = branching_coeff_exact(deaths, s)
            assert c.denominator == 1
            assert c <= Fraction(s) ** deaths


def test_coefficient_guards():
    with pytest.raises(DomainError):
        branching_coeff_exact(31, 1)
    with pytest.raises(DomainError):
        log_branching_coeff(-1, 1)
    with pytest.raises(DomainError):
        log_branching_coeff(1, 0)
    with pytest.raises(DomainError):
        log_branching_coeff(1, 1, k=1)


def test_general_offspring_counts():
    # k=4: h = s/3; one death from a single particle has weight s/(k-1)
    assert branching_coeff_exact(1, 2, k=4) == Fraction(2, 3)
    assert math.isclose(
        log_branching_coeff(3, 2, k=4),
        math.log(branching_coeff_exact(3, 2, k=4)),
        rel_tol=1e-12,
    )


# -- death-count pmf -------------------------------------------------------


def test_death_pmf_time_zero_is_degenerate():
    assert death_count_pmf(BranchingParams(deaths=0, t=0.0)) == 1.0
    assert death_count_pmf(BranchingParams(deaths=3, t=0.0)) == 0.0
    assert death_count_distribution(1, 0.0).tolist() == [1.0]


def test_death_pmf_first_terms():
    # no deaths by time t: all s clocks still running
    for s, t in [(1, 0.5), (2, 1.0), (5, 0.3)]:
        assert math.isclose(
            death_count_pmf(BranchingParams(s=s, deaths=0, t=t)),
            math.exp(-s * t),
            rel_tol=1e-12,
        )


def test_death_distribution_normalizes():
    for s in (1, 2, 5):
        for t in (0.1, 1.0, 3.0):
            total = death_count_distribution(s, t).sum()
            assert abs(total - 1.0) <= 1e-9, (s, t, total)


def test_death_distribution_entries_match_pointwise_pmf():
    dist = death_count_distribution(3, 0.7)
    for n in (0, 1, 2, 10, 40):
        assert math.isclose(
            dist[n],
            death_count_pmf(BranchingParams(s=3, deaths=n, t=0.7)),
            rel_tol=1e-11,
        )


def test_params_population():
    assert BranchingParams(s=1, deaths=4).population == 9
    assert BranchingParams(k=4, s=2, deaths=3).population == 11
    with pytest.raises(DomainError):
        BranchingParams(s=0)
    with pytest.raises(DomainError):
        BranchingParams(t=-1.0)


# -- occupancy pmf ---------------------------------------------------------


def test_occupancy_anchors():
    law = OccupancyLaw(faces=3, marked=1, insertions=1)
    assert occupancy_pmf_exact(law, 1) == Fraction(1, 3)
    law2 = OccupancyLaw(faces=3, marked=1, insertions=2)
    assert occupancy_pmf_exact(law2, 2) == Fraction(1, 5)
    assert math.isclose(occupancy_pmf(law2, 2), 0.2, rel_tol=1e-12)


def test_all_faces_marked_is_a_point_mass():
    law = OccupancyLaw(faces=5, marked=5, insertions=7)
    assert occupancy_pmf(law, 7) == 1.0
    assert occupancy_pmf(law, 3) == 0.0
    assert occupancy_pmf_exact(law, 7) == 1


def test_exact_pmf_equals_exhaustive_enumeration():
    for faces in (3, 5, 7):
        for marked in range(1, faces):
            for insertions in range(0, 5):
                law = OccupancyLaw(faces, marked, insertions)
                ref = reference_occupancy_pmf(faces, marked, insertions)
                for m in range(insertions + 1):
                    assert occupancy_pmf_exact(law, m) == ref[m]


def test_float_pmf_tracks_exact():
    law = OccupancyLaw(faces=7, marked=3, insertions=25)
    for m in range(26):
        want = float(occupancy_pmf_exact(law, m))
        assert math.isclose(occupancy_pmf(law, m), want, rel_tol=1e-10)


def test_normalization_grid():
    for faces in (3, 21, 201):
        for marked in {1, faces // 3, faces - 1}:
            for insertions in (1, 10, 100):
                law = OccupancyLaw(faces, max(marked, 1), insertions)
                total = sum(occupancy_pmf(law, m) for m in range(insertions + 1))
                assert abs(total - 1.0) <= 1e-9, (faces, marked, insertions)


def test_out_of_range_occupancy():
    law = OccupancyLaw(faces=3, marked=1, insertions=4)
    with pytest.raises(DomainError):
        occupancy_pmf(law, 5)
    with pytest.raises(DomainError):
        occupancy_pmf_exact(law, -1)


def test_for_prefix_counts_faces():
    law = OccupancyLaw.for_prefix(sigma=10, marked=5, insertions=50)
    assert law.faces == 21
    with pytest.raises(DomainError):
        OccupancyLaw.for_prefix(sigma=-1, marked=1, insertions=0)


@settings(max_examples=60, deadline=None)
@given(
    faces=st.integers(1, 40),
    insertions=st.integers(0, 12),
    data=st.data(),
)
def test_pmf_normalizes_everywhere(faces, insertions, data):
    marked = data.draw(st.integers(1, faces))
    law = OccupancyLaw(faces, marked, insertions)
    total = sum(occupancy_pmf_exact(law, m) for m in range(insertions + 1))
    assert total == 1


# -- sampling --------------------------------------------------------------


def test_sampler_is_seed_deterministic():
    law = OccupancyLaw(faces=21, marked=5, insertions=50)
    a = sample_occupancy(law, 123, size=100)
    b = sample_occupancy(law, 123, size=100)
    assert (a == b).all()
    assert isinstance(sample_occupancy(law, 5), int)


def test_sampler_single_pick_frequency():
    law = OccupancyLaw(faces=3, marked=1, insertions=1)
    draws = sample_occupancy(law, 7, size=100_000)
    # Pr(hit) = 1/3; allow ~4 sigma
    assert abs(draws.mean() - 1 / 3) < 4 * math.sqrt(2 / 9 / 100_000)


def test_sampler_all_marked_always_hits():
    law = OccupancyLaw(faces=4, marked=4, insertions=9)
    assert (sample_occupancy(law, 0, size=50) == 9).all()


def test_sampler_tv_distance_moderate():
    law = OccupancyLaw(faces=21, marked=5, insertions=50)
    draws = sample_occupancy(law, 42, size=100_000)
    counts = np.bincount(draws, minlength=51) / draws.size
    pmf = np.array([occupancy_pmf(law, m) for m in range(51)])
    tv = 0.5 * np.abs(counts - pmf).sum()
    assert tv < 0.02


def test_empirical_process_occupancy_matches_law():
    """Face occupancies of the real insertion process follow the urn law."""
    from apollonia import _kernels

    sigma, marked, insertions, trials = 4, 3, 12, 200_000
    g = R.generate(sigma, 5)
    leaves, count, err = _kernels.replay_leaves(g.choices)
    assert err == -1 and count == 2 * sigma + 1
    # group labels per slot: ids below `marked` are the watched ones;
    # occupancies are exchangeable, so which slots carry them is free
    labels = np.full(count, marked, dtype=np.int64)
    labels[:marked] = np.arange(marked)
    totals = _kernels.urn_marked_totals(
        labels, count, marked, insertions, trials, np.uint64(99)
    )
    counts = np.bincount(totals, minlength=insertions + 1) / trials
    law = OccupancyLaw.for_prefix(sigma, marked, insertions)
    pmf = np.array([occupancy_pmf(law, m) for m in range(insertions + 1)])
    tv = 0.5 * np.abs(counts - pmf).sum()
    assert tv < 0.01


# -- tail threshold --------------------------------------------------------


def test_threshold_anchors():
    # tau = sigma/e makes the log factor exactly 1
    sigma = 100
    tau = round(sigma / math.e)
    want = 100 * tau * 1000 / sigma * math.log(sigma / tau)
    assert math.isclose(tail_threshold(tau, sigma, 1000), want, rel_tol=1e-12)
    assert math.isclose(
        tail_threshold(10, 100, 10**5),
        100 * 10 * 10**5 / 100 * math.log(10),
        rel_tol=1e-12,
    )
    assert tail_threshold(10, 100, 10**5) > 2.3e6


def test_threshold_monotone_in_insertions():
    assert tail_threshold(5, 50, 2000) == 2 * tail_threshold(5, 50, 1000)


def test_threshold_domain():
    with pytest.raises(DomainError):
        tail_threshold(10, 10, 100)
    with pytest.raises(DomainError):
        tail_threshold(0, 10, 100)
    with pytest.raises(DomainError):
        tail_threshold(1, 10, -1)


def test_tail_violations_zero_insertions():
    g = R.generate(20, 0)
    report = count_tail_violations(g, 20, 3, 0, 50, 1)
    assert report.violations == 0
    assert report.worst == 0
    assert report.vacuous  # threshold 0 >= insertions 0


def test_tail_violations_flags_and_counts():
    g = R.generate(100, 1)
    report = count_tail_violations(g, 100, 10, 2000, 200, 7)
    assert report.trials == 200
    assert 0 <= report.violations <= 200
    assert report.worst <= 2000
    assert report.below_min_marked  # 10 < ln(100)^2 ~ 21.2
    assert report.vacuous == (report.threshold >= 2000)
    # the adversarial worst group can never miss this badly: the top-10
    # of 201 groups over 2000 insertions take well above the mean share
    assert report.worst >= 2000 * 10 // 201


def test_tail_violations_domain_checks():
    g = R.generate(10, 0)
    with pytest.raises(DomainError):
        count_tail_violations(g, 11, 2, 10, 5, 0)
    with pytest.raises(DomainError):
        count_tail_violations(g, 10, 22, 10, 5, 0)  # only 21 faces
    with pytest.raises(DomainError):
        count_tail_violations(g, 10, 2, 10, -1, 0)


def test_tail_check_is_seed_deterministic():
    g = R.generate(50, 3)
    a = count_tail_violations(g, 50, 5, 500, 100, 11)
    b = count_tail_violations(g, 50, 5, 500, 100, 11)
    assert a == b
