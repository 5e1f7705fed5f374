import warnings
from fractions import Fraction

import pytest
from mpmath import mp, mpf

from fermipart.canonical import log_xi_ex
from fermipart.distribution import (
    DegenerateDistributionWarning,
    MicroDistribution,
    TruncationError,
    canonical_distribution,
    canonical_probability,
    canonical_tail_bound,
    exact_cumulants,
    exact_moments,
    micro_distribution,
)
from fermipart.partitions import build_table, enumerate_distinct, omega_distinct


def test_counts_at_ten(small_table):
    d = micro_distribution(small_table, 10)
    assert d.counts == (0, 1, 4, 4, 1)
    assert d.total == 10
    assert sum(d.probabilities) == 1


def test_counts_at_three(small_table):
    d = micro_distribution(small_table, 3)
    assert d.counts == (0, 1, 1) and d.total == 2


def test_total_is_omega(table):
    for E in (1, 17, 999, 4500):
        assert micro_distribution(table, E).total == omega_distinct(table, E)


def test_invariants_enforced():
    with pytest.raises(ValueError):
        MicroDistribution(3, (1, 1, 1), 3)
    with pytest.raises(ValueError):
        MicroDistribution(3, (0, 1, 1), 3)


def test_two_point_cumulants(small_table):
    c = exact_cumulants(micro_distribution(small_table, 3))
    assert c.kappa1 == mpf(1.5) and c.kappa2 == mpf(0.25)
    assert c.kappa3 == 0
    # two equal atoms: mu4 = 1/16, kappa4 = 1/16 - 3/16
    assert c.kappa4 == mpf(-0.125)
    assert c.gamma2 == -2


def test_mean_at_ten(small_table):
    assert exact_cumulants(micro_distribution(small_table, 10)).kappa1 == mpf(2.5)


def test_moments_against_enumeration():
    t = build_table(60)
    for E in (20, 45, 60):
        sizes = [len(p) for p in enumerate_distinct(E)]
        n = len(sizes)
        mean = Fraction(sum(sizes), n)
        mus = [sum((Fraction(s) - mean) ** j for s in sizes) / n for j in (2, 3, 4)]
        assert exact_moments(micro_distribution(t, E)) == (mean, *mus)


def test_summation_order_is_irrelevant(table):
    d = micro_distribution(table, 4500)
    assert exact_moments(d) == exact_moments(d, reverse=True)


def test_mean_at_1000(table):
    k1 = exact_cumulants(micro_distribution(table, 1000)).kappa1
    assert abs(k1 - mpf("24.1")) < 0.5


def test_degenerate_distribution_signals(small_table):
    with pytest.warns(DegenerateDistributionWarning):
        c = exact_cumulants(micro_distribution(small_table, 2))
    assert c.kappa2 == 0 and c.gamma1 is None and c.gamma2 is None


def test_variance_positive_when_two_points(small_table):
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        for E in range(3, 120):
            assert exact_cumulants(micro_distribution(small_table, E)).kappa2 > 0


@pytest.mark.parametrize("E", [1000, 2000, 3000, 4500])
def test_unimodal(table, E):
    d = micro_distribution(table, E)
    assert d.is_unimodal()


def test_gaussian_approach(table):
    cs = [exact_cumulants(micro_distribution(table, E)) for E in (500, 1000, 2000, 4500)]
    g1 = [abs(c.gamma1) for c in cs]
    g2 = [abs(c.gamma2) for c in cs]
    assert g1 == sorted(g1, reverse=True) and g2 == sorted(g2, reverse=True)


def test_sign_structure(table):
    for E in range(500, 4501, 250):
        c = exact_cumulants(micro_distribution(table, E))
        assert c.gamma1 < 0 and c.gamma2 < 0


def test_canonical_normalisation(table):
    probs = canonical_distribution(table, 0.5)
    assert abs(mp.fsum(probs) - 1) < mpf("1e-25")
    assert all(0 <= p <= 1 for p in probs)
    assert probs[0] == 0


def test_canonical_cold_limit(table):
    # at b = 20 the single-part states {E} dominate
    assert canonical_probability(table, 20, 1) > 1 - mpf("1e-6")


def test_canonical_denominator_is_xi_minus_one(table):
    b = mpf("0.5")
    x = mp.exp(-b)
    denom = mp.fsum(x**E * omega_distinct(table, E) for E in range(1, 1201))
    assert abs((denom + 1) / mp.exp(log_xi_ex(b)) - 1) < mpf("1e-25")


def test_canonical_probability_matches_direct_sum(table):
    b = mpf("0.3")
    x = mp.exp(-b)
    from fermipart.partitions import phi_distinct

    Z3 = mp.fsum(x**E * phi_distinct(table, E, 3) for E in range(1, 2001))
    Xi = mp.exp(log_xi_ex(b))
    assert abs(canonical_probability(table, b, 3) - Z3 / (Xi - 1)) < mpf("1e-28")


def test_canonical_mean_matches_level_sum(table):
    # sum_M M p_cn(M) = kappa1(b) * Xi / (Xi - 1) because the empty state is excluded
    from fermipart.canonical import canonical_cumulant

    b = mpf("0.4")
    probs = canonical_distribution(table, b)
    mean = mp.fsum(M * p for M, p in enumerate(probs))
    Xi = mp.exp(log_xi_ex(b))
    assert abs(mean - canonical_cumulant(1, b) * Xi / (Xi - 1)) < mpf("1e-25")


def test_canonical_truncation_refused(small_table):
    with pytest.raises(TruncationError):
        canonical_distribution(small_table, 0.05)
    with pytest.raises(TruncationError):
        canonical_distribution(small_table, 0.5, E_cut=50)


def test_tail_bound_is_an_upper_bound(table):
    b = mpf("0.5")
    x = mp.exp(-b)
    actual = mp.fsum(x**E * omega_distinct(table, E) for E in range(201, 4501))
    assert actual <= canonical_tail_bound(b, 200)
