import math
from fractions import Fraction
from math import comb

import pytest

from boolann.probability import (
    GRID_PAIRS,
    LogProbability,
    alpha1,
    alpha2,
    alpha3,
    alpha3_d2,
    binomial_ratio_log2,
    p_an,
    prob_weight,
    upper_bound8,
)
from boolann.rmweights import Unavailable, WeightDistribution, brute_force_distribution

# alpha1 column of the published table, as printed
PUBLISHED_ALPHA1 = {
    (6, 2): "3.20E-3", (7, 2): "1.32E-8", (8, 2): "5E-20", (8, 3): "1.97E-5", (9, 2): "2E-43",
    (9, 3): "4E-15", (10, 2): "1E-90", (10, 3): "2E-35", (10, 4): "6E-12", (11, 2): "4E-186",
    (11, 3): "4E-77", (11, 4): "6E-31", (12, 2): "2E-377", (12, 3): "3E-161", (12, 4): "4E-70",
    (12, 5): "1E-27", (13, 2): "1E-760", (13, 3): "2E-330", (13, 4): "1E-149", (13, 5): "2E-65",
    (14, 2): "1E-1527", (14, 3): "1E-669", (14, 4): "5E-310", (14, 5): "7E-143", (14, 6): "7E-62",
    (18, 5): "1E-2502", (18, 6): "8E-1224", (18, 7): "6E-595", (18, 8): "8E-283", (19, 6): "4E-2469",
    (19, 7): "8E-1213", (19, 8): "2E-589", (20, 7): "1E-2450", (20, 8): "2E-1205", (20, 9): "5E-585",
    (21, 8): "2E-2439", (21, 9): "1E-1199", (22, 9): "9E-2432", (22, 10): "6E-1195", (23, 10): "8E-2426",
}


def printed_digits(text):
    return len(text.split("E")[0].replace(".", ""))


def test_table_pairs_cover_the_table():
    assert set(GRID_PAIRS) == set(PUBLISHED_ALPHA1)


def test_binomial_ratio_examples():
    assert binomial_ratio_log2(5, 0).log2 == 0
    assert binomial_ratio_log2(4, 8, exact=True).exact == Fraction(1, 12870)
    assert binomial_ratio_log2(4, 8).log2 == pytest.approx(-math.log2(12870), rel=1e-13)
    for n in (3, 6, 9, 14):
        for w in range(0, (1 << (n - 1)) + 1, 1 << max(0, n - 4)):
            assert binomial_ratio_log2(n, w).log2 <= -w + 1e-9
    with pytest.raises(ValueError):
        binomial_ratio_log2(4, 9)


@pytest.mark.parametrize("n", [3, 5, 8, 10, 12])
def test_ratio_log_matches_exact(n):
    for w in (1, 3, 1 << (n - 2), 1 << (n - 1)):
        exact = Fraction(comb((1 << n) - w, (1 << (n - 1)) - w), comb(1 << n, 1 << (n - 1)))
        assert binomial_ratio_log2(n, w).log2 == pytest.approx(
            math.log2(exact.numerator) - math.log2(exact.denominator), rel=1e-12
        )


def test_prob_weight_examples():
    assert prob_weight(6, 2, 24, 0).is_zero
    assert prob_weight(6, 2, 16, 2604).render() == "3.20E-3"
    with pytest.raises(ValueError):
        prob_weight(6, 2, 16, -1)


@pytest.mark.parametrize("pair", sorted(PUBLISHED_ALPHA1))
def test_alpha1_printed_precision(pair):
    printed = PUBLISHED_ALPHA1[pair]
    assert alpha1(*pair).render(printed_digits(printed)) == printed


@pytest.mark.parametrize("n", range(4, 11))
def test_alpha1_exact_and_log_agree(n):
    for d in range(1, n // 2):
        exact, approx = alpha1(n, d, exact=True), alpha1(n, d)
        assert exact.exact is not None
        assert approx.log2 == pytest.approx(exact.log2, rel=1e-12)
        # 10 significant decimal digits of the values themselves
        assert exact.render(10) == approx.render(10)


def test_alpha1_decreases_in_n():
    for d in range(2, 11):
        ns = sorted(n for n, dd in GRID_PAIRS if dd == d)
        values = [alpha1(n, d).log2 for n in ns]
        assert values == sorted(values, reverse=True)


def test_bound8():
    assert upper_bound8(6, 2).log2 == -2
    for pair in GRID_PAIRS:
        assert alpha1(*pair) <= upper_bound8(*pair)
    logs = [upper_bound8(n, 3).log2 for n in range(8, 30)]
    assert logs[-1] < -1e6 and all(b < a for a, b in zip(logs[5:], logs[6:]))
    with pytest.raises(ValueError):
        upper_bound8(5, 0)


def test_alpha2_alpha3_rm26():
    dist = brute_force_distribution(6, 2)
    a2 = alpha2(6, 2, dist)
    a3 = alpha3(6, 2, dist)
    assert a2.render() == "1.23E-5"
    assert a3 < a2 < alpha1(6, 2)
    assert alpha3_d2(6, dist) == a3
    assert alpha3_d2(6, 1828134).render(12) == a3.render(12)
    exact = Fraction(1828134, comb(64, 32))
    assert alpha3_d2(6, dist, exact=True).exact == exact
    # the exact route and the log route give the same band sums
    assert alpha2(6, 2, dist, exact=True).render(10) == a2.render(10)


def test_alpha2_alpha3_rm25():
    dist = brute_force_distribution(5, 2)
    a3 = alpha3_d2(5, dist)
    assert a3.exact is None or a3.exact > 0
    assert a3 == alpha3(5, 2, dist)
    assert alpha2(5, 2, dist) < alpha1(5, 2)


def test_alpha2_empty_band_and_missing_data():
    zeros = WeightDistribution(6, 2, {0: 1, 16: 2604}, complete=False, covered=(0, 31))
    assert alpha2(6, 2, zeros).is_zero
    with pytest.raises(Unavailable):
        alpha2(6, 2, WeightDistribution(6, 2, {16: 2604}, complete=False, covered=(0, 16)))
    with pytest.raises(Unavailable):
        alpha3_d2(6, None)


def test_partial_census_uses_top_count_formula():
    partial = WeightDistribution(6, 2, {16: 2604, 24: 291648, 28: 888832}, complete=False, covered=(0, 31))
    full = brute_force_distribution(6, 2)
    assert alpha3(6, 2, partial).render(12) == alpha3(6, 2, full).render(12)


def test_p_an_cases():
    assert p_an(8, 4).p_an.value == 1
    assert p_an(6, 3).case == "even-half"
    assert p_an(6, 5).p_an.value == 1 and p_an(6, 5).case == "above-half"
    row = p_an(10, 4)
    assert row.case == "below-half" and row.approximate
    assert row.alpha1.render(1) == "6E-12"
    odd = p_an(7, 3)
    assert odd.case == "odd-half" and odd.p_an is None


def test_p_an_full_sum():
    row = p_an(6, 2, brute_force_distribution(6, 2))
    assert not row.approximate
    total = row.alpha1 + row.alpha2 + row.alpha3
    assert row.p_an.render(6) == total.render(6)
    assert row.p_an.render() == "3.22E-3"
    assert row.alpha1 <= row.bound8
    exact = p_an(6, 2, brute_force_distribution(6, 2), exact=True)
    assert exact.p_an.render(10) == row.p_an.render(10)


def test_breakdown_csv_and_human():
    row = p_an(6, 2)
    csv = row.csv_row()
    assert csv[:3] == ["6", "2", "3.20E-3"] and csv[7] == "below-half"
    assert float(csv[8]) == row.alpha1.log2
    assert "alpha1=3.20E-3" in row.human()


def test_render_and_parse():
    assert LogProbability.zero().render() == "0"
    assert LogProbability.parse("0").is_zero
    assert LogProbability(0.0).render() == "1.00E0"
    assert LogProbability.from_fraction(Fraction(1, 8)).render() == "1.25E-1"
    # mantissa rounding that carries into the exponent
    assert LogProbability.parse("9.996E-5").render() == "1.00E-4"
    for log2 in (-3.7, -1234.567, -12345.678901, -0.001):
        p = LogProbability(log2)
        back = LogProbability.parse(p.render(20))
        assert back.log2 == pytest.approx(log2, abs=abs(math.ulp(log2)) * 2)
    with pytest.raises(ValueError):
        LogProbability.parse("3.2x-3")


def test_log_sum_is_stable():
    tiny = LogProbability(-5000.0)
    assert (tiny + tiny).log2 == pytest.approx(-4999.0)
    assert (LogProbability(-1.0) + LogProbability(-3000.0)).log2 == -1.0
    assert (LogProbability(-2.0) * LogProbability(-3.0)).log2 == -5.0
    assert LogProbability(-3.0).scaled(8).log2 == 0.0
    assert LogProbability(-3.0).scaled(0).is_zero
