import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from biaswalk.stats import (
    BinnedCurve,
    InsufficientDataError,
    binned_conditional_mean,
    ccdf,
    ccdf_tail_exponent,
    curve_from_points,
    fit_powerlaw,
    loglog_correlation,
)


def test_binned_mean_by_hand():
    curve = binned_conditional_mean([1, 1, 2, 3], [2.0, 4.0, 6.0, 9.0])
    assert np.allclose(curve.abscissa, [np.sqrt(2.0), np.sqrt(8.0)])
    assert np.allclose(curve.mean, [3.0, 7.5])
    assert curve.count.tolist() == [2, 2]


def test_binned_mean_omits_empty_bins():
    curve = binned_conditional_mean([1, 100], [5.0, 7.0])
    assert len(curve.abscissa) == 2
    assert curve.count.tolist() == [1, 1]
    assert np.allclose(curve.mean, [5.0, 7.0])


def test_binned_mean_key_on_top_separator_is_kept():
    curve = binned_conditional_mean([1, 4], [1.0, 1.0])
    assert int(curve.count.sum()) == 2


def test_binned_mean_rejects_bad_input():
    with pytest.raises(ValueError):
        binned_conditional_mean([], [])
    with pytest.raises(ValueError):
        binned_conditional_mean([0.5], [1.0])
    with pytest.raises(ValueError):
        binned_conditional_mean([1, 2], [1.0])
    with pytest.raises(ValueError):
        binned_conditional_mean([1, 2], [1.0, 2.0], base=1.0)


@settings(max_examples=200, deadline=None)
@given(st.lists(st.tuples(st.integers(min_value=1, max_value=10_000),
                          st.floats(min_value=-1e6, max_value=1e6)),
                min_size=1, max_size=300))
def test_binning_is_a_partition(pairs):
    keys = np.array([p[0] for p in pairs], dtype=float)
    values = np.array([p[1] for p in pairs], dtype=float)
    curve = binned_conditional_mean(keys, values)
    # every sample lands in exactly one bin
    assert int(curve.count.sum()) == len(keys)
    # bin means recombine to the global mean
    total = float(np.sum(curve.mean * curve.count))
    assert total == pytest.approx(float(values.sum()), rel=1e-9, abs=1e-6)
    # abscissae sit inside the separator range, in increasing order
    assert np.all(np.diff(curve.abscissa) > 0)
    assert curve.abscissa[0] >= curve.separators[0]
    assert curve.abscissa[-1] <= curve.separators[-1]


def test_separators_must_increase():
    with pytest.raises(ValueError):
        BinnedCurve(separators=np.array([1.0, 1.0, 2.0]),
                    abscissa=np.array([1.0]), mean=np.array([1.0]),
                    count=np.array([1]))


def test_ccdf_by_hand():
    k, p = ccdf([1, 1, 2, 3])
    assert k.tolist() == [1.0, 2.0, 3.0]
    assert np.allclose(p, [1.0, 0.5, 0.25])


def test_ccdf_starts_at_one_and_decreases():
    rng = np.random.default_rng(0)
    k, p = ccdf(rng.integers(1, 50, size=500))
    assert p[0] == 1.0
    assert np.all(np.diff(p) < 0)


def test_fit_recovers_exact_power_law():
    x = 10.0 ** np.arange(6)
    y = 3.0 * x ** -2.5
    fit = fit_powerlaw(curve_from_points(x, y), k_min=1.0)
    assert fit.exponent == pytest.approx(-2.5, abs=1e-9)
    assert fit.intercept == pytest.approx(np.log10(3.0), abs=1e-9)
    assert fit.r_squared == pytest.approx(1.0, abs=1e-12)
    assert fit.bin_count == 6


def test_fit_scale_invariance():
    x = 2.0 ** np.arange(8)
    y = x ** 1.7
    a = fit_powerlaw(curve_from_points(x, y), k_min=1.0)
    b = fit_powerlaw(curve_from_points(x, 7.0 * y), k_min=1.0)
    assert a.exponent == pytest.approx(b.exponent, abs=1e-12)


def test_fit_window_selection():
    x = np.array([1.0, 2.0, 4.0, 8.0, 16.0, 32.0])
    y = x ** 2
    fit = fit_powerlaw(curve_from_points(x, y), k_min=4.0, k_max=16.0)
    assert fit.bin_count == 3
    assert fit.k_max == 16.0


def test_fit_requires_three_bins():
    x = np.array([1.0, 2.0])
    with pytest.raises(InsufficientDataError):
        fit_powerlaw(curve_from_points(x, x), k_min=1.0)
    x = np.array([1.0, 2.0, 4.0, 8.0])
    with pytest.raises(InsufficientDataError):
        fit_powerlaw(curve_from_points(x, x), k_min=3.0, k_max=9.0)


def test_ccdf_tail_exponent_exact_geometric_construction():
    # counts chosen so P(K >= 2**j) is exactly 2**-j
    degrees = np.concatenate([np.full(2 ** (9 - j), 2 ** j)
                              for j in range(10)] + [np.array([2 ** 10])])
    fit = ccdf_tail_exponent(degrees, decades=2.0)
    assert fit.exponent == pytest.approx(-1.0, abs=1e-9)


def test_loglog_correlation_signs():
    x = np.array([1.0, 2.0, 4.0, 8.0])
    assert loglog_correlation(x, 5.0 * x ** 3) == pytest.approx(1.0)
    assert loglog_correlation(x, x ** -2) == pytest.approx(-1.0)


def test_loglog_correlation_skips_nonpositive_pairs():
    a = np.array([1.0, 2.0, 0.0, 4.0])
    b = np.array([1.0, 4.0, 9.0, 16.0])
    assert loglog_correlation(a, b) == pytest.approx(1.0)
    with pytest.raises(InsufficientDataError):
        loglog_correlation([1.0, 0.0], [1.0, 2.0])
