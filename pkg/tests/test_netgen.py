import numpy as np
import pytest

from biaswalk.meanfield import knn_slope, neighbor_mean_degree
from biaswalk.netgen import (
    CalibrationError,
    GenParams,
    ShuffleParams,
    calibrate_theta,
    degree_sequence,
    generate,
    maslov_sneppen_shuffle,
)
from biaswalk.stats import binned_conditional_mean, ccdf_tail_exponent
from conftest import triangle


def test_degree_sequence_by_hand():
    assert degree_sequence(4, 1.0).tolist() == [4, 2, 1, 1]
    assert degree_sequence(2, 1.3).tolist() == [1, 1]
    assert degree_sequence(100, 1.3)[0] == int(np.floor(100 ** (1 / 1.3)))


def test_degree_sequence_parity_decrements_last_big_node():
    # raw ranks give [3, 1, 1]: odd total, so the deepest k >= 2 drops by one
    assert degree_sequence(3, 1.0).tolist() == [2, 1, 1]
    # raw [4, 2, 1, 1, 1, 1, 1]: the k=2 node is the one decremented
    assert degree_sequence(7, 1.3).tolist() == [4, 1, 1, 1, 1, 1, 1]


def test_degree_sequence_all_ones_fallback_drops_a_node():
    assert degree_sequence(3, 10.0).tolist() == [1, 1]


def test_degree_sequence_always_even_and_decreasing():
    for m in range(2, 60):
        for alpha in (0.7, 1.0, 1.3, 2.2):
            d = degree_sequence(m, alpha)
            assert int(d.sum()) % 2 == 0
            assert np.all(np.diff(d) <= 0)
            assert d.min() >= 1


def test_generated_graph_is_simple():
    g = generate(GenParams(4000, 1.3, 0.0, rng_seed=1))
    assert np.all(g.edges[:, 0] < g.edges[:, 1])
    assert len(np.unique(g.edges, axis=0)) == g.edge_count
    assert g.build_report.self_loops_removed == 0
    assert g.build_report.duplicates_removed == 0


def test_generate_stub_accounting():
    for theta in (0.0, 2.5):
        g = generate(GenParams(4000, 1.3, theta, rng_seed=3))
        want = int(degree_sequence(4000, 1.3).sum())
        assert 2 * g.edge_count + g.meta["stubs_discarded"] == want
    # strong assortative bias forces discards at the hubs
    g = generate(GenParams(4000, 1.3, 2.5, rng_seed=3))
    assert g.meta["stubs_discarded"] > 0


def test_generate_deterministic_in_seed():
    a = generate(GenParams(3000, 1.3, -0.5, rng_seed=9))
    b = generate(GenParams(3000, 1.3, -0.5, rng_seed=9))
    c = generate(GenParams(3000, 1.3, -0.5, rng_seed=10))
    assert np.array_equal(a.edges, b.edges)
    assert not np.array_equal(a.edges, c.edges)


def test_degree_tail_matches_rank_law():
    g = generate(GenParams(30_000, 1.3, 0.0, rng_seed=0))
    deg = g.degrees()
    fit = ccdf_tail_exponent(deg[deg > 0])
    assert fit.exponent == pytest.approx(-1.3, abs=0.1)


def test_negative_theta_bends_neighbor_curve_down():
    lo = generate(GenParams(20_000, 1.3, -1.0, rng_seed=2))
    hi = generate(GenParams(20_000, 1.3, 2.0, rng_seed=2))
    assert knn_slope(lo).exponent < knn_slope(hi).exponent


def test_shuffle_preserves_degrees_and_simplicity():
    g = generate(GenParams(3000, 1.3, -0.8, rng_seed=4))
    s = maslov_sneppen_shuffle(g, ShuffleParams(rng_seed=5))
    assert np.array_equal(s.degrees(), g.degrees())
    assert np.all(s.edges[:, 0] < s.edges[:, 1])
    assert len(np.unique(s.edges, axis=0)) == s.edge_count
    assert s.meta["swaps_applied"] > 0
    assert s.meta["swap_attempts"] == 10 * g.edge_count


def test_shuffle_on_triangle_is_identity():
    s = maslov_sneppen_shuffle(triangle(), ShuffleParams(rng_seed=0))
    assert s.meta["swaps_applied"] == 0
    assert np.array_equal(s.edges, triangle().edges)


def test_shuffle_deterministic_in_seed():
    g = generate(GenParams(2000, 1.3, 0.0, rng_seed=6))
    a = maslov_sneppen_shuffle(g, ShuffleParams(rng_seed=7))
    b = maslov_sneppen_shuffle(g, ShuffleParams(rng_seed=7))
    c = maslov_sneppen_shuffle(g, ShuffleParams(rng_seed=8))
    assert np.array_equal(a.edges, b.edges)
    assert not np.array_equal(a.edges, c.edges)


def test_shuffle_flattens_disassortative_mixing():
    g = generate(GenParams(20_000, 1.3, -1.0, rng_seed=4))
    s = maslov_sneppen_shuffle(g, ShuffleParams(rng_seed=5))
    deg = g.degrees()
    sel = deg > 0
    before = binned_conditional_mean(deg[sel], neighbor_mean_degree(g)[sel])
    after = binned_conditional_mean(deg[sel],
                                    neighbor_mean_degree(s)[sel])
    # the shuffle must lift the low-degree end of the curve toward flat
    assert after.mean[0] < before.mean[0]
    assert knn_slope(s).exponent > knn_slope(g).exponent


def test_gen_params_validated():
    with pytest.raises(ValueError):
        GenParams(5, 1.3, 0.0)
    with pytest.raises(ValueError):
        GenParams(100, -1.0, 0.0)
    with pytest.raises(ValueError):
        ShuffleParams(swap_attempts=-1)


def test_calibrate_hits_target_slope():
    theta = calibrate_theta(20_000, 1.3, -0.5, rng_seed=0)
    g = generate(GenParams(20_000, 1.3, theta, rng_seed=0))
    assert knn_slope(g).exponent == pytest.approx(-0.5, abs=0.1)


def test_calibrate_rejects_out_of_range_target():
    with pytest.raises(ValueError):
        calibrate_theta(20_000, 1.3, 1.7)


def test_calibrate_unreachable_target_reports_achievable_band():
    with pytest.raises(CalibrationError) as err:
        calibrate_theta(5000, 1.3, -1.5, rng_seed=0)
    lo, hi = err.value.achievable
    assert lo <= hi
    assert hi < -0.2  # every slope seen was itself disassortative
