import numpy as np
import pytest

from biaswalk.graph import build_graph, largest_component
from biaswalk.meanfield import (
    UndirectedOnlyError,
    annealed_transition,
    evolve_degree_space,
    joint_histogram,
    knn_curve,
    knn_slope,
    neighbor_mean_degree,
    predict,
)
from biaswalk.netgen import GenParams, ShuffleParams, generate, \
    maslov_sneppen_shuffle
from conftest import diamond, path_graph, star, triangle


def test_star_joint_histogram_by_hand():
    h = joint_histogram(star(3))
    assert h.classes.tolist() == [1, 3]
    assert h.counts.tolist() == [[0, 3], [3, 0]]
    assert h.node_counts.tolist() == [3, 1]
    assert h.node_total == 4
    assert np.allclose(h.degree_fractions(), [0.75, 0.25])


def test_triangle_joint_histogram_counts_both_orientations():
    h = joint_histogram(triangle())
    assert h.classes.tolist() == [2]
    assert h.counts.tolist() == [[6]]


def test_knn_curve_star_and_triangle():
    kcls, knn = knn_curve(joint_histogram(star(3)))
    assert kcls.tolist() == [1, 3]
    assert np.allclose(knn, [3.0, 1.0])
    kcls, knn = knn_curve(joint_histogram(triangle()))
    assert np.allclose(knn, [2.0])


def test_neighbor_mean_degree_per_node():
    g = diamond()  # degrees 1,3,2,2
    nm = neighbor_mean_degree(g)
    assert np.allclose(nm, [3.0, 5 / 3, 2.5, 2.5])


def test_detailed_balance_is_exact_integer_identity():
    for g in (triangle(), star(5), diamond(), path_graph(6),
              generate(GenParams(3000, 1.3, -0.5, rng_seed=0))):
        h = joint_histogram(g)
        assert h.detailed_balance_exact()
        assert h.counts.dtype == np.int64


def test_unit_prediction_is_proportional_to_degree():
    g = generate(GenParams(2000, 1.3, 0.0, rng_seed=1))
    comp, _ = largest_component(g)
    pred = predict(joint_histogram(comp), "unit")
    x = pred.per_node(comp)
    deg = comp.degrees().astype(float)
    assert np.max(np.abs(x / x.sum() - deg / deg.sum())) < 1e-12


def test_linear_prediction_star_ratio():
    pred = predict(joint_histogram(star(3)), "linear")
    assert np.allclose(pred.R, [0.5, 0.5])
    assert pred.x_pred[1] / pred.x_pred[0] == pytest.approx(3.0)


def test_linear_prediction_equals_degree_squared_times_knn():
    g = generate(GenParams(2000, 1.3, -0.8, rng_seed=2))
    comp, _ = largest_component(g)
    h = joint_histogram(comp)
    pred = predict(h, "linear")
    kcls, knn = knn_curve(h)
    want = kcls.astype(float) ** 2 * knn
    got = pred.x_pred
    assert np.max(np.abs(got / got.sum() - want / want.sum())) < 1e-12


def test_annealed_transition_star_is_class_swap():
    for g_label in ("unit", "linear"):
        Q = annealed_transition(joint_histogram(star(3)), g_label)
        assert np.allclose(Q, [[0.0, 1.0], [1.0, 0.0]])
    assert np.allclose(annealed_transition(joint_histogram(triangle()),
                                           "unit"), [[1.0]])


def test_unit_transition_is_the_empirical_conditional():
    g = generate(GenParams(2000, 1.3, -0.5, rng_seed=3))
    h = joint_histogram(g)
    Q = annealed_transition(h, "unit")
    assert np.allclose(Q.T, h.conditional(), atol=1e-14)
    assert np.allclose(Q.sum(axis=0), 1.0, atol=1e-12)


def test_prediction_is_fixed_point_of_degree_space_evolution():
    graphs = [triangle(), star(4), diamond(),
              largest_component(generate(GenParams(3000, 1.3, -0.8,
                                                   rng_seed=4)))[0]]
    for g in graphs:
        h = joint_histogram(g)
        for g_label in ("unit", "linear"):
            pred = predict(h, g_label)
            Q = annealed_transition(h, g_label)
            after = evolve_degree_space(Q, pred.R)
            assert float(np.abs(after - pred.R).sum()) <= 1e-10
            after3 = evolve_degree_space(Q, pred.R, steps=3)
            assert float(np.abs(after3 - pred.R).sum()) <= 1e-10


def test_shuffled_bounded_degrees_have_flat_neighbor_curve():
    # two rings on the first 1000 nodes (degree 4) and one ring on the rest
    # (degree 2); shuffling should erase which ring an edge came from
    edges = [[i, (i + 1) % 1000] for i in range(1000)]
    edges += [[i, (i + 7) % 1000] for i in range(1000)]
    edges += [[1000 + i, 1000 + (i + 1) % 1000] for i in range(1000)]
    g = build_graph(edges, node_count=2000)
    assert sorted(np.unique(g.degrees()).tolist()) == [2, 4]
    s = maslov_sneppen_shuffle(g, ShuffleParams(rng_seed=5))
    kcls, knn = knn_curve(joint_histogram(s))
    flat = float(np.dot([2.0, 4.0], [1000 * 2, 1000 * 4])) / 6000
    assert np.allclose(knn, flat, rtol=0.05)


def test_directed_graphs_are_rejected():
    g = build_graph([[0, 1], [1, 2]], directed=True)
    with pytest.raises(UndirectedOnlyError):
        joint_histogram(g)


def test_knn_slope_sign_tracks_mixing():
    dis = generate(GenParams(20_000, 1.3, -1.0, rng_seed=6))
    asrt = generate(GenParams(20_000, 1.3, 2.5, rng_seed=6))
    assert knn_slope(dis).exponent < -0.4
    assert knn_slope(asrt).exponent > 0.0
