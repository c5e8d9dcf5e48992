"""Degree-space (annealed) analysis of the transport dynamics.

Everything here is computed from one measured object: the joint histogram of
edge-endpoint degrees. Counts are kept as exact integers; probabilities are
derived lazily so that identities which are exact at the counting level
(degree detailed balance, the stationarity of the predicted distribution)
stay exact up to float roundoff.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import stats
from .graph import Graph

__all__ = [
    "G_LABELS",
    "DegreeJointHistogram",
    "MeanFieldPrediction",
    "UndirectedOnlyError",
    "joint_histogram",
    "knn_curve",
    "neighbor_mean_degree",
    "knn_slope",
    "predict",
    "annealed_transition",
    "evolve_degree_space",
]

G_LABELS = ("unit", "linear")


class UndirectedOnlyError(ValueError):
    """Degree-space analysis is defined for undirected graphs only."""


def _gvec(classes: np.ndarray, g_label: str) -> np.ndarray:
    if g_label == "unit":
        return np.ones(len(classes))
    if g_label == "linear":
        return classes.astype(np.float64)
    raise ValueError(f"g_label must be one of {G_LABELS}")


@dataclass(frozen=True)
class DegreeJointHistogram:
    """Edge-endpoint degree counts plus degree-class marginals.

    counts[a, b] is the number of (ordered) edge endpoints whose node has
    degree classes[a] and whose neighbor has degree classes[b]; each
    undirected edge contributes twice, once per orientation.
    """

    classes: np.ndarray      # sorted occupied degrees, >= 1
    counts: np.ndarray       # int64 [K, K]
    node_counts: np.ndarray  # int64 [K], nodes per degree class
    node_total: int          # all nodes, including degree 0

    def conditional(self) -> np.ndarray:
        """Row-stochastic P(k'|k): counts normalized by k * N_k."""
        row = self.counts.sum(axis=1, keepdims=True).astype(np.float64)
        out = np.zeros_like(self.counts, dtype=np.float64)
        np.divide(self.counts, row, out=out, where=row > 0)
        return out

    def degree_fractions(self) -> np.ndarray:
        """P_k over the occupied classes (relative to all nodes)."""
        return self.node_counts / self.node_total

    def detailed_balance_exact(self) -> bool:
        """k'P(k')P(k|k') == kP(k)P(k'|k) holds iff counts are symmetric.

        Both sides reduce to counts[a, b] / node_total, so the identity is
        checked at the integer level, with no tolerance.
        """
        return bool((self.counts == self.counts.T).all())


def joint_histogram(g: Graph) -> DegreeJointHistogram:
    """Histogram edge-endpoint degree pairs in one pass over the edges."""
    if g.directed:
        raise UndirectedOnlyError("joint_histogram requires an undirected graph")
    deg = g.degrees()
    classes = np.unique(deg[deg > 0])
    if len(classes) == 0:
        raise ValueError("graph has no edges")
    idx = np.searchsorted(classes, deg[g.edges])  # [E, 2] class indices
    K = len(classes)
    counts = np.zeros((K, K), dtype=np.int64)
    np.add.at(counts, (idx[:, 0], idx[:, 1]), 1)
    np.add.at(counts, (idx[:, 1], idx[:, 0]), 1)
    node_counts = np.bincount(np.searchsorted(classes, deg[deg > 0]),
                              minlength=K).astype(np.int64)
    return DegreeJointHistogram(classes=classes, counts=counts,
                                node_counts=node_counts,
                                node_total=g.node_count)


def knn_curve(h: DegreeJointHistogram) -> tuple[np.ndarray, np.ndarray]:
    """Mean neighbor degree per degree class: sum_q q P(q|k).

    Returns (classes, knn) over classes that carry at least one edge.
    """
    row = h.counts.sum(axis=1).astype(np.float64)
    num = h.counts @ h.classes.astype(np.float64)
    sel = row > 0
    return h.classes[sel], num[sel] / row[sel]


def neighbor_mean_degree(g: Graph) -> np.ndarray:
    """Per-node mean degree of neighbors (0 for isolated nodes)."""
    if g.directed:
        raise UndirectedOnlyError("neighbor averages require an undirected graph")
    deg = g.degrees().astype(np.float64)
    s = np.zeros(g.node_count)
    a, b = g.edges[:, 0], g.edges[:, 1]
    np.add.at(s, a, deg[b])
    np.add.at(s, b, deg[a])
    return np.divide(s, deg, out=np.zeros_like(s), where=deg > 0)


def knn_slope(g: Graph, k_min: float = 8.0, k_max="auto",
              base: float = 2.0) -> stats.PowerLawFit:
    """Fitted log-log slope of the binned mean-neighbor-degree curve.

    The per-node neighbor means are binned against degree and fit over
    [k_min, k_max]. k_max="auto" caps the window at sqrt(node_count):
    above that scale the curve of a simple graph is dominated by finite-size
    saturation rather than the mixing pattern the slope is meant to measure.
    """
    deg = g.degrees()
    knn = neighbor_mean_degree(g)
    sel = deg > 0
    curve = stats.binned_conditional_mean(deg[sel], knn[sel], base=base)
    if isinstance(k_max, str):
        if k_max != "auto":
            raise ValueError("k_max must be a number, None, or 'auto'")
        k_max = float(np.sqrt(g.node_count))
    return stats.fit_powerlaw(curve, k_min=k_min, k_max=k_max)


@dataclass(frozen=True)
class MeanFieldPrediction:
    """Steady-state occupancy per degree class and the per-node prediction."""

    degree_classes: np.ndarray
    R: np.ndarray
    x_pred: np.ndarray  # predicted per-node mass for a node of each class
    g_label: str

    def per_node(self, g: Graph) -> np.ndarray:
        """Broadcast the class prediction to every node of the graph."""
        deg = g.degrees()
        out = np.zeros(g.node_count)
        sel = deg > 0
        out[sel] = self.x_pred[np.searchsorted(self.degree_classes, deg[sel])]
        return out


def predict(h: DegreeJointHistogram, g_label: str) -> MeanFieldPrediction:
    """Steady-state degree-class occupancy R(k) and per-node mass.

    R(k) is proportional to g(k) * sum_k' g(k') * counts[k, k']; dividing by
    the class node count gives the per-node prediction, proportional to k
    for unit g and to k^2 * knn(k) for linear g.
    """
    gv = _gvec(h.classes, g_label)
    W = h.counts @ gv
    R = gv * W
    Z = R.sum()
    if Z <= 0:
        raise ValueError("histogram carries no edge weight")
    R = R / Z
    x_pred = np.divide(R, h.node_counts, out=np.zeros_like(R),
                       where=h.node_counts > 0)
    return MeanFieldPrediction(degree_classes=h.classes.copy(), R=R,
                               x_pred=x_pred, g_label=g_label)


def annealed_transition(h: DegreeJointHistogram, g_label: str) -> np.ndarray:
    """Column-stochastic degree-space transition matrix Q[to, from].

    Q[b, a] is the probability that a walker on a class-a node moves to a
    class-b neighbor, with destination bias g: counts[a, b] * g(b) / W(a).
    """
    gv = _gvec(h.classes, g_label)
    W = h.counts @ gv
    Q = (h.counts * gv[None, :]).T.astype(np.float64)
    np.divide(Q, W[None, :], out=Q, where=W[None, :] > 0)
    return Q


def evolve_degree_space(Q: np.ndarray, R0: np.ndarray,
                        steps: int = 1) -> np.ndarray:
    """Iterate the degree-space balance equation.

    R(k) <- R(k) - sum_q Q[q, k] R(k) + sum_q Q[k, q] R(q). For a
    column-stochastic Q this is one chain step; classes with empty columns
    keep their mass.
    """
    R = np.asarray(R0, dtype=np.float64).copy()
    col = Q.sum(axis=0)
    for _ in range(steps):
        R = R - col * R + Q @ R
    return R
