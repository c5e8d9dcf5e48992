"""Mass-transport dynamics on a graph, iterated to steady state.

Two models share one kernel: each node i sends x_i * g(k_m) / W_i to its
out-neighbor m, where W_i = sum of g(k_j) over i's out-neighbors and k is
the (in-)degree. g(k) = 1 splits mass evenly (equi-partition); g(k) = k
biases the split toward high-degree destinations (weighted partition).
Nodes with W_i = 0 send nothing and their mass leaves the system; the drop
is reported, never silently ignored.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import _kernels
from .graph import Graph

__all__ = [
    "MODELS",
    "MassVector",
    "TransportSpec",
    "SteadyState",
    "TransportPlan",
    "ReducibleChainError",
    "build_plan",
    "step",
    "steady_state",
    "exact_stationary",
]

MODELS = ("equi", "weighted")


class ReducibleChainError(ValueError):
    """The transition chain is not irreducible (some node unreachable)."""


@dataclass(frozen=True)
class MassVector:
    """Per-node nonnegative mass at one time step."""

    values: np.ndarray
    time_step: int = 1
    total: float | None = None
    dropped: float = 0.0  # mass lost in the step that produced this vector

    def __post_init__(self):
        v = np.asarray(self.values, dtype=np.float64)
        object.__setattr__(self, "values", v)
        if v.size and v.min() < 0:
            raise ValueError("mass values must be nonnegative")
        s = float(v.sum())
        if self.total is None:
            object.__setattr__(self, "total", s)
        elif abs(self.total - s) > 1e-12 * max(1.0, abs(s)):
            raise ValueError("cached total disagrees with the value sum")

    @classmethod
    def uniform(cls, n: int) -> "MassVector":
        return cls(values=np.full(n, 1.0 / n), time_step=1)


@dataclass(frozen=True)
class TransportSpec:
    """Model choice and iteration controls."""

    model: str = "weighted"
    lazy_factor: float = 0.0
    tolerance: float = 1e-10
    max_iterations: int = 100_000

    def __post_init__(self):
        if self.model not in MODELS:
            raise ValueError(f"model must be one of {MODELS}")
        if not 0.0 <= self.lazy_factor < 1.0:
            raise ValueError("lazy_factor must be in [0, 1)")
        if self.tolerance <= 0:
            raise ValueError("tolerance must be positive")


@dataclass(frozen=True)
class SteadyState:
    mass: MassVector
    iterations_used: int
    converged: bool
    residual: float
    dropped: float = 0.0
    auto_lazy: bool = False


@dataclass(frozen=True)
class TransportPlan:
    """Precomputed arrays consumed by the step kernel (time-independent)."""

    in_ptr: np.ndarray
    in_src: np.ndarray
    in_dst: np.ndarray
    gval: np.ndarray
    wsum: np.ndarray


def build_plan(g: Graph, model: str) -> TransportPlan:
    if model not in MODELS:
        raise ValueError(f"model must be one of {MODELS}")
    n = g.node_count
    src, dst = g.arcs()
    if model == "equi":
        gval = np.ones(n)
    else:
        gval = g.in_degrees().astype(np.float64)
    # destination weights W_i, accumulated in (src, dst) arc order
    order = np.lexsort((dst, src))
    wsum = np.zeros(n)
    np.add.at(wsum, src[order], gval[dst[order]])
    # kernel wants arcs grouped by destination
    order = np.lexsort((src, dst))
    in_src, in_dst = src[order], dst[order]
    in_ptr = np.zeros(n + 1, dtype=np.int64)
    np.add.at(in_ptr, in_dst + 1, 1)
    np.cumsum(in_ptr, out=in_ptr)
    return TransportPlan(in_ptr=in_ptr, in_src=in_src, in_dst=in_dst,
                         gval=gval, wsum=wsum)


def step(g: Graph, x: MassVector, spec: TransportSpec,
         plan: TransportPlan | None = None) -> MassVector:
    """One synchronous transport sweep; returns the mass at t+1.

    The returned vector's `dropped` field is the mass lost this step at
    nodes with zero total destination weight.
    """
    if len(x.values) != g.node_count:
        raise ValueError("mass vector length does not match node count")
    if plan is None:
        plan = build_plan(g, spec.model)
    kern = _kernels.get()
    out = np.empty(g.node_count)
    raw_drop = kern.transport_step(plan.in_ptr, plan.in_src, plan.in_dst,
                                   plan.gval, plan.wsum, x.values,
                                   spec.lazy_factor, out)
    return MassVector(values=out, time_step=x.time_step + 1,
                      dropped=(1.0 - spec.lazy_factor) * raw_drop)


def _iterate(g: Graph, spec: TransportSpec, x0: np.ndarray,
             lazy: float) -> tuple[np.ndarray, int, bool, float, float, bool]:
    """Power iteration; returns (x, iters, converged, residual, dropped, osc)."""
    kern = _kernels.get()
    plan = build_plan(g, spec.model)
    x = x0.copy()
    out = np.empty_like(x)
    prev = np.empty_like(x)
    have_prev = False
    dropped = 0.0
    residual = np.inf
    for it in range(1, spec.max_iterations + 1):
        raw = kern.transport_step(plan.in_ptr, plan.in_src, plan.in_dst,
                                  plan.gval, plan.wsum, x, lazy, out)
        dropped += (1.0 - lazy) * raw
        norm = float(np.abs(x).sum())
        if norm == 0.0:
            return out, it, True, 0.0, dropped, False
        residual = float(np.abs(out - x).sum()) / norm
        if residual <= spec.tolerance:
            return out, it, True, residual, dropped, False
        if have_prev:
            osc = float(np.abs(out - prev).sum()) / norm
            if osc < spec.tolerance:
                return out, it, False, residual, dropped, True
        prev, x, out = x, out, prev
        have_prev = True
    return x, spec.max_iterations, False, residual, dropped, False


def steady_state(g: Graph, spec: TransportSpec,
                 x0: MassVector | None = None) -> SteadyState:
    """Iterate transport until the relative L1 step change is below tolerance.

    A period-2 oscillation (step change stuck while alternate iterates
    agree) triggers one automatic rerun with lazy_factor 0.5, which has the
    same fixed point; the result records this. Non-convergence yields
    converged=False rather than an exception.
    """
    start = x0.values if x0 is not None else MassVector.uniform(g.node_count).values
    if len(start) != g.node_count:
        raise ValueError("mass vector length does not match node count")
    _check_irreducible(g)
    x, iters, conv, resid, dropped, osc = _iterate(g, spec, start,
                                                   spec.lazy_factor)
    auto = False
    if osc and spec.lazy_factor == 0.0:
        auto = True
        x, iters2, conv, resid, dropped, _ = _iterate(g, spec, start, 0.5)
        iters += iters2
    return SteadyState(mass=MassVector(values=x, time_step=iters + 1),
                       iterations_used=iters, converged=conv,
                       residual=resid, dropped=dropped, auto_lazy=auto)


def _check_irreducible(g: Graph) -> None:
    from .graph import _scc_labels, _undirected_components

    label = _scc_labels(g) if g.directed else _undirected_components(g)
    if not np.all(label == label[0]):
        bad = int(np.argmax(label != label[0]))
        kind = "strongly connected" if g.directed else "connected"
        raise ReducibleChainError(
            f"node {bad} is not {kind} with node 0; "
            "restrict to the largest component first")


def exact_stationary(g: Graph, spec: TransportSpec) -> MassVector:
    """Stationary distribution by dense linear solve (test oracle).

    Requires an irreducible chain and node_count <= 2000.
    """
    n = g.node_count
    if n > 2000:
        raise ValueError("dense solve budget is node_count <= 2000")
    _check_irreducible(g)
    plan = build_plan(g, spec.model)
    T = np.zeros((n, n))
    probs = plan.gval[plan.in_dst] / plan.wsum[plan.in_src]
    T[plan.in_dst, plan.in_src] = probs
    A = T - np.eye(n)
    A[-1, :] = 1.0
    b = np.zeros(n)
    b[-1] = 1.0
    pi = np.linalg.solve(A, b)
    # roundoff can leave harmless -1e-18 entries; real negatives must raise
    pi[(pi < 0) & (pi > -1e-12)] = 0.0
    return MassVector(values=pi, time_step=0)
