"""End-to-end experiment pipeline and its reproducibility plumbing.

A run takes one (alpha, mixing-target, model) triple through: generate ->
optional shuffle -> largest component -> steady state -> degree-space
prediction -> binned curves and exponent fits -> CSV artifacts + manifest.
All outputs are deterministic functions of the config: no timestamps, no
absolute paths, floats serialized with shortest round-trip repr.
"""

from __future__ import annotations

import dataclasses
import hashlib
import os
from dataclasses import dataclass

import numpy as np

from . import meanfield, netgen, stats, transport
from .graph import largest_component, write_edge_list

__all__ = [
    "RunConfig",
    "RunResult",
    "StageError",
    "run_experiment",
    "report_exponents",
    "read_manifest",
]


class StageError(RuntimeError):
    """A pipeline stage failed; artifacts written before it are retained."""

    def __init__(self, stage: str, cause: BaseException):
        super().__init__(f"stage '{stage}' failed: {cause}")
        self.stage = stage
        self.cause = cause


@dataclass
class RunConfig:
    """Effective configuration of one pipeline run.

    Exactly one of `gamma` (mixing-slope target, resolved by calibration)
    or `theta` (generator bias exponent, used directly) must be set.
    `k_max` is the upper fit-window edge: a number, "none", or "auto"
    (sqrt of the measured graph's node count). `workers` is reserved;
    every current stage is sequential and bit-reproducible.
    """

    nodes: int
    model: str = "weighted"
    alpha: float = 1.3
    gamma: float | None = None
    theta: float | None = None
    seed: int = 0
    shuffle: bool = False
    swaps: int | None = None
    k_min: float = 8.0
    k_max: str = "auto"
    bin_base: float = 2.0
    tolerance: float = 1e-10
    max_iterations: int = 100_000
    lazy: float = 0.0
    workers: int = 1

    def __post_init__(self):
        if self.model not in transport.MODELS:
            raise ValueError(f"model must be one of {transport.MODELS}")
        if (self.gamma is None) == (self.theta is None):
            raise ValueError("set exactly one of gamma and theta")
        if self.workers < 1:
            raise ValueError("workers must be >= 1")

    def resolved_k_max(self, node_count: int) -> float | None:
        if isinstance(self.k_max, (int, float)):
            return float(self.k_max)
        s = str(self.k_max).lower()
        if s == "auto":
            return float(np.sqrt(node_count))
        if s == "none":
            return None
        raise ValueError("k_max must be a number, 'auto', or 'none'")

    def to_text(self) -> str:
        lines = []
        for f in dataclasses.fields(self):
            lines.append(f"{f.name} = {_fmt(getattr(self, f.name))}")
        return "\n".join(sorted(lines)) + "\n"

    @classmethod
    def from_file(cls, path) -> "RunConfig":
        kv = _parse_kv(path)
        types = {f.name: f for f in dataclasses.fields(cls)}
        kwargs = {}
        for key, raw in kv.items():
            if key not in types:
                raise ValueError(f"unknown config key {key!r}")
            kwargs[key] = _coerce(key, raw)
        if "nodes" not in kwargs:
            raise ValueError("config must set 'nodes'")
        return cls(**kwargs)


def _fmt(v) -> str:
    if v is None:
        return "none"
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        return repr(float(v))
    return str(v)


def _coerce(key: str, raw: str):
    ints = {"nodes", "seed", "swaps", "max_iterations", "workers"}
    floats = {"alpha", "gamma", "theta", "k_min", "bin_base", "tolerance",
              "lazy"}
    low = raw.lower()
    if key == "k_max":
        if low in {"auto", "none"}:
            return low
        return float(raw)
    if low == "none":
        return None
    if key in {"shuffle"}:
        if low in {"true", "1", "yes"}:
            return True
        if low in {"false", "0", "no"}:
            return False
        raise ValueError(f"config key {key!r}: expected a boolean, got {raw!r}")
    if key in ints:
        return int(raw)
    if key in floats:
        return float(raw)
    return raw


def _parse_kv(path) -> dict[str, str]:
    out: dict[str, str] = {}
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, rawline in enumerate(fh, 1):
            line = rawline.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ValueError(f"{path}:{lineno}: expected 'key = value'")
            key, val = (s.strip() for s in line.split("=", 1))
            if "." in key:
                continue  # namespaced informational keys (artifact., result.)
            out[key] = val
    return out


def read_manifest(path) -> dict[str, str]:
    """All key = value pairs of a manifest, namespaced keys included."""
    out: dict[str, str] = {}
    with open(path, "r", encoding="utf-8") as fh:
        for rawline in fh:
            line = rawline.split("#", 1)[0].strip()
            if not line or "=" not in line:
                continue
            key, val = (s.strip() for s in line.split("=", 1))
            out[key] = val
    return out


@dataclass(frozen=True)
class RunResult:
    out_dir: str
    summary: dict
    files: dict  # artifact name -> path


def _sha256(path) -> str:
    h = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(1 << 16), b""):
            h.update(chunk)
    return h.hexdigest()


def _write_csv(path, header: str, rows) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(header + "\n")
        for row in rows:
            fh.write(",".join(_fmt(v) for v in row) + "\n")


def _curve_rows(curve: stats.BinnedCurve):
    for ab, mean, cnt in zip(curve.abscissa, curve.mean, curve.count):
        yield float(ab), float(mean), int(cnt)


def run_experiment(config: RunConfig, out_dir) -> RunResult:
    """Execute the full pipeline for one config; write artifacts + manifest."""
    os.makedirs(out_dir, exist_ok=True)
    files: dict[str, str] = {}
    summary: dict = {}

    def path(name: str) -> str:
        files[name] = os.path.join(out_dir, name)
        return files[name]

    stage = "calibrate"
    try:
        theta = config.theta
        if theta is None:
            theta = netgen.calibrate_theta(config.nodes, config.alpha,
                                           config.gamma, rng_seed=config.seed,
                                           k_min=config.k_min)
        summary["theta"] = float(theta)

        stage = "generate"
        g = netgen.generate(netgen.GenParams(config.nodes, config.alpha,
                                             theta, config.seed))
        summary["stubs_discarded"] = g.meta["stubs_discarded"]

        stage = "shuffle"
        if config.shuffle:
            g = netgen.maslov_sneppen_shuffle(
                g, netgen.ShuffleParams(config.swaps, config.seed + 17))
            summary["swaps_applied"] = g.meta["swaps_applied"]
        write_edge_list(g, path("graph.edges"))

        stage = "component"
        comp, _ = largest_component(g)
        summary["component_nodes"] = comp.node_count
        summary["component_edges"] = comp.edge_count

        stage = "simulate"
        spec = transport.TransportSpec(model=config.model,
                                       lazy_factor=config.lazy,
                                       tolerance=config.tolerance,
                                       max_iterations=config.max_iterations)
        ss = transport.steady_state(comp, spec)
        summary["converged"] = ss.converged
        summary["iterations"] = ss.iterations_used
        summary["residual"] = ss.residual
        summary["dropped"] = ss.dropped
        summary["auto_lazy"] = ss.auto_lazy
        deg = comp.degrees()
        _write_csv(path("masses.csv"), "node_id,degree,mass",
                   ((i, int(deg[i]), float(ss.mass.values[i]))
                    for i in range(comp.node_count)))

        stage = "predict"
        hist = meanfield.joint_histogram(comp)
        g_label = "unit" if config.model == "equi" else "linear"
        pred = meanfield.predict(hist, g_label)
        kcls, knn = meanfield.knn_curve(hist)
        pk = hist.degree_fractions()
        knn_of = dict(zip(kcls.tolist(), knn.tolist()))
        _write_csv(path("predict.csv"), "k,P_k,k_nn,R,x_pred",
                   ((int(k), float(pk[a]), knn_of.get(int(k), 0.0),
                     float(pred.R[a]), float(pred.x_pred[a]))
                    for a, k in enumerate(hist.classes)))
        _write_csv(path("knn.csv"), "x,y",
                   ((int(k), float(v)) for k, v in zip(kcls, knn)))

        stage = "analyze"
        k_cap = config.resolved_k_max(comp.node_count)
        sim_curve = stats.binned_conditional_mean(deg, ss.mass.values,
                                                  base=config.bin_base)
        pred_curve = stats.binned_conditional_mean(
            deg, pred.per_node(comp), base=config.bin_base)
        beta_fit = stats.fit_powerlaw(sim_curve, k_min=config.k_min,
                                      k_max=k_cap)
        gamma_fit = meanfield.knn_slope(comp, k_min=config.k_min,
                                        k_max=k_cap, base=config.bin_base)
        ck, cp = stats.ccdf(g.degrees()[g.degrees() > 0])
        ccdf_fit = stats.ccdf_tail_exponent(g.degrees()[g.degrees() > 0])
        sel = sim_curve.abscissa >= config.k_min
        corr = stats.loglog_correlation(sim_curve.mean[sel],
                                        pred_curve.mean[sel])
        summary["beta"] = beta_fit.exponent
        summary["gamma_measured"] = gamma_fit.exponent
        summary["ccdf_slope"] = ccdf_fit.exponent
        summary["correlation"] = corr
        summary["beta_predicted"] = (1.0 if config.model == "equi"
                                     else 2.0 + gamma_fit.exponent)
        _write_csv(path("xcurve.csv"), "x,y,count", _curve_rows(sim_curve))
        _write_csv(path("predcurve.csv"), "x,y,count",
                   _curve_rows(pred_curve))
        _write_csv(path("ccdf.csv"), "x,y",
                   ((float(a), float(b)) for a, b in zip(ck, cp)))
        _write_csv(path("summary.csv"), "key,value",
                   sorted((k, _fmt(v)) for k, v in summary.items()))

        stage = "manifest"
        effective = dataclasses.replace(config, gamma=None, theta=theta)
        lines = [effective.to_text().rstrip("\n")]
        if config.gamma is not None:
            lines.append(f"result.gamma_target = {_fmt(config.gamma)}")
        for k, v in sorted(summary.items()):
            lines.append(f"result.{k} = {_fmt(v)}")
        for name in sorted(files):
            lines.append(f"artifact.{name} = sha256:{_sha256(files[name])}")
        manifest_path = os.path.join(out_dir, "manifest.txt")
        with open(manifest_path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write("\n".join(lines) + "\n")
        files["manifest.txt"] = manifest_path
    except Exception as exc:
        if isinstance(exc, StageError):
            raise
        raise StageError(stage, exc) from exc

    return RunResult(out_dir=str(out_dir), summary=summary, files=files)


def _net_label(summary: dict) -> str:
    if str(summary.get("shuffle", "")).lower() in {"true", "1"}:
        return "shuffled"
    gt = summary.get("gamma_target")
    if gt is not None:
        return f"generated(gamma={float(gt):+.1f})"
    return f"generated(theta={float(summary['theta']):+.2f})"


def report_exponents(run_dirs) -> str:
    """Tabulate fitted vs predicted exponents across completed runs.

    Accepts run directories (their manifest.txt is read). Rows with a
    non-converged simulation are flagged and carry no fitted value.
    """
    rows = []
    for d in run_dirs:
        man = read_manifest(os.path.join(d, "manifest.txt"))
        summ = {k.split(".", 1)[1]: v for k, v in man.items()
                if k.startswith("result.")}
        summ["shuffle"] = man.get("shuffle", "false")
        summ["theta"] = man.get("theta", summ.get("theta", "0"))
        model = man.get("model", "?")
        conv = summ.get("converged", "true").lower() == "true"
        beta = f"{float(summ['beta']):.3f}" if conv else "n/a (not converged)"
        pred = f"{float(summ['beta_predicted']):.3f}"
        rows.append((model, _net_label(summ), beta, pred))
    header = ("model", "network", "beta_fitted", "beta_predicted")
    widths = [max(len(str(r[i])) for r in rows + [header])
              for i in range(len(header))]
    fmt = "  ".join(f"{{:<{w}}}" for w in widths)
    lines = [fmt.format(*header)]
    lines.append("  ".join("-" * w for w in widths))
    for r in rows:
        lines.append(fmt.format(*r))
    return "\n".join(lines) + "\n"
