"""Command-line interface.

Subcommands mirror the pipeline stages (generate, shuffle, component,
simulate, predict, knn, analyze) plus `run` for the full pipeline and
`report` for cross-run exponent tables. Exit codes: 0 success, 1 usage
error, 2 data error, 3 simulation did not converge.
"""

from __future__ import annotations

import argparse
import sys

import numpy as np

from . import meanfield, netgen, stats, transport
from .graph import EdgeListError, largest_component, load_graph, \
    write_edge_list
from .meanfield import UndirectedOnlyError
from .netgen import CalibrationError
from .pipeline import RunConfig, StageError, _fmt, _parse_kv, _write_csv, \
    report_exponents, run_experiment
from .stats import InsufficientDataError
from .transport import ReducibleChainError

__all__ = ["main"]

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_DATA = 2
EXIT_NO_CONVERGENCE = 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    # argparse exits 2 on bad flags; the contract reserves 2 for data errors
    def error(self, message):
        raise UsageError(message)


def _add_fit_args(p):
    p.add_argument("--k-min", type=float, default=8.0,
                   help="lower fit-window edge (default 8)")
    p.add_argument("--k-max", default="auto",
                   help="upper fit-window edge: number, 'auto', or 'none'")
    p.add_argument("--bin-base", type=float, default=2.0,
                   help="logarithmic bin base (default 2)")


def _parse_k_max(raw, node_count: int):
    s = str(raw).lower()
    if s == "auto":
        return float(np.sqrt(node_count))
    if s == "none":
        return None
    try:
        return float(raw)
    except ValueError:
        raise UsageError("--k-max must be a number, 'auto', or 'none'")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="biaswalk",
                     description="Mass transport on degree-correlated "
                                 "networks: generation, simulation, "
                                 "mean-field prediction, exponent fits.")
    sub = parser.add_subparsers(dest="command", metavar="command")

    p = sub.add_parser("generate", help="grow a power-law network with "
                                        "tunable degree-degree correlation")
    p.add_argument("-n", "--nodes", type=int, required=True)
    p.add_argument("--alpha", type=float, default=1.3,
                   help="degree-distribution tail exponent (default 1.3)")
    grp = p.add_mutually_exclusive_group(required=True)
    grp.add_argument("--theta", type=float,
                     help="partner-choice bias exponent, used directly")
    grp.add_argument("--gamma", type=float,
                     help="target mean-neighbor-degree slope; resolved by "
                          "calibration")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("-o", "--output", required=True, metavar="EDGEFILE")
    p.set_defaults(func=cmd_generate)

    p = sub.add_parser("shuffle", help="degree-preserving double-edge-swap "
                                       "randomization")
    p.add_argument("input", metavar="EDGEFILE")
    p.add_argument("--swaps", type=int, default=None,
                   help="swap attempts (default 10x edge count)")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("-o", "--output", required=True, metavar="EDGEFILE")
    p.set_defaults(func=cmd_shuffle)

    p = sub.add_parser("component", help="extract the largest (strongly) "
                                         "connected component")
    p.add_argument("input", metavar="EDGEFILE")
    p.add_argument("-o", "--output", required=True, metavar="EDGEFILE")
    p.set_defaults(func=cmd_component)

    p = sub.add_parser("simulate", help="iterate transport to steady state")
    p.add_argument("input", metavar="EDGEFILE")
    p.add_argument("--model", choices=transport.MODELS, default="weighted")
    p.add_argument("--lazy", type=float, default=0.0)
    p.add_argument("--tolerance", type=float, default=1e-10)
    p.add_argument("--max-iterations", type=int, default=100_000)
    p.add_argument("--component", action="store_true",
                   help="restrict to the largest component first")
    p.add_argument("-o", "--output", required=True, metavar="CSV")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("predict", help="degree-space steady-state prediction")
    p.add_argument("input", metavar="EDGEFILE")
    p.add_argument("--model", choices=transport.MODELS, default="weighted")
    p.add_argument("-o", "--output", required=True, metavar="CSV")
    p.set_defaults(func=cmd_predict)

    p = sub.add_parser("knn", help="mean neighbor degree curve and slope")
    p.add_argument("input", metavar="EDGEFILE")
    _add_fit_args(p)
    p.add_argument("-o", "--output", default=None, metavar="CSV")
    p.set_defaults(func=cmd_knn)

    p = sub.add_parser("analyze", help="fit a power law to a curve CSV")
    p.add_argument("input", metavar="CSV", help="columns x,y[,count]")
    _add_fit_args(p)
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("run", help="full pipeline into an output directory")
    p.add_argument("--config", default=None, metavar="FILE",
                   help="key = value config file; flags override it")
    p.add_argument("-n", "--nodes", type=int, default=None)
    p.add_argument("--alpha", type=float, default=None)
    p.add_argument("--model", choices=transport.MODELS, default=None)
    p.add_argument("--theta", type=float, default=None)
    p.add_argument("--gamma", type=float, default=None)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--shuffle", action="store_true", default=None)
    p.add_argument("--swaps", type=int, default=None)
    p.add_argument("--k-min", type=float, default=None)
    p.add_argument("--k-max", default=None)
    p.add_argument("--bin-base", type=float, default=None)
    p.add_argument("--tolerance", type=float, default=None)
    p.add_argument("--max-iterations", type=int, default=None)
    p.add_argument("--lazy", type=float, default=None)
    p.add_argument("--workers", type=int, default=None)
    p.add_argument("-o", "--out-dir", required=True, metavar="DIR")
    p.set_defaults(func=cmd_run)

    p = sub.add_parser("report", help="exponent table across completed runs")
    p.add_argument("run_dirs", nargs="+", metavar="RUNDIR")
    p.set_defaults(func=cmd_report)

    return parser


def cmd_generate(args) -> int:
    theta = args.theta
    if theta is None:
        theta = netgen.calibrate_theta(args.nodes, args.alpha, args.gamma,
                                       rng_seed=args.seed)
        print(f"calibrated theta = {theta:.4f} for gamma target "
              f"{args.gamma:+.2f}")
    g = netgen.generate(netgen.GenParams(args.nodes, args.alpha, theta,
                                         args.seed))
    write_edge_list(g, args.output)
    print(f"wrote {g.node_count} nodes, {g.edge_count} edges "
          f"({g.meta['stubs_discarded']} stubs discarded) to {args.output}")
    return EXIT_OK


def cmd_shuffle(args) -> int:
    g = load_graph(args.input)
    out = netgen.maslov_sneppen_shuffle(
        g, netgen.ShuffleParams(args.swaps, args.seed))
    write_edge_list(out, args.output)
    print(f"applied {out.meta['swaps_applied']} of "
          f"{out.meta['swap_attempts']} swap attempts; wrote {args.output}")
    return EXIT_OK


def cmd_component(args) -> int:
    g = load_graph(args.input)
    comp, _ = largest_component(g)
    write_edge_list(comp, args.output)
    kind = "strongly connected" if g.directed else "connected"
    print(f"largest {kind} component: {comp.node_count} of {g.node_count} "
          f"nodes, {comp.edge_count} edges; wrote {args.output}")
    return EXIT_OK


def cmd_simulate(args) -> int:
    g = load_graph(args.input)
    if args.component:
        g, _ = largest_component(g)
    spec = transport.TransportSpec(model=args.model, lazy_factor=args.lazy,
                                   tolerance=args.tolerance,
                                   max_iterations=args.max_iterations)
    ss = transport.steady_state(g, spec)
    deg = g.degrees()
    _write_csv(args.output, "node_id,degree,mass",
               ((i, int(deg[i]), float(ss.mass.values[i]))
                for i in range(g.node_count)))
    note = " (auto-lazy 0.5)" if ss.auto_lazy else ""
    print(f"{'converged' if ss.converged else 'NOT converged'} after "
          f"{ss.iterations_used} iterations{note}, residual "
          f"{ss.residual:.3e}, dropped {ss.dropped:.3e}; wrote {args.output}")
    return EXIT_OK if ss.converged else EXIT_NO_CONVERGENCE


def cmd_predict(args) -> int:
    g = load_graph(args.input)
    hist = meanfield.joint_histogram(g)
    g_label = "unit" if args.model == "equi" else "linear"
    pred = meanfield.predict(hist, g_label)
    kcls, knn = meanfield.knn_curve(hist)
    pk = hist.degree_fractions()
    knn_of = dict(zip(kcls.tolist(), knn.tolist()))
    _write_csv(args.output, "k,P_k,k_nn,R,x_pred",
               ((int(k), float(pk[a]), knn_of.get(int(k), 0.0),
                 float(pred.R[a]), float(pred.x_pred[a]))
                for a, k in enumerate(hist.classes)))
    print(f"wrote {len(hist.classes)} degree classes to {args.output}")
    return EXIT_OK


def cmd_knn(args) -> int:
    g = load_graph(args.input)
    k_max = _parse_k_max(args.k_max, g.node_count)
    fit = meanfield.knn_slope(g, k_min=args.k_min, k_max=k_max,
                              base=args.bin_base)
    if args.output is not None:
        deg = g.degrees()
        knn = meanfield.neighbor_mean_degree(g)
        sel = deg > 0
        curve = stats.binned_conditional_mean(deg[sel], knn[sel],
                                              base=args.bin_base)
        _write_csv(args.output, "x,y,count", (
            (float(a), float(m), int(c))
            for a, m, c in zip(curve.abscissa, curve.mean, curve.count)))
    print(f"knn slope = {fit.exponent:+.4f} (r^2 = {fit.r_squared:.4f}, "
          f"{fit.bin_count} bins in [{fit.k_min:g}, "
          f"{'inf' if fit.k_max is None else format(fit.k_max, 'g')}])")
    return EXIT_OK


def cmd_analyze(args) -> int:
    x, y, counts = [], [], []
    with open(args.input, "r", encoding="utf-8") as fh:
        header = fh.readline()
        if not header:
            raise EdgeListError(f"{args.input}: empty curve file")
        for lineno, line in enumerate(fh, 2):
            line = line.strip()
            if not line:
                continue
            parts = line.split(",")
            if len(parts) < 2:
                raise EdgeListError(f"{args.input}:{lineno}: "
                                    "expected x,y[,count]")
            try:
                x.append(float(parts[0]))
                y.append(float(parts[1]))
                if len(parts) > 2:
                    counts.append(int(parts[2]))
            except ValueError as exc:
                raise EdgeListError(f"{args.input}:{lineno}: {exc}") from exc
    curve = stats.curve_from_points(
        np.asarray(x), np.asarray(y),
        np.asarray(counts) if len(counts) == len(x) else None)
    k_max = _parse_k_max(args.k_max, max(len(x), 1))
    if str(args.k_max).lower() == "auto":
        k_max = None  # a bare curve file carries no node count to cap by
    fit = stats.fit_powerlaw(curve, k_min=args.k_min, k_max=k_max)
    print(f"exponent = {fit.exponent:+.4f}  intercept = "
          f"{fit.intercept:.4f}  r^2 = {fit.r_squared:.4f}  "
          f"bins = {fit.bin_count}")
    return EXIT_OK


def cmd_run(args) -> int:
    base: dict = {}
    if args.config is not None:
        raw = _parse_kv(args.config)
        from .pipeline import _coerce
        base = {k: _coerce(k, v) for k, v in raw.items()}
    overrides = {
        "nodes": args.nodes, "alpha": args.alpha, "model": args.model,
        "theta": args.theta, "gamma": args.gamma, "seed": args.seed,
        "shuffle": args.shuffle, "swaps": args.swaps, "k_min": args.k_min,
        "k_max": args.k_max, "bin_base": args.bin_base,
        "tolerance": args.tolerance, "max_iterations": args.max_iterations,
        "lazy": args.lazy, "workers": args.workers,
    }
    for key, val in overrides.items():
        if val is not None:
            base[key] = val
    # a CLI gamma/theta replaces whichever mixing knob the file carried
    if args.gamma is not None and args.theta is None:
        base["theta"] = None
    if args.theta is not None and args.gamma is None:
        base["gamma"] = None
    if "nodes" not in base or base["nodes"] is None:
        raise UsageError("run requires --nodes (or a config file setting it)")
    try:
        config = RunConfig(**base)
    except (TypeError, ValueError) as exc:
        raise UsageError(str(exc)) from exc
    result = run_experiment(config, args.out_dir)
    for key in ("theta", "component_nodes", "gamma_measured", "beta",
                "beta_predicted", "correlation", "iterations", "converged"):
        if key in result.summary:
            print(f"{key} = {_fmt(result.summary[key])}")
    print(f"artifacts in {result.out_dir}")
    return EXIT_OK if result.summary.get("converged", False) \
        else EXIT_NO_CONVERGENCE


def cmd_report(args) -> int:
    sys.stdout.write(report_exponents(args.run_dirs))
    return EXIT_OK


_DATA_ERRORS = (EdgeListError, InsufficientDataError, CalibrationError,
                UndirectedOnlyError, ReducibleChainError, OSError)


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if getattr(args, "command", None) is None:
            parser.print_usage(sys.stderr)
            return EXIT_USAGE
        return args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except _DATA_ERRORS as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except StageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
