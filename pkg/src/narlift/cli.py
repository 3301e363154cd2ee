"""Command-line interface.

Subcommands: simulate, fit, predict, detrend, diagnose, anova, theory.
Exit codes: 0 success, 2 usage errors, 3 data errors (malformed or
inconsistent inputs), 4 numerical errors (e.g. a rank-deficient fit).
All randomness flows from the single --seed value of the invocation.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
from pathlib import Path

import numpy as np

from . import plotting
from .diagnostics import acf, ccf
from .lifting import detrend, detrend_summary, network_difference
from .model import (
    AnovaTable,
    FittedNar,
    NarParams,
    NarSpec,
    RankDeficientError,
    anova,
    fit_nar,
    forecast,
)
from .series import (
    FormatError,
    NetworkTimeSeries,
    center_nodes,
    load_graph_or_sequence,
    load_series,
    save_graph,
    save_series,
)
from .simulate import SimConfig, simulate_nar, simulate_var1_pair
from .var1 import region_grid

WEIGHT_CHOICES = {
    "inverse": "inverse_distance",
    "proportional": "distance_proportional",
    "uniform": "uniform",
}


def _parse_int_list(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(v) for v in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}")


def _parse_float_list(text: str) -> tuple[float, ...]:
    try:
        return tuple(float(v) for v in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}")


def _parse_model(text: str) -> tuple[int, tuple[int, ...]]:
    """Model flags of the form 'p:s1,s2,...', e.g. '2:1,0'."""
    try:
        p_text, s_text = text.split(":", 1)
        p = int(p_text)
        s = tuple(int(v) for v in s_text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(
            f"expected a model of the form p:s1,s2,... (e.g. 2:1,0), got {text!r}"
        )
    return p, s


def _load_inputs(parser, args) -> NetworkTimeSeries:
    graph = load_graph_or_sequence(args.graph)
    series = load_series(args.series, graph=graph)
    return series


def _spec_from_args(parser, args) -> NarSpec:
    if len(args.nbhd) != args.order:
        parser.error(f"--nbhd has {len(args.nbhd)} entries for --order {args.order}")
    return NarSpec(p=args.order, s=args.nbhd, weight_convention=WEIGHT_CHOICES[args.weights])


def _write_csv(path, rows) -> None:
    with Path(path).open("w", newline="") as fh:
        csv.writer(fh).writerows(rows)


def _params_document(fitted: FittedNar) -> dict:
    return {
        "order": fitted.spec.p,
        "nbhd": list(fitted.spec.s),
        "weights": fitted.spec.weight_convention,
        "per_stage_beta": fitted.spec.per_stage_beta,
        "alpha": list(fitted.params.alpha),
        "beta": [list(row) for row in fitted.params.beta],
        "sigma2": fitted.params.sigma2,
        "rss": fitted.rss,
        "n_obs": fitted.n_obs,
    }


def _load_params(path) -> tuple[NarSpec, NarParams]:
    try:
        doc = json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise FormatError(f"{path}: line {exc.lineno}, column {exc.colno}: invalid JSON") from exc
    except OSError as exc:
        raise FormatError(f"{path}: {exc}") from exc
    try:
        spec = NarSpec(p=doc["order"], s=tuple(doc["nbhd"]),
                       weight_convention=doc["weights"],
                       per_stage_beta=doc.get("per_stage_beta", True))
        params = NarParams(alpha=tuple(doc["alpha"]),
                           beta=tuple(tuple(row) for row in doc["beta"]),
                           sigma2=doc.get("sigma2", 1.0))
    except (KeyError, TypeError, ValueError) as exc:
        raise FormatError(f"{path}: malformed parameter file: {exc}") from exc
    return spec, params


def _fit_report(fitted: FittedNar) -> str:
    lines = [f"{fitted.spec.label()} fit"]
    lines.append(f"  weights: {fitted.spec.weight_convention}")
    lines.append(f"  n_obs: {fitted.n_obs}   n_params: {len(fitted.columns)}")
    for j, a in enumerate(fitted.params.alpha, start=1):
        lines.append(f"  alpha_{j}: {a:.6f}")
    for j, row in enumerate(fitted.params.beta, start=1):
        for r, b in enumerate(row, start=1):
            name = f"beta_{j}_{r}" if fitted.spec.per_stage_beta else f"beta_{j}"
            lines.append(f"  {name}: {b:.6f}")
    lines.append(f"  sigma2: {fitted.params.sigma2:.6f}")
    lines.append(f"  rss: {fitted.rss:.6f}")
    return "\n".join(lines)


# -- subcommands -----------------------------------------------------------------


def _cmd_simulate(parser, args) -> int:
    if args.two_node:
        if len(args.alpha) != 1 or len(args.beta) != 1:
            parser.error("--two-node takes exactly one --alpha and one --beta value")
        series = simulate_var1_pair(args.alpha[0], args.beta[0], sigma2=args.sigma2,
                                    n_times=args.T, seed=args.seed)
        if args.graph_out:
            save_graph(series.graph, args.graph_out)
    else:
        if not args.graph:
            parser.error("--graph is required unless --two-node is given")
        if args.order is None:
            parser.error("--order is required unless --two-node is given")
        graph = load_graph_or_sequence(args.graph)
        spec = _spec_from_args(parser, args)
        expected = sum(spec.s)
        if len(args.alpha) != spec.p:
            parser.error(f"--alpha needs {spec.p} values for order {spec.p}")
        if len(args.beta) != expected:
            parser.error(f"--beta needs {expected} values (one per lag/stage pair)")
        beta, pos = [], 0
        for sj in spec.s:
            beta.append(tuple(args.beta[pos:pos + sj]))
            pos += sj
        params = NarParams(alpha=args.alpha, beta=tuple(beta), sigma2=args.sigma2)
        config = SimConfig(spec=spec, params=params, graph=graph, n_times=args.T,
                           burn_in=args.burn_in, seed=args.seed)
        series = simulate_nar(config)
        if args.graph_out:
            save_graph(series.graph_at(1), args.graph_out)
    save_series(series, args.out)
    print(f"wrote {args.out} ({series.n_times} x {series.n_nodes})")
    return 0


def _cmd_fit(parser, args) -> int:
    spec = _spec_from_args(parser, args)
    series = _load_inputs(parser, args)
    if args.center:
        series = center_nodes(series)
    fitted = fit_nar(series, spec, t_start=args.t_start)
    print(_fit_report(fitted))
    if args.out_params:
        Path(args.out_params).write_text(json.dumps(_params_document(fitted), indent=2) + "\n")
        print(f"wrote {args.out_params}")
    if args.out_residuals:
        res = NetworkTimeSeries(fitted.residuals, node_labels=fitted.node_labels)
        save_series(res, args.out_residuals)
        print(f"wrote {args.out_residuals}")
    return 0


def _cmd_predict(parser, args) -> int:
    series = _load_inputs(parser, args)
    spec, params = _load_params(args.params)
    preds = forecast(spec, params, series, args.horizon)
    rows = [["t", *series.node_labels]]
    for h in range(args.horizon):
        rows.append([str(series.n_times + h + 1), *(repr(float(v)) for v in preds[h])])
    _write_csv(args.out, rows)
    print(f"wrote {args.out} ({args.horizon} x {series.n_nodes})")
    return 0


def _cmd_detrend(parser, args) -> int:
    series = _load_inputs(parser, args)
    convention = "auto" if args.weights == "auto" else WEIGHT_CHOICES[args.weights]
    lifted = network_difference(series, convention)
    details = NetworkTimeSeries(lifted.details, node_labels=series.node_labels)
    save_series(details, args.out_details)
    print(f"wrote {args.out_details}")
    if args.out_density or args.out_plot:
        comparison = detrend_summary(series, lifted)
        if args.out_density:
            rows = [["value", "raw_density", "detail_density"]]
            for g, r, d in zip(comparison.grid, comparison.raw_density,
                               comparison.detail_density):
                rows.append([repr(float(g)), repr(float(r)), repr(float(d))])
            rows.append(["mean_abs", repr(comparison.raw_mean_abs),
                         repr(comparison.detail_mean_abs)])
            _write_csv(args.out_density, rows)
            print(f"wrote {args.out_density}")
        if args.out_plot:
            plotting.save_density(args.out_plot, comparison)
            print(f"wrote {args.out_plot}")
    return 0


def _cmd_diagnose(parser, args) -> int:
    series = load_series(args.series)
    labels = [lab.strip() for lab in args.nodes.split(",")] if args.nodes else list(series.node_labels[:2])
    if len(labels) < 1:
        parser.error("--nodes needs at least one label")
    idx = {lab: series.label_index(lab) - 1 for lab in labels}
    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)

    acfs, ccfs = {}, {}
    for lab in labels:
        acfs[lab] = acf(series.values[:, idx[lab]], args.max_lag)
    for i, a in enumerate(labels):
        for b in labels[i + 1:]:
            ccfs[(a, b)] = ccf(series.values[:, idx[a]], series.values[:, idx[b]], args.max_lag)

    rows = [["pair", "lag", "value", "band"]]
    for lab, cg in acfs.items():
        for lag, val in zip(cg.lags, cg.values):
            rows.append([f"{lab}:{lab}", str(int(lag)), repr(float(val)), repr(cg.band)])
    for (a, b), cg in ccfs.items():
        for lag, val in zip(cg.lags, cg.values):
            rows.append([f"{a}:{b}", str(int(lag)), repr(float(val)), repr(cg.band)])
    corr_csv = out_dir / "correlograms.csv"
    _write_csv(corr_csv, rows)
    panel_svg = out_dir / "correlogram_panel.svg"
    plotting.save_correlogram_panel(panel_svg, labels, acfs, ccfs)
    print(f"wrote {corr_csv}")
    print(f"wrote {panel_svg}")
    return 0


def anova_pipeline(series: NetworkTimeSeries, specs, detrend_convention="auto",
                   labels=None) -> tuple[AnovaTable, AnovaTable]:
    """Fit every spec on the raw and on the spatially detrended data.

    All fits share the observation rows implied by the largest model order
    (intersected with joint feasibility), so the residual sums of squares
    are directly comparable within each table.
    """
    specs = list(specs)
    if not specs:
        raise ValueError("no model specs given")
    t0 = max(sp.p for sp in specs) + 1

    def _table(data) -> AnovaTable:
        fits = [fit_nar(data, sp, t_start=t0) for sp in specs]
        common = set(fits[0].rows)
        for f in fits[1:]:
            common &= set(f.rows)
        if any(set(f.rows) != common for f in fits):
            fits = [fit_nar(data, sp, t_start=t0, sample=common) for sp in specs]
        return anova(fits, labels)

    return _table(series), _table(detrend(series, detrend_convention))


def _cmd_anova(parser, args) -> int:
    series = _load_inputs(parser, args)
    convention = WEIGHT_CHOICES[args.weights]
    specs = [NarSpec(p=p, s=s, weight_convention=convention) for p, s in args.model]
    raw_table, det_table = anova_pipeline(series, specs)
    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    for name, table in (("raw", raw_table), ("detrended", det_table)):
        text = table.to_text()
        print(f"[{name} data]")
        print(text)
        print()
        (out_dir / f"anova_{name}.txt").write_text(text + "\n")
        _write_csv(out_dir / f"anova_{name}.csv", table.csv_rows())
    print(f"wrote {out_dir}/anova_raw.{{txt,csv}} and {out_dir}/anova_detrended.{{txt,csv}}")
    return 0


def _cmd_theory(parser, args) -> int:
    grid = region_grid(args.grid)
    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    grid_csv = out_dir / "region_grid.csv"
    _write_csv(grid_csv, grid.csv_rows())
    sign_svg = plotting.save_sign_map(out_dir / "reduction_sign.svg", grid)
    rho_svg = plotting.save_rho_contour(out_dir / "cross_correlation.svg", grid)
    for p in (grid_csv, sign_svg, rho_svg):
        print(f"wrote {p}")
    return 0


# -- parser ----------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="narlift",
        description="Model, simulate and diagnose autoregressive time series on graphs.",
    )
    sub = parser.add_subparsers(dest="subcommand", required=True)

    def add_model_flags(p, required=False):
        p.add_argument("--order", type=int, required=required,
                       help="autoregressive order p")
        p.add_argument("--nbhd", type=_parse_int_list, default=(1,),
                       help="comma-separated neighbourhood order per lag, e.g. 1,0")
        p.add_argument("--weights", choices=sorted(WEIGHT_CHOICES), default="inverse",
                       help="neighbour weight convention")

    sim = sub.add_parser("simulate", help="simulate a network autoregression")
    sim.add_argument("--two-node", action="store_true",
                     help="exact two-node first-order model with stationary start")
    sim.add_argument("--graph", help="graph JSON or manifest (general model)")
    add_model_flags(sim)
    sim.add_argument("--alpha", type=_parse_float_list, required=True,
                     help="comma-separated own-lag coefficients")
    sim.add_argument("--beta", type=_parse_float_list, required=True,
                     help="comma-separated neighbour coefficients, lag-major")
    sim.add_argument("--sigma2", type=float, default=1.0, help="innovation variance")
    sim.add_argument("--T", type=int, required=True, help="series length")
    sim.add_argument("--burn-in", type=int, default=500)
    sim.add_argument("--seed", type=int, default=0)
    sim.add_argument("--out", required=True, help="output series CSV")
    sim.add_argument("--graph-out", help="also write the graph JSON here")
    sim.set_defaults(func=_cmd_simulate)

    fit = sub.add_parser("fit", help="least-squares fit of a model")
    fit.add_argument("--series", required=True)
    fit.add_argument("--graph", required=True)
    add_model_flags(fit, required=True)
    fit.add_argument("--center", action="store_true",
                     help="subtract per-node means before fitting")
    fit.add_argument("--t-start", type=int, default=None,
                     help="first response time (default p+1)")
    fit.add_argument("--out-params", help="write fitted parameters as JSON")
    fit.add_argument("--out-residuals", help="write the residual matrix as CSV")
    fit.set_defaults(func=_cmd_fit)

    pred = sub.add_parser("predict", help="iterated forecasts from a fitted model")
    pred.add_argument("--series", required=True)
    pred.add_argument("--graph", required=True)
    pred.add_argument("--params", required=True, help="parameter JSON from 'fit'")
    pred.add_argument("--horizon", type=int, default=1)
    pred.add_argument("--out", required=True)
    pred.set_defaults(func=_cmd_predict)

    det = sub.add_parser("detrend", help="spatial detrending by network differencing")
    det.add_argument("--series", required=True)
    det.add_argument("--graph", required=True)
    det.add_argument("--weights", choices=["auto", *sorted(WEIGHT_CHOICES)], default="auto")
    det.add_argument("--out-details", required=True, help="detail coefficients CSV")
    det.add_argument("--out-density", help="density comparison CSV")
    det.add_argument("--out-plot", help="density comparison SVG")
    det.set_defaults(func=_cmd_detrend)

    diag = sub.add_parser("diagnose", help="correlograms for selected nodes")
    diag.add_argument("--series", required=True)
    diag.add_argument("--nodes", help="comma-separated node labels (default: first two)")
    diag.add_argument("--max-lag", type=int, default=None)
    diag.add_argument("--out-dir", required=True)
    diag.set_defaults(func=_cmd_diagnose)

    an = sub.add_parser("anova", help="residual-sum-of-squares tables, raw and detrended")
    an.add_argument("--series", required=True)
    an.add_argument("--graph", required=True)
    an.add_argument("--model", type=_parse_model, action="append", required=True,
                    help="model as p:s1,...,sp (repeatable), e.g. --model 2:1,0")
    an.add_argument("--weights", choices=sorted(WEIGHT_CHOICES), default="inverse")
    an.add_argument("--out-dir", required=True)
    an.set_defaults(func=_cmd_anova)

    theo = sub.add_parser("theory", help="two-node closed-form maps over the stationarity region")
    theo.add_argument("--grid", type=int, default=201, help="grid resolution per axis")
    theo.add_argument("--out-dir", required=True)
    theo.set_defaults(func=_cmd_theory)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(parser, args)
    except FormatError as exc:
        print(f"data error: {exc}", file=sys.stderr)
        return 3
    except RankDeficientError as exc:
        print(f"numerical error: {exc}", file=sys.stderr)
        return 4
    except np.linalg.LinAlgError as exc:
        print(f"numerical error: {exc}", file=sys.stderr)
        return 4
    except (ValueError, OSError) as exc:
        print(f"data error: {exc}", file=sys.stderr)
        return 3


def cli_main() -> None:
    sys.exit(main())


if __name__ == "__main__":
    cli_main()
