"""Command-line entry point: ``qinvasion <subcommand>``.

Exit codes: 0 success, 2 invalid input, 3 failure while running.
"""

from __future__ import annotations

import argparse
import csv
import io
import logging
import sys
from dataclasses import replace
from pathlib import Path

from qinvasion.config import load_config
from qinvasion.ensemble import run_ensemble, scenario_catalog
from qinvasion.errors import ConfigError, DomainError
from qinvasion.evodyn import run
from qinvasion.games import make_payoffs
from qinvasion.netgen import NetworkSpec, build_network, degree_histogram, top_k_degree_nodes
from qinvasion.quantum import HALF_PI, as_strategy, build_pair_table
from qinvasion.seeding import numpy_rng

EXIT_OK, EXIT_INVALID, EXIT_FAILED = 0, 2, 3


def _fmt(x) -> str:
    return format(float(x), ".17g")


def _emit(text: str, output: str | None) -> None:
    if output is None:
        sys.stdout.write(text)
    else:
        Path(output).write_text(text)


def _rows_to_csv(header, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    return buf.getvalue()


def cmd_payoff_table(args) -> int:
    v = make_payoffs(args.game, args.param)
    strategies = [as_strategy(s) for s in args.strategies.split(",")]
    if not 0.0 <= args.omega <= HALF_PI:
        raise DomainError(f"omega must lie in [0, pi/2], got {args.omega!r}")
    table = build_pair_table(strategies, v, args.omega)
    rows = []
    for i, a in enumerate(table.strategies):
        for j, b in enumerate(table.strategies):
            rows.append((str(a), str(b), _fmt(table.row[i, j]), _fmt(table.col[i, j])))
    _emit(_rows_to_csv(("row_strategy", "col_strategy", "row_payoff", "col_payoff"), rows), args.output)
    return EXIT_OK


def cmd_run(args) -> int:
    cfg = load_config(args.config)
    config = cfg.run
    if args.seed is not None:
        config = config.with_param(config.param, args.seed)
    result = run(config, keep_trace=args.timeseries is not None)
    rows = [(str(s), _fmt(f), int(result.converged), result.generations)
            for s, f in zip(result.strategies, result.mean_fractions)]
    _emit(_rows_to_csv(("strategy", "mean_fraction", "converged", "generations"), rows),
          args.output or cfg.output)
    if args.timeseries is not None:
        n = int(result.series[0].sum())
        series_rows = [(g, *(_fmt(c / n) for c in counts)) for g, counts in enumerate(result.series)]
        Path(args.timeseries).write_text(
            _rows_to_csv(("generation", *(str(s) for s in result.strategies)), series_rows))
    return EXIT_OK


def _resolve_scenarios(args):
    catalog = scenario_catalog(desk_scale=args.desk_scale)
    out = []
    for target in args.targets:
        if target in catalog:
            sc = catalog[target]
            if args.seed is not None:
                sc = replace(sc, base_seed=args.seed)
            out.append((sc, None))
        elif Path(target).is_file():
            cfg = load_config(target)
            out.append((cfg.scenario(args.seed), cfg.output))
        else:
            raise ConfigError(f"unknown scenario {target!r}; valid names: {', '.join(catalog)}")
    return out


def cmd_sweep(args) -> int:
    scenarios = _resolve_scenarios(args)
    out_dir = None
    if args.output is not None and (len(scenarios) > 1 or Path(args.output).is_dir()
                                    or args.output.endswith("/")):
        out_dir = Path(args.output)
        out_dir.mkdir(parents=True, exist_ok=True)
    for sc, cfg_output in scenarios:
        if out_dir is not None:
            path = out_dir / f"{sc.name}.csv"
        else:
            path = Path(args.output or cfg_output or f"{sc.name}.csv")
        result = run_ensemble(sc, workers=args.workers)
        result.write_csv(path)
        if args.plot:
            from qinvasion.plotting import plot_sweep

            plot_sweep(result, path.with_suffix(".svg"))
        print(f"{sc.name}: {len(sc.grid)} points x {sc.runs} runs -> {path}", file=sys.stderr)
    return EXIT_OK


def cmd_net_stats(args) -> int:
    spec = NetworkSpec(kind=args.network.upper(), side=args.side, p_nw=args.p_nw,
                       m0=args.m0, m=args.m, n=args.n).validate()
    net = build_network(spec, numpy_rng(args.seed or 0, 1))
    rows = [("summary", "nodes", net.n), ("summary", "edges", net.edge_count)]
    rows += [("histogram", k, c) for k, c in degree_histogram(net).items()]
    degrees = net.degrees
    rows += [("top_degree", node, int(degrees[node]))
             for node in top_k_degree_nodes(net, min(10, net.n))]
    _emit(_rows_to_csv(("section", "key", "value"), rows), args.output)
    return EXIT_OK


def cmd_list_scenarios(args) -> int:
    for name, sc in scenario_catalog(desk_scale=args.desk_scale).items():
        t = sc.template
        print(f"{name}\t{t.network.kind}\t{t.game}\tcase{t.case.case}\t{sc.runs} runs")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=None, help="override the run or base seed")
    common.add_argument("--output", "-o", default=None, help="output file (or directory for sweeps)")
    common.add_argument("--workers", type=int, default=1, help="worker processes for sweeps")
    common.add_argument("--desk-scale", action="store_true",
                        help="20x20 agents, 2000 generations, 20 runs per point")
    common.add_argument("--plot", action="store_true", help="also write an SVG per sweep")
    common.add_argument("-v", "--verbose", action="store_true")

    parser = argparse.ArgumentParser(prog="qinvasion", description="Quantum-strategy invasion on networks.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("payoff-table", parents=[common], help="print the pair payoff table as CSV")
    p.add_argument("--game", required=True, help="PD, SD or SH")
    p.add_argument("--param", type=float, required=True, help="b for PD, r for SD/SH")
    p.add_argument("--omega", type=float, default=HALF_PI)
    p.add_argument("--strategies", default="C,D,H,Q")
    p.set_defaults(func=cmd_payoff_table)

    p = sub.add_parser("run", parents=[common], help="one realization from a YAML config")
    p.add_argument("config")
    p.add_argument("--timeseries", default=None, help="write per-generation fractions here")
    p.set_defaults(func=cmd_run)

    p = sub.add_parser("sweep", parents=[common], help="ensemble sweep of named scenarios or configs")
    p.add_argument("targets", nargs="+", metavar="SCENARIO|CONFIG")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("net-stats", parents=[common], help="node/edge counts and degree histogram")
    p.add_argument("--network", default="RL", help="RL, NW or SF")
    p.add_argument("--side", type=int, default=50)
    p.add_argument("--p-nw", type=float, default=0.5)
    p.add_argument("--n", type=int, default=None, help="SF node count (default side^2)")
    p.add_argument("--m0", type=int, default=3)
    p.add_argument("--m", type=int, default=2)
    p.set_defaults(func=cmd_net_stats)

    p = sub.add_parser("list-scenarios", parents=[common], help="names of the catalogued experiments")
    p.set_defaults(func=cmd_list_scenarios)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except (ConfigError, DomainError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except Exception as exc:  # noqa: BLE001
        print(f"failed: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_FAILED


if __name__ == "__main__":
    sys.exit(main())
