"""Command-line front end.

Exit codes: 0 success, 2 configuration or input error, 3 disconnected result.
"""
from __future__ import annotations

import argparse
import logging
import math
import sys
from pathlib import Path

from . import export
from .config import ConfigError, RunConfig, load_run_config
from .estimator import DENSE
from .evaluation import evaluate, theoretical_lower_bound
from .export import TopologyFileError
from .feasibility import enumerate_candidates
from .orbits import build_constellation
from .trials import run_trials

EXIT_OK, EXIT_INPUT, EXIT_DISCONNECTED = 0, 2, 3

log = logging.getLogger("isltopo")


def _parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", required=True, help="INI run configuration")
    common.add_argument("--seed", type=int, help="base seed (constellation seed for evaluate/linkseries)")
    common.add_argument("--trials", type=int)
    common.add_argument("--variant", choices=["snapshot", "viability"])
    common.add_argument("--jobs", type=int, help="parallel trials (default 1)")
    common.add_argument("--out", help="output directory")
    common.add_argument("-v", "--verbose", action="store_true")

    parser = argparse.ArgumentParser(prog="isltopo", description="ISL topology design for Walker-Delta shells")
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("generate", parents=[common], help="constellation positions and candidate links")
    sub.add_parser("optimize", parents=[common], help="run seeded trials and export the best topology")
    sub.add_parser("benchmark", parents=[common], help="theoretical and dense lower bounds vs the sparse result")
    for name, help_ in (("evaluate", "metrics for an edge-list file"), ("linkseries", "link distances along the diameter path")):
        p = sub.add_parser(name, parents=[common], help=help_)
        p.add_argument("--topology", required=True, help="edge-list CSV")
    return parser


def _fmt(x) -> str:
    return "inf" if isinstance(x, float) and math.isinf(x) else f"{x:g}" if isinstance(x, float) else str(x)


def _config(args) -> RunConfig:
    config = load_run_config(args.config)
    return config.with_overrides(seed=args.seed, trials=args.trials, variant=args.variant, jobs=args.jobs, out=args.out)


def cmd_generate(config: RunConfig) -> int:
    constellation = build_constellation(config.constellation, config.base_seed)
    candidates = enumerate_candidates(constellation, config.variant)
    out = config.output_dir
    if config.exports.positions:
        export.write_positions(out / "positions.csv", constellation, [config.variant.t0])
    if config.exports.candidates:
        export.write_candidates(out / "candidates.csv", candidates)
    counts = candidates.counts()
    print(f"satellites: {constellation.num_satellites}")
    print(f"candidate links ({config.variant.kind}): {len(candidates)}")
    print(f"candidates per satellite: mean {counts.mean():.2f}, min {counts.min()}, max {counts.max()}")
    return EXIT_OK


def _export_trials(result, config: RunConfig, out: Path, prefix: str = "") -> None:
    best = result.best
    t0 = config.eval_window.start_s
    if config.exports.edges:
        export.write_edges(out / f"{prefix}edges.csv", best.topology, best.constellation, t0)
    if config.exports.metrics:
        export.write_metrics(out / f"{prefix}metrics.json", best.report, constellation_seed=best.constellation_seed)
    export.write_trials(out / f"{prefix}trials.csv", result.trials)
    if config.exports.history:
        for r in result.trials:
            export.write_history(out / f"{prefix}history" / f"trial_{r.trial:03d}.csv", r.history)
    if config.exports.linkseries and best.report.connected:
        export.write_linkseries(out / f"{prefix}linkseries.csv", best.constellation, best.report.diameter_witness_path,
                                config.eval_window, config.constellation.max_isl_distance_km)


def cmd_optimize(config: RunConfig) -> int:
    result = run_trials(config)
    _export_trials(result, config, config.output_dir)
    best = result.best
    h, hbar, sigma = best.objective
    print(f"best trial {best.trial} (seed {best.seed}): H={_fmt(h)} H_bar={_fmt(hbar)} sigma={sigma:.4f}")
    print(f"worst-case delay: {_fmt(best.report.worst_case_delay_ms)} ms")
    if not best.report.connected:
        print("best topology is disconnected (diameter inf)", file=sys.stderr)
        return EXIT_DISCONNECTED
    return EXIT_OK


def _summary(result) -> dict:
    b = result.best
    return {
        "link_cap": b.link_cap,
        "best_seed": b.seed,
        "diameter_hops": export._num(b.report.diameter_hops),
        "mean_eccentricity_hops": export._num(b.report.mean_eccentricity_hops),
        "stability_fraction": b.report.stability_fraction,
        "worst_case_delay_ms": export._num(b.report.worst_case_delay_ms),
        "trial_diameters": [export._num(r.report.diameter_hops) for r in result.trials],
    }


def cmd_benchmark(config: RunConfig) -> int:
    hops, delay_ms = theoretical_lower_bound(config.constellation)
    sparse = run_trials(config)
    dense_config = config.with_overrides(link_cap=DENSE)
    dense = run_trials(dense_config)
    out = config.output_dir
    _export_trials(sparse, config, out, prefix="sparse_")
    _export_trials(dense, dense_config, out, prefix="dense_")
    export.write_json(out / "bounds.json", {
        "variant": config.variant.kind,
        "theoretical": {"hops": hops, "delay_ms": delay_ms},
        "dense": _summary(dense),
        "sparse": _summary(sparse),
    })
    print(f"theoretical bound: {hops} hops, {delay_ms:.1f} ms")
    print(f"dense ({config.variant.kind}): {_fmt(dense.best.report.diameter_hops)} hops")
    print(f"sparse ({config.variant.kind}): {_fmt(sparse.best.report.diameter_hops)} hops")
    if not (sparse.best.report.connected and dense.best.report.connected):
        return EXIT_DISCONNECTED
    return EXIT_OK


def _load_topology(config: RunConfig, path):
    constellation = build_constellation(config.constellation, config.base_seed)
    return constellation, export.read_edges(path, config.constellation)


def cmd_evaluate(config: RunConfig, topology_file) -> int:
    constellation, topology = _load_topology(config, topology_file)
    report = evaluate(topology, constellation, config.eval_window)
    if config.exports.metrics:
        export.write_metrics(config.output_dir / "metrics.json", report, constellation_seed=config.base_seed)
    print(f"diameter {_fmt(report.diameter_hops)} hops, mean eccentricity {_fmt(report.mean_eccentricity_hops)}, "
          f"stability {report.stability_fraction:.4f}, worst-case delay {_fmt(report.worst_case_delay_ms)} ms")
    return EXIT_OK if report.connected else EXIT_DISCONNECTED


def cmd_linkseries(config: RunConfig, topology_file) -> int:
    constellation, topology = _load_topology(config, topology_file)
    report = evaluate(topology, constellation, config.eval_window)
    if not report.connected:
        print("topology is disconnected; no diameter path", file=sys.stderr)
        return EXIT_DISCONNECTED
    path = export.write_linkseries(config.output_dir / "linkseries.csv", constellation, report.diameter_witness_path,
                                   config.eval_window, config.constellation.max_isl_distance_km)
    print(f"{len(report.diameter_witness_path) - 1} links written to {path}")
    return EXIT_OK


def main(argv=None) -> int:
    args = _parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(message)s")
    try:
        config = _config(args)
        if args.command == "generate":
            return cmd_generate(config)
        if args.command == "optimize":
            return cmd_optimize(config)
        if args.command == "benchmark":
            return cmd_benchmark(config)
        if args.command == "evaluate":
            return cmd_evaluate(config, args.topology)
        return cmd_linkseries(config, args.topology)
    except (ConfigError, TopologyFileError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
