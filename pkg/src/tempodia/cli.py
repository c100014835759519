"""Command line front end.

Four commands cover the toolkit's workflows:

``analyze``
    ingest a contact file, report diameters and contact-time statistics
``simulate``
    draw one random temporal graph, save it, and report its diameters
``validate``
    sweep degree or size, comparing simulation against the growth model
``removal``
    node-removal robustness study with a correlation summary

Every run writes its outputs plus a ``manifest.json`` (command, resolved
flags, seed, input digests, package version, timestamp) into ``--out``.
Given the same command, flags, and seed, all outputs except the manifest
timestamp are byte-identical.  Figures accompany the delimited output by
default; ``--no-figures`` keeps a run text-only.

Exit codes: 0 on success, 2 on unusable input (bad flags, missing file,
parse errors), 3 on an empty graph.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import logging
import os
import sys
from datetime import datetime, timezone

import numpy as np

from . import __version__
from .analytic import ModelParams, recurrence_curve
from .diameters import AGGREGATIONS, network_diameters
from .experiments import (
    correlations,
    degree_sweep,
    distribution_report,
    removal_sweep,
    size_sweep,
    write_bins_report,
    write_correlation_report,
    write_removal_report,
    write_sweep_report,
)
from .flow import propagate_all
from .generator import FAMILIES, GeneratorConfig, generate
from .temporal_graph import (
    EmptyInputError,
    ParseError,
    ingest_sociopatterns,
    static_projection,
    write_graph,
)

log = logging.getLogger("tempodia")

SEED_ENV = "TEMPODIA_SEED"


class _CliError(Exception):
    def __init__(self, message: str, code: int):
        super().__init__(message)
        self.code = code


def parse_values(text: str) -> list[float]:
    """Axis values: ``start:stop:step`` (stop inclusive) or ``a,b,c``."""
    text = text.strip()
    if ":" in text:
        parts = text.split(":")
        if len(parts) != 3:
            raise ValueError("range syntax is start:stop:step")
        start, stop, step = (float(p) for p in parts)
        if step <= 0:
            raise ValueError("range step must be positive")
        values = []
        v = start
        while v <= stop + 1e-9:
            values.append(round(v, 12))
            v += step
        if not values:
            raise ValueError(f"range {text!r} produces no values")
        return values
    values = [float(p) for p in text.split(",") if p.strip()]
    if not values:
        raise ValueError(f"value list {text!r} is empty")
    return values


def _resolve_seed(args) -> int:
    if args.seed is not None:
        return args.seed
    env = os.environ.get(SEED_ENV)
    if env is not None:
        try:
            return int(env)
        except ValueError:
            raise _CliError(f"{SEED_ENV} must be an integer, got {env!r}", 2) from None
    seed = int(np.random.SeedSequence().generate_state(1, np.uint64)[0] >> 1)
    log.info("no seed given; drew %d (recorded in the manifest)", seed)
    return seed


def _digest(path: str) -> str:
    h = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(1 << 20), b""):
            h.update(chunk)
    return f"sha256:{h.hexdigest()}"


def _write_manifest(args, command: str, seed, inputs: list[str], outputs: list[str]):
    skip = {"func", "seed", "verbose", "command"}
    flags = {
        k: v for k, v in sorted(vars(args).items()) if k not in skip
    }
    payload = {
        "command": command,
        "flags": flags,
        "seed": seed,
        "inputs": {path: _digest(path) for path in inputs},
        "outputs": sorted(outputs),
        "package_version": __version__,
        "rng": "pcg64",
        "created_utc": datetime.now(timezone.utc).isoformat(),
    }
    path = os.path.join(args.out, "manifest.json")
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        json.dump(payload, fh, indent=2, sort_keys=True)
        fh.write("\n")


def _ingest_cli(path: str, resolution: int):
    if not os.path.isfile(path):
        raise _CliError(f"input file not found: {path}", 2)
    try:
        return ingest_sociopatterns(path, resolution=resolution)
    except EmptyInputError as exc:
        raise _CliError(f"{path}: {exc}", 3) from exc
    except ParseError as exc:
        raise _CliError(f"{path}: {exc}", 2) from exc


def _write_per_source(report, directory) -> str:
    path = os.path.join(directory, "per_source.csv")
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("source,effective,peak,tau,reached\n")
        for s in report.per_source:
            tau = "" if s.tau is None else s.tau
            fh.write(f"{s.source},{s.effective},{s.peak},{tau},{s.reached_count}\n")
    return "per_source.csv"


def _summary_payload(graph, report, resolution=None):
    proj = static_projection(graph)
    return {
        "n_nodes": graph.n_nodes,
        "n_events": graph.n_events,
        "horizon": graph.horizon,
        "resolution": resolution,
        "n_edges": proj.n_edges,
        "avg_degree": proj.avg_degree,
        "edges_per_node": proj.edges_per_node,
        "aggregation": report.aggregation,
        "effective": report.effective_net,
        "peak": report.peak_net,
        "tau": report.tau_net,
    }


def cmd_analyze(args) -> int:
    """Diameters and contact-time statistics for one contact file."""
    graph = _ingest_cli(args.input, args.resolution)
    seed = _resolve_seed(args)
    os.makedirs(args.out, exist_ok=True)
    outputs: list[str] = []

    report = network_diameters(propagate_all(graph), aggregation=args.aggregation)
    dist = distribution_report(graph)

    payload = _summary_payload(graph, report, args.resolution)
    payload["input"] = args.input
    with open(
        os.path.join(args.out, "analysis.json"), "w", encoding="utf-8", newline="\n"
    ) as fh:
        json.dump(payload, fh, indent=2, sort_keys=True)
        fh.write("\n")
    outputs.append("analysis.json")
    outputs.append(_write_per_source(report, args.out))
    outputs += write_bins_report(
        dist.duration_bins, args.out, "hist_durations", "contact run durations"
    )
    outputs += write_bins_report(
        dist.gap_bins, args.out, "hist_gaps", "gaps between contact runs"
    )

    if args.figures:
        from . import figures

        outputs.append(
            os.path.basename(
                figures.histogram_figure(
                    dist.duration_bins,
                    os.path.join(args.out, "hist_durations.png"),
                    "contact duration",
                )
            )
        )
        outputs.append(
            os.path.basename(
                figures.histogram_figure(
                    dist.gap_bins,
                    os.path.join(args.out, "hist_gaps.png"),
                    "contact gap",
                )
            )
        )
    _write_manifest(args, "analyze", seed, [args.input], outputs)
    log.info(
        "analyze: N=%d E=%d effective=%s tau=%s peak=%s",
        graph.n_nodes,
        payload["n_edges"],
        report.effective_net,
        report.tau_net,
        report.peak_net,
    )
    return 0


def cmd_simulate(args) -> int:
    """Draw one random temporal graph and report its diameters."""
    seed = _resolve_seed(args)
    zeta = args.zeta if args.zeta is not None else args.horizon
    dist_params = {
        k: v
        for k, v in (
            ("mean", args.mean),
            ("stddev", args.stddev),
            ("shape", args.shape),
            ("scale", args.scale),
            ("rate", args.rate),
        )
        if v is not None
    }
    try:
        config = GeneratorConfig(
            n_nodes=args.n,
            distribution=args.dist,
            target_avg_degree=args.k,
            active_time=zeta,
            horizon=args.horizon,
            seed=seed,
            dist_params=dist_params,
        )
    except ValueError as exc:
        raise _CliError(str(exc), 2) from exc
    graph = generate(config)
    os.makedirs(args.out, exist_ok=True)
    outputs = ["graph.txt"]
    write_graph(graph, os.path.join(args.out, "graph.txt"), extra=config.as_header())

    traces = propagate_all(graph)
    report = network_diameters(traces, aggregation=args.aggregation)
    payload = _summary_payload(graph, report)
    payload["config"] = {
        "n_nodes": config.n_nodes,
        "distribution": config.distribution,
        "target_avg_degree": config.target_avg_degree,
        "active_time": config.active_time,
        "horizon": config.horizon,
        "seed": config.seed,
        "dist_params": dict(config.dist_params),
    }
    with open(
        os.path.join(args.out, "simulate.json"), "w", encoding="utf-8", newline="\n"
    ) as fh:
        json.dump(payload, fh, indent=2, sort_keys=True)
        fh.write("\n")
    outputs.append("simulate.json")
    outputs.append(_write_per_source(report, args.out))

    if args.figures:
        from . import figures

        proj = static_projection(graph)
        params = ModelParams(
            n_nodes=config.n_nodes,
            avg_degree=proj.avg_degree,
            active_time=config.active_time,
            horizon=config.horizon,
        )
        tau_sources = [s for s in report.per_source if s.tau is not None]
        pick = (
            min(tau_sources, key=lambda s: (s.tau, s.peak, s.source)).source
            if tau_sources
            else max(report.per_source, key=lambda s: s.effective).source
        )
        counts = traces[pick].new_counts().astype(np.int64)
        counts[0] -= 1  # drop the source itself; the model curve excludes it
        outputs.append(
            os.path.basename(
                figures.growth_figure(
                    recurrence_curve(params),
                    counts,
                    os.path.join(args.out, "growth.png"),
                )
            )
        )
    _write_manifest(args, "simulate", seed, [], outputs)
    log.info(
        "simulate: N=%d events=%d effective=%s tau=%s peak=%s",
        graph.n_nodes,
        graph.n_events,
        report.effective_net,
        report.tau_net,
        report.peak_net,
    )
    return 0


def cmd_validate(args) -> int:
    """Model-vs-simulation sweep over degree or size."""
    seed = _resolve_seed(args)
    try:
        values = parse_values(args.values)
    except ValueError as exc:
        raise _CliError(str(exc), 2) from exc
    zeta = args.zeta if args.zeta is not None else args.horizon
    try:
        base = GeneratorConfig(
            n_nodes=args.n,
            distribution=args.dist,
            target_avg_degree=args.k,
            active_time=zeta,
            horizon=args.horizon,
            seed=seed,
        )
        if args.mode == "degree":
            result = degree_sweep(base, values, repeats=args.repeats, jobs=args.jobs)
        else:
            result = size_sweep(
                base, [int(v) for v in values], repeats=args.repeats, jobs=args.jobs
            )
    except ValueError as exc:
        raise _CliError(str(exc), 2) from exc

    os.makedirs(args.out, exist_ok=True)
    outputs = write_sweep_report(result, args.out)
    if args.figures:
        from . import figures

        outputs.append(
            os.path.basename(
                figures.sweep_figure(result, os.path.join(args.out, "sweep.png"))
            )
        )
    _write_manifest(args, "validate", seed, [], outputs)
    if result.flags:
        log.warning("validate flags: %s", ", ".join(result.flags))
    log.info(
        "validate: axis=%s points=%d rmse=%s mae=%s",
        result.axis,
        len(result.points),
        result.rmse,
        result.mae,
    )
    return 0


def cmd_removal(args) -> int:
    """Node-removal robustness sweep over one contact file."""
    graph = _ingest_cli(args.input, args.resolution)
    seed = _resolve_seed(args)
    try:
        fractions = parse_values(args.fractions)
    except ValueError as exc:
        raise _CliError(str(exc), 2) from exc
    bad = [p for p in fractions if not 0 <= p < 1]
    if bad:
        raise _CliError(f"fractions must lie in [0, 1): {bad}", 2)

    sweep = removal_sweep(graph, fractions, seed)
    os.makedirs(args.out, exist_ok=True)
    outputs = write_removal_report(sweep, args.out)

    corr = None
    if len(sweep.rows) >= 3:
        corr = correlations(sweep)
        outputs += write_correlation_report(corr, args.out)
    else:
        log.warning(
            "only %d removal row(s); correlations need at least 3 - skipped",
            len(sweep.rows),
        )

    if args.figures:
        from . import figures

        outputs.append(
            os.path.basename(
                figures.removal_figure(sweep, os.path.join(args.out, "removal.png"))
            )
        )
        if corr is not None:
            outputs.append(
                os.path.basename(
                    figures.correlation_figure(corr, os.path.join(args.out, "corr.png"))
                )
            )
    _write_manifest(args, "removal", seed, [args.input], outputs)
    log.info("removal: %d rows written", len(sweep.rows))
    return 0


def _add_common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument(
        "--out", default="out", help="output directory (default: ./out)"
    )
    parser.add_argument(
        "--seed",
        type=int,
        default=None,
        help=f"RNG seed; falls back to ${SEED_ENV}, then a recorded random draw",
    )
    parser.add_argument(
        "--figures",
        action=argparse.BooleanOptionalAction,
        default=True,
        help="render PNG figures alongside the delimited output",
    )
    parser.add_argument("--verbose", action="store_true", help="chatty logging")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="tempodia",
        description="Time-aware diameter metrics for temporal contact networks.",
    )
    parser.add_argument(
        "--version", action="version", version=f"%(prog)s {__version__}"
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("analyze", help="diameters and contact statistics for a file")
    p.add_argument("input", help="contact file (timestamp id id per line)")
    p.add_argument("--resolution", type=int, default=20, help="seconds per step")
    p.add_argument("--aggregation", choices=AGGREGATIONS, default="default")
    _add_common(p)
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("simulate", help="draw one random temporal graph")
    p.add_argument("--n", type=int, default=500, help="node count")
    p.add_argument("--dist", choices=FAMILIES, default="normal")
    p.add_argument("--k", type=float, default=10.0, help="target mean degree")
    p.add_argument(
        "--zeta", type=int, default=None, help="active steps per edge (default: horizon)"
    )
    p.add_argument("--horizon", type=int, default=16, help="step count")
    p.add_argument("--aggregation", choices=AGGREGATIONS, default="default")
    p.add_argument("--mean", type=float, default=None, help="normal mean override")
    p.add_argument("--stddev", type=float, default=None, help="normal stddev override")
    p.add_argument("--shape", type=float, default=None, help="pareto shape override")
    p.add_argument("--scale", type=float, default=None, help="pareto scale override")
    p.add_argument("--rate", type=float, default=None, help="poisson rate override")
    _add_common(p)
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("validate", help="model-vs-simulation sweep")
    p.add_argument("--mode", choices=("degree", "size"), required=True)
    p.add_argument(
        "--values",
        default=None,
        help="axis values, start:stop:step (stop inclusive) or comma list "
        "(defaults: 10:70:10 for degree, 250,500,1000,2000,4000 for size)",
    )
    p.add_argument("--n", type=int, default=500, help="node count (degree mode)")
    p.add_argument("--k", type=float, default=5.0, help="mean degree (size mode)")
    p.add_argument("--dist", choices=FAMILIES, default="normal")
    p.add_argument(
        "--zeta", type=int, default=None, help="active steps per edge (default: horizon)"
    )
    p.add_argument("--horizon", type=int, default=16, help="step count")
    p.add_argument("--repeats", type=int, default=10, help="seeds per point")
    p.add_argument(
        "--jobs",
        type=int,
        default=os.cpu_count() or 1,
        help="worker processes (results do not depend on this)",
    )
    _add_common(p)
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("removal", help="node-removal robustness study")
    p.add_argument("input", help="contact file (timestamp id id per line)")
    p.add_argument("--resolution", type=int, default=20, help="seconds per step")
    p.add_argument(
        "--fractions",
        default="0,0.1,0.2,0.4",
        help="removal fractions, comma list or start:stop:step",
    )
    _add_common(p)
    p.set_defaults(func=cmd_removal)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        level=logging.INFO if args.verbose else logging.WARNING,
        format="%(levelname)s %(message)s",
    )
    if args.command == "validate" and args.values is None:
        args.values = "10:70:10" if args.mode == "degree" else "250,500,1000,2000,4000"
    try:
        return args.func(args)
    except _CliError as exc:
        print(f"tempodia: {exc}", file=sys.stderr)
        return exc.code


if __name__ == "__main__":
    sys.exit(main())
