"""Sweeps, removal studies, correlations, and delimited reports.

Simulated quantities come from the deterministic spreading engine reduced
with the default network aggregation; modelled quantities come from the
growth recurrence (saturation step) and the compounding closed form.  Every
sweep point runs ``repeats`` independently seeded simulations; per-repeat
seeds derive from the base seed and the point's position, so results do not
depend on how work is scheduled across processes.

Report writers emit small fixed-schema CSV files (with ``#`` comment
headers echoing the configuration) and JSON siblings carrying the same
numbers; output bytes are a pure function of the inputs.
"""

from __future__ import annotations

import csv
import json
import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, replace
from typing import Iterable, Sequence

import numpy as np

from .analytic import ModelParams, effective_diameter_estimate, recurrence_curve
from .diameters import network_diameters
from .flow import propagate_all
from .generator import GeneratorConfig, generate
from .temporal_graph import (
    TemporalGraph,
    contact_durations,
    contact_gaps,
    remove_nodes,
    static_projection,
)

REMOVAL_COLUMNS = ("p", "N", "E", "k_avg", "eff_d", "tau_d", "peak_d")
CORRELATION_VARIABLES = ("N", "E", "k_avg", "eff_d", "tau_d", "peak_d")


# --------------------------------------------------------------------------
# sweeps

@dataclass(frozen=True)
class SweepPoint:
    axis_value: float
    sim_values: tuple[float, ...]
    sim_mean: float
    sim_std: float
    pred_recurrence: float  # NaN when the recurrence never saturates
    pred_closed_form: float


@dataclass(frozen=True)
class SweepResult:
    axis: str
    base: GeneratorConfig
    repeats: int
    points: tuple[SweepPoint, ...]
    rmse: float
    mse: float
    mae: float
    flags: tuple[str, ...]


def error_metrics(observed, predicted) -> tuple[float, float, float]:
    """(RMSE, MSE, MAE) over pairs where both values are finite.

    All three are NaN when no pair survives the finiteness filter.
    """
    obs = np.asarray(observed, dtype=np.float64)
    pred = np.asarray(predicted, dtype=np.float64)
    if obs.shape != pred.shape:
        raise ValueError("observed and predicted must have matching shapes")
    keep = np.isfinite(obs) & np.isfinite(pred)
    if not keep.any():
        return (math.nan, math.nan, math.nan)
    diff = obs[keep] - pred[keep]
    mse = float(np.mean(diff**2))
    return (math.sqrt(mse), mse, float(np.mean(np.abs(diff))))


def _child_seed(base_seed: int, point_index: int, repeat: int) -> int:
    seq = np.random.SeedSequence([base_seed, point_index, repeat])
    return int(seq.generate_state(1, np.uint64)[0])


def _sim_effective(config: GeneratorConfig) -> float:
    graph = generate(config)
    report = network_diameters(propagate_all(graph))
    return float(report.effective_net)


def _run_simulations(configs: Sequence[GeneratorConfig], jobs: int) -> list[float]:
    if jobs > 1 and len(configs) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            return list(pool.map(_sim_effective, configs))
    return [_sim_effective(c) for c in configs]


def _sweep(
    base: GeneratorConfig,
    axis: str,
    axis_field: str,
    values: Sequence,
    repeats: int,
    jobs: int,
) -> SweepResult:
    values = list(values)
    if not values:
        raise ValueError("sweep needs at least one axis value")
    if repeats < 1:
        raise ValueError("repeats must be at least 1")
    if jobs < 1:
        raise ValueError("jobs must be at least 1")

    configs = []
    for i, value in enumerate(values):
        for r in range(repeats):
            configs.append(
                replace(
                    base,
                    **{axis_field: value},
                    seed=_child_seed(base.seed, i, r),
                )
            )
    sims = _run_simulations(configs, jobs)

    flags: set[str] = set()
    points = []
    for i, value in enumerate(values):
        block = sims[i * repeats : (i + 1) * repeats]
        cfg = configs[i * repeats]
        params = ModelParams(
            n_nodes=cfg.n_nodes,
            avg_degree=cfg.target_avg_degree,
            active_time=cfg.active_time,
            horizon=cfg.horizon,
        )
        curve = recurrence_curve(params)
        if curve.saturation_step is None:
            pred_rec = math.nan
            flags.add("model-stalled")
        else:
            pred_rec = float(curve.saturation_step)
        try:
            pred_closed = effective_diameter_estimate(params)
        except ValueError:
            pred_closed = math.nan
            flags.add("closed-form-undefined")
        points.append(
            SweepPoint(
                axis_value=float(value),
                sim_values=tuple(block),
                sim_mean=float(np.mean(block)),
                sim_std=float(np.std(block)),
                pred_recurrence=pred_rec,
                pred_closed_form=pred_closed,
            )
        )
    rmse, mse, mae = error_metrics(
        [p.sim_mean for p in points], [p.pred_recurrence for p in points]
    )
    if math.isnan(rmse):
        flags.add("no-model-saturation")
    return SweepResult(
        axis=axis,
        base=base,
        repeats=repeats,
        points=tuple(points),
        rmse=rmse,
        mse=mse,
        mae=mae,
        flags=tuple(sorted(flags)),
    )


def degree_sweep(
    base: GeneratorConfig,
    degrees: Sequence[float],
    repeats: int = 10,
    jobs: int = 1,
) -> SweepResult:
    """Sweep the target mean degree, simulating and modelling each point."""
    if any(k <= 0 for k in degrees):
        raise ValueError("degrees must be positive")
    return _sweep(base, "avg_degree", "target_avg_degree", degrees, repeats, jobs)


def size_sweep(
    base: GeneratorConfig,
    sizes: Sequence[int],
    repeats: int = 10,
    jobs: int = 1,
) -> SweepResult:
    """Sweep the node count, simulating and modelling each point."""
    if any(n < 2 for n in sizes):
        raise ValueError("sizes must be at least 2")
    return _sweep(base, "n_nodes", "n_nodes", [int(n) for n in sizes], repeats, jobs)


# --------------------------------------------------------------------------
# node removal

@dataclass(frozen=True)
class RemovalRow:
    fraction: float
    n_nodes: int
    n_edges: int
    edges_per_node: float
    effective: float | None
    tau: float | None
    peak: float | None
    flags: tuple[str, ...]


@dataclass(frozen=True)
class RemovalSweep:
    seed: int
    rows: tuple[RemovalRow, ...]


def removal_sweep(
    graph: TemporalGraph, fractions: Sequence[float], seed: int
) -> RemovalSweep:
    """Measure diameters after removing growing node fractions.

    Removal sets are nested for the fixed seed, so node and edge counts are
    non-increasing along sorted fractions.  A fraction that empties the
    graph yields a row flagged ``emptied`` with absent diameters; a reduced
    graph left with no events is flagged ``no-events`` (its diameters are
    still well defined).
    """
    rows = []
    for p in fractions:
        reduced, _ = remove_nodes(graph, p, seed)
        proj = static_projection(reduced)
        flags: list[str] = []
        if reduced.n_nodes == 0:
            rows.append(
                RemovalRow(
                    fraction=float(p),
                    n_nodes=0,
                    n_edges=0,
                    edges_per_node=0.0,
                    effective=None,
                    tau=None,
                    peak=None,
                    flags=("emptied",),
                )
            )
            continue
        if reduced.n_events == 0:
            flags.append("no-events")
        report = network_diameters(propagate_all(reduced))
        rows.append(
            RemovalRow(
                fraction=float(p),
                n_nodes=reduced.n_nodes,
                n_edges=proj.n_edges,
                edges_per_node=proj.edges_per_node,
                effective=report.effective_net,
                tau=report.tau_net,
                peak=report.peak_net,
                flags=tuple(flags),
            )
        )
    return RemovalSweep(seed=seed, rows=tuple(rows))


# --------------------------------------------------------------------------
# correlations

@dataclass(frozen=True)
class CorrelationMatrix:
    variables: tuple[str, ...]
    matrix: np.ndarray
    undefined: tuple[tuple[str, str], ...]


def correlations(sweep: RemovalSweep | Sequence[RemovalRow]) -> CorrelationMatrix:
    """Pairwise Pearson correlations over removal-sweep rows.

    Rows with an absent value are excluded pairwise.  A pair with fewer
    than two usable rows, or with a constant column, gets NaN and shows up
    in ``undefined``.  The diagonal is fixed at 1.
    """
    rows = sweep.rows if isinstance(sweep, RemovalSweep) else tuple(sweep)
    if len(rows) < 3:
        raise ValueError("correlations need at least 3 removal rows")
    columns = {
        "N": [float(r.n_nodes) for r in rows],
        "E": [float(r.n_edges) for r in rows],
        "k_avg": [float(r.edges_per_node) for r in rows],
        "eff_d": [math.nan if r.effective is None else float(r.effective) for r in rows],
        "tau_d": [math.nan if r.tau is None else float(r.tau) for r in rows],
        "peak_d": [math.nan if r.peak is None else float(r.peak) for r in rows],
    }
    names = CORRELATION_VARIABLES
    k = len(names)
    matrix = np.full((k, k), np.nan, dtype=np.float64)
    undefined: list[tuple[str, str]] = []
    data = {name: np.asarray(columns[name]) for name in names}
    for i in range(k):
        matrix[i, i] = 1.0
        for j in range(i + 1, k):
            x, y = data[names[i]], data[names[j]]
            keep = np.isfinite(x) & np.isfinite(y)
            xi, yi = x[keep], y[keep]
            if len(xi) < 2 or np.std(xi) == 0 or np.std(yi) == 0:
                undefined.append((names[i], names[j]))
                continue
            matrix[i, j] = matrix[j, i] = float(np.corrcoef(xi, yi)[0, 1])
    return CorrelationMatrix(
        variables=names, matrix=matrix, undefined=tuple(undefined)
    )


# --------------------------------------------------------------------------
# contact-time distributions

@dataclass(frozen=True)
class BinnedCounts:
    """Histogram over bins ``[lower[i], upper[i])`` (powers of two)."""

    lower: np.ndarray
    upper: np.ndarray
    counts: np.ndarray


@dataclass(frozen=True)
class DistributionReport:
    durations: np.ndarray
    gaps: np.ndarray
    duration_bins: BinnedCounts
    gap_bins: BinnedCounts


def log2_bins(values: Iterable[int]) -> BinnedCounts:
    """Count positive integers into bins ``[2^m, 2^(m+1))``.

    Interior empty bins are kept so monotonicity along the binned tail is
    visible; an empty input yields empty arrays.
    """
    arr = np.asarray(list(values), dtype=np.int64)
    if arr.size == 0:
        empty = np.empty(0, dtype=np.int64)
        return BinnedCounts(lower=empty, upper=empty.copy(), counts=empty.copy())
    if arr.min() < 1:
        raise ValueError("log2 bins need values >= 1")
    exponents = np.frexp(arr.astype(np.float64))[1] - 1  # exact for int inputs
    counts = np.bincount(exponents)
    m = np.arange(len(counts), dtype=np.int64)
    return BinnedCounts(
        lower=2**m, upper=2 ** (m + 1), counts=counts.astype(np.int64)
    )


def distribution_report(graph: TemporalGraph) -> DistributionReport:
    """Pool contact durations and gaps over all pairs and bin them."""
    durations = np.asarray(
        sorted(d for runs in contact_durations(graph).values() for d in runs),
        dtype=np.int64,
    )
    gaps = np.asarray(
        sorted(g for runs in contact_gaps(graph).values() for g in runs),
        dtype=np.int64,
    )
    return DistributionReport(
        durations=durations,
        gaps=gaps,
        duration_bins=log2_bins(durations),
        gap_bins=log2_bins(gaps),
    )


# --------------------------------------------------------------------------
# delimited reports

def _fmt(value) -> str:
    """Format a cell: shortest stable decimal, empty for absent."""
    if value is None:
        return ""
    f = float(value)
    if math.isnan(f):
        return "nan"
    if f == int(f) and abs(f) < 1e15:
        return str(int(f))
    return format(f, ".10g")


def _jsonable(value):
    if isinstance(value, float) and math.isnan(value):
        return None
    if isinstance(value, np.generic):
        return _jsonable(value.item())
    if isinstance(value, np.ndarray):
        return [_jsonable(v) for v in value.tolist()]
    if isinstance(value, dict):
        return {k: _jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_jsonable(v) for v in value]
    return value


def _write_csv(path, comments: Sequence[str], header: Sequence[str], rows) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        for line in comments:
            fh.write(f"# {line}\n")
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(header)
        for row in rows:
            writer.writerow([_fmt(cell) for cell in row])


def _write_json(path, payload) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        json.dump(_jsonable(payload), fh, indent=2, sort_keys=True)
        fh.write("\n")


def _base_comment(result: SweepResult) -> list[str]:
    base = result.base
    return [
        f"axis={result.axis}",
        (
            f"n_nodes={base.n_nodes} distribution={base.distribution} "
            f"target_avg_degree={_fmt(base.target_avg_degree)} "
            f"active_time={base.active_time} horizon={base.horizon} "
            f"repeats={result.repeats} base_seed={base.seed}"
        ),
        f"rmse={_fmt(result.rmse)} mse={_fmt(result.mse)} mae={_fmt(result.mae)}",
    ]


def write_sweep_report(result: SweepResult, directory, stem: str = "sweep") -> list[str]:
    """Write ``<stem>.csv`` and ``<stem>.json``; returns the file names."""
    csv_path = os.path.join(directory, f"{stem}.csv")
    _write_csv(
        csv_path,
        _base_comment(result),
        ("axis", "sim_mean", "sim_std", "pred_recurrence", "pred_closed_form"),
        (
            (p.axis_value, p.sim_mean, p.sim_std, p.pred_recurrence, p.pred_closed_form)
            for p in result.points
        ),
    )
    json_path = os.path.join(directory, f"{stem}.json")
    _write_json(
        json_path,
        {
            "axis": result.axis,
            "base": {
                "n_nodes": result.base.n_nodes,
                "distribution": result.base.distribution,
                "target_avg_degree": result.base.target_avg_degree,
                "active_time": result.base.active_time,
                "horizon": result.base.horizon,
                "seed": result.base.seed,
            },
            "repeats": result.repeats,
            "points": [
                {
                    "axis_value": p.axis_value,
                    "sim_values": list(p.sim_values),
                    "sim_mean": p.sim_mean,
                    "sim_std": p.sim_std,
                    "pred_recurrence": p.pred_recurrence,
                    "pred_closed_form": p.pred_closed_form,
                }
                for p in result.points
            ],
            "rmse": result.rmse,
            "mse": result.mse,
            "mae": result.mae,
            "flags": list(result.flags),
        },
    )
    return [os.path.basename(csv_path), os.path.basename(json_path)]


def write_removal_report(
    sweep: RemovalSweep, directory, stem: str = "removal"
) -> list[str]:
    csv_path = os.path.join(directory, f"{stem}.csv")
    _write_csv(
        csv_path,
        [f"removal seed={sweep.seed}"],
        REMOVAL_COLUMNS,
        (
            (r.fraction, r.n_nodes, r.n_edges, r.edges_per_node,
             r.effective, r.tau, r.peak)
            for r in sweep.rows
        ),
    )
    json_path = os.path.join(directory, f"{stem}.json")
    _write_json(
        json_path,
        {
            "seed": sweep.seed,
            "rows": [
                {
                    "p": r.fraction,
                    "N": r.n_nodes,
                    "E": r.n_edges,
                    "k_avg": r.edges_per_node,
                    "eff_d": r.effective,
                    "tau_d": r.tau,
                    "peak_d": r.peak,
                    "flags": list(r.flags),
                }
                for r in sweep.rows
            ],
        },
    )
    return [os.path.basename(csv_path), os.path.basename(json_path)]


def write_correlation_report(
    corr: CorrelationMatrix, directory, stem: str = "corr"
) -> list[str]:
    csv_path = os.path.join(directory, f"{stem}.csv")
    rows = (
        [name, *corr.matrix[i]] for i, name in enumerate(corr.variables)
    )
    with open(csv_path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["", *corr.variables])
        for row in rows:
            writer.writerow([row[0], *[_fmt(x) for x in row[1:]]])
    json_path = os.path.join(directory, f"{stem}.json")
    _write_json(
        json_path,
        {
            "variables": list(corr.variables),
            "matrix": corr.matrix,
            "undefined": [list(pair) for pair in corr.undefined],
        },
    )
    return [os.path.basename(csv_path), os.path.basename(json_path)]


def write_bins_report(
    bins: BinnedCounts, directory, stem: str, comment: str
) -> list[str]:
    csv_path = os.path.join(directory, f"{stem}.csv")
    _write_csv(
        csv_path,
        [comment],
        ("bin_lo", "bin_hi", "count"),
        zip(bins.lower, bins.upper, bins.counts),
    )
    json_path = os.path.join(directory, f"{stem}.json")
    _write_json(
        json_path,
        {
            "comment": comment,
            "bins": [
                {"lo": int(lo), "hi": int(hi), "count": int(c)}
                for lo, hi, c in zip(bins.lower, bins.upper, bins.counts)
            ],
        },
    )
    return [os.path.basename(csv_path), os.path.basename(json_path)]
