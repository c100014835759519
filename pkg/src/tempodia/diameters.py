"""Time-aware diameter metrics computed from flow traces.

Three per-source quantities summarise how far and how fast a flow travels:

``effective``
    the latest arrival step over everything the source reaches (0 when the
    source reaches nobody): how long until the flow has gone as far as it
    ever will.
``peak``
    the earliest step attaining the maximum count of first arrivals: when
    the flow grows fastest.
``tau``
    the first step by which at least one third of the network (source
    included, threshold ``ceil(N / 3)``) has been reached, or ``None`` when
    coverage never gets there.  0 when the source alone already meets the
    threshold (networks of up to three nodes).

Network-level values aggregate per-source ones; the default aggregation is
the worst-case one used throughout the reports: latest ``effective`` over
sources, earliest ``tau``, and the ``peak`` of the earliest-covering source
(smallest peak on ties, so the value is invariant under node renumbering).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable

import numpy as np

from .flow import FlowTrace

AGGREGATIONS = ("default", "max", "min", "mean")


@dataclass(frozen=True)
class SourceDiameters:
    source: int
    effective: int
    peak: int
    tau: int | None
    reached_count: int


@dataclass(frozen=True)
class DiameterReport:
    per_source: tuple[SourceDiameters, ...]
    effective_net: float
    peak_net: float
    tau_net: float | None
    aggregation: str


def source_diameters(trace: FlowTrace) -> SourceDiameters:
    """Reduce one flow trace to its three diameter values."""
    arr = trace.arrival_steps
    pos = arr[arr > 0]  # non-source arrivals, all >= 1
    effective = int(pos.max()) if len(pos) else 0

    if len(pos):
        counts = np.bincount(pos)
        peak = int(np.argmax(counts[1:])) + 1  # argmax takes the earliest
    else:
        peak = 0

    n = trace.n_nodes
    threshold = math.ceil(n / 3)
    if threshold <= 1:
        tau: int | None = 0
    elif len(pos) >= threshold - 1:
        tau = int(np.sort(pos)[threshold - 2])  # (threshold-1)-th arrival
    else:
        tau = None

    return SourceDiameters(
        source=trace.source,
        effective=effective,
        peak=peak,
        tau=tau,
        reached_count=trace.reached_count,
    )


def network_diameters(
    traces: Iterable[FlowTrace], aggregation: str = "default"
) -> DiameterReport:
    """Aggregate per-source diameters into network-level ones.

    ``default`` reports the slowest full extent (max ``effective``), the
    fastest one-third coverage (min ``tau`` over sources that achieve it),
    and the growth peak of that fastest-covering source; when several
    sources tie on ``tau`` the smallest of their peaks is taken, and when no
    source covers a third the peak falls back to the slowest source by the
    same rule.  ``max`` / ``min`` / ``mean`` apply one reduction to all
    three metrics, skipping absent ``tau`` values.
    """
    if aggregation not in AGGREGATIONS:
        raise ValueError(f"unknown aggregation {aggregation!r}")
    per_source = tuple(source_diameters(t) for t in traces)
    if not per_source:
        raise ValueError("need at least one flow trace")

    effectives = [s.effective for s in per_source]
    peaks = [s.peak for s in per_source]
    taus = [s.tau for s in per_source if s.tau is not None]

    if aggregation == "mean":
        eff = float(np.mean(effectives))
        peak = float(np.mean(peaks))
        tau = float(np.mean(taus)) if taus else None
    elif aggregation == "max":
        eff = float(max(effectives))
        peak = float(max(peaks))
        tau = float(max(taus)) if taus else None
    elif aggregation == "min":
        eff = float(min(effectives))
        peak = float(min(peaks))
        tau = float(min(taus)) if taus else None
    else:
        eff = float(max(effectives))
        if taus:
            tau = float(min(taus))
            peak = float(
                min(s.peak for s in per_source if s.tau is not None and s.tau == tau)
            )
        else:
            tau = None
            peak = float(min(s.peak for s in per_source if s.effective == eff))
    return DiameterReport(
        per_source=per_source,
        effective_net=eff,
        peak_net=peak,
        tau_net=tau,
        aggregation=aggregation,
    )
