"""Deterministic spreading over time-respecting paths.

A node reached at step ``s`` can transmit only through events at strictly
later steps ``t > s``; the source starts reached at step 0.  Consequently an
event at step 0 never transmits and the earliest possible arrival is step 1.
Earliest arrivals are what a time-respecting breadth-first traversal
computes, and a single pass over the events in step order is exact: arrivals
granted at step ``t`` cannot enable further transmissions at the same step.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .temporal_graph import TemporalGraph


@dataclass(frozen=True)
class FlowTrace:
    """Earliest-arrival table for one source.

    ``arrival_steps[v]`` is the first step at which ``v`` is reached, ``-1``
    when unreached; the source itself carries 0.  ``predecessors[v]`` is the
    node that transmitted to ``v`` (lowest-numbered sender on ties, ``-1``
    for the source and the unreached); it is ``None`` for traces produced by
    the batched engine, which does not track paths.
    """

    source: int
    arrival_steps: np.ndarray
    horizon_used: int
    predecessors: np.ndarray | None = None

    @property
    def n_nodes(self) -> int:
        return len(self.arrival_steps)

    @property
    def reached(self) -> np.ndarray:
        """Node ids with a finite arrival, ascending (includes the source)."""
        return np.flatnonzero(self.arrival_steps >= 0)

    @property
    def reached_count(self) -> int:
        return int((self.arrival_steps >= 0).sum())

    @property
    def arrivals(self) -> dict[int, int]:
        """Mapping node -> arrival step over the reached set."""
        idx = self.reached
        return {int(v): int(self.arrival_steps[v]) for v in idx}

    def new_per_step(self) -> dict[int, frozenset]:
        """Nodes first reached at each step, keyed by step.

        Sparse: steps with no arrivals are omitted.  Step 0 maps to the
        source alone.  The union over all steps is the reached set and the
        sets are pairwise disjoint by construction.
        """
        out: dict[int, set] = {}
        for v in self.reached:
            out.setdefault(int(self.arrival_steps[v]), set()).add(int(v))
        return {t: frozenset(s) for t, s in out.items()}

    def new_counts(self) -> np.ndarray:
        """Count of first arrivals per step, length ``horizon_used``."""
        counts = np.zeros(max(self.horizon_used, 1), dtype=np.int64)
        arr = self.arrival_steps
        pos = arr[arr >= 0]
        if len(pos):
            counts[: pos.max() + 1] = np.bincount(pos, minlength=pos.max() + 1)[
                : len(counts)
            ]
        return counts


def propagate(graph: TemporalGraph, source: int) -> FlowTrace:
    """Run the spreading process from one source, tracking predecessors.

    Ties (several reached neighbours share an event step with the same new
    node) resolve to the lowest-numbered sender, making traces reproducible.
    """
    n = graph.n_nodes
    if not 0 <= source < n:
        raise IndexError(f"source {source} out of range [0, {n})")
    arrival = np.full(n, -1, dtype=np.int64)
    arrival[source] = 0
    predecessors = np.full(n, -1, dtype=np.int64)
    remaining = n - 1
    horizon_used = graph.horizon
    for t, block in graph.events_by_step():
        if t < 1:
            continue  # step-0 events precede every possible arrival
        best_sender: dict[int, int] = {}
        for _, u, v in block:
            au, av = arrival[u], arrival[v]
            if 0 <= au < t and av < 0:
                s = best_sender.get(v)
                if s is None or u < s:
                    best_sender[int(v)] = int(u)
            if 0 <= av < t and au < 0:
                s = best_sender.get(u)
                if s is None or v < s:
                    best_sender[int(u)] = int(v)
        for node, sender in best_sender.items():
            arrival[node] = t
            predecessors[node] = sender
        remaining -= len(best_sender)
        if remaining == 0:
            horizon_used = t + 1
            break
    return FlowTrace(
        source=source,
        arrival_steps=arrival,
        horizon_used=min(horizon_used, graph.horizon),
        predecessors=predecessors,
    )


def propagate_all(graph: TemporalGraph) -> list[FlowTrace]:
    """Run the spreading process from every source at once.

    Equivalent to ``[propagate(g, s) for s in range(N)]`` up to the absent
    predecessor tracking, but vectorised: reachability is kept as an
    ``(N, N)`` boolean matrix (row = source) and each event updates whole
    columns.  Senders are gated on the reachability snapshot taken at the
    start of the step, which encodes "reached strictly before ``t``".
    """
    n = graph.n_nodes
    # node-major layout: row v holds v's status across all sources, so each
    # event update runs over contiguous memory
    arrival = np.full((n, n), -1, dtype=np.int32)
    if n:
        np.fill_diagonal(arrival, 0)
    reached = np.eye(n, dtype=bool)
    remaining = n * n - n
    horizon_used = graph.horizon
    for t, block in graph.events_by_step():
        if t < 1:
            continue
        before = reached.copy()
        us = block[:, 1].tolist()
        vs = block[:, 2].tolist()
        for u, v in zip(us, vs):
            m = before[u] & ~reached[v]
            if m.any():
                reached[v][m] = True
                arrival[v][m] = t
                remaining -= int(m.sum())
            m = before[v] & ~reached[u]
            if m.any():
                reached[u][m] = True
                arrival[u][m] = t
                remaining -= int(m.sum())
        if remaining == 0:
            horizon_used = t + 1
            break
    by_source = np.ascontiguousarray(arrival.T).astype(np.int64)
    return [
        FlowTrace(
            source=i,
            arrival_steps=by_source[i],
            horizon_used=min(horizon_used, graph.horizon),
        )
        for i in range(n)
    ]


def shortest_arrival(trace: FlowTrace, target: int) -> int | None:
    """Earliest step at which ``target`` is reached, or ``None``."""
    if not 0 <= target < trace.n_nodes:
        raise IndexError(f"target {target} out of range [0, {trace.n_nodes})")
    step = int(trace.arrival_steps[target])
    return None if step < 0 else step
