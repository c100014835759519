"""Shared test utilities: independent oracles, random graphs, datasets.

The brute-force arrival search here is deliberately a different algorithm
from the engine under test (path-tree exploration with a dominance argument
instead of a step-ordered scan), so agreement between the two is meaningful.
"""

from __future__ import annotations

import io
import os

import numpy as np

from tempodia import TemporalGraph, ingest_sociopatterns
from tempodia.synthetic import DATASET_FILES, build_contact_lines

UNREACHED = 10**9


def brute_force_arrivals(graph: TemporalGraph, source: int) -> dict[int, int]:
    """Earliest arrivals by exploring strictly-increasing-time walks.

    Extends every walk from ``(node, time)`` along any event at a strictly
    later step.  A walk is pruned when it enters a node no earlier than the
    node's best-known arrival: the earlier arrival can use every event the
    later one can (event availability only shrinks as time advances), so
    nothing reachable is lost.  Events are scanned as an unsorted list.
    """
    events = [(int(t), int(u), int(v)) for t, u, v in graph.events]
    best = {source: 0}
    stack = [(source, 0)]
    while stack:
        node, time = stack.pop()
        if best.get(node, UNREACHED) < time:
            continue
        for t, u, v in events:
            if t <= time:
                continue
            if u == node or v == node:
                other = v if u == node else u
                if t < best.get(other, UNREACHED):
                    best[other] = t
                    stack.append((other, t))
    return best


def arrivals_array(graph: TemporalGraph, source: int) -> np.ndarray:
    """Brute-force arrivals in the engine's array convention (-1 unreached)."""
    best = brute_force_arrivals(graph, source)
    out = np.full(graph.n_nodes, -1, dtype=np.int64)
    for node, step in best.items():
        out[node] = step
    return out


def random_small_graph(rng: np.random.Generator) -> TemporalGraph:
    """A random graph small enough for brute-force checking."""
    n = int(rng.integers(2, 9))
    horizon = int(rng.integers(1, 7))
    m = int(rng.integers(0, 15))
    triples = []
    for _ in range(m):
        t = int(rng.integers(horizon))
        u, v = rng.choice(n, size=2, replace=False)
        triples.append((t, int(u), int(v)))
    return TemporalGraph.from_events(n, triples, horizon=horizon)


# ---------------------------------------------------------------------------
# dataset access: prefer real recordings on disk, else bundled stand-ins

_GRAPH_CACHE: dict[str, tuple[TemporalGraph, str]] = {}


def dataset_graph(name: str) -> tuple[TemporalGraph, str]:
    """The named dataset as a graph, plus where it came from.

    Looks for the real recording under ``$TEMPODIA_DATA_DIR`` and ``./data``;
    otherwise builds the bundled synthetic stand-in with matching headline
    statistics.  Cached per session.
    """
    if name in _GRAPH_CACHE:
        return _GRAPH_CACHE[name]
    filename = DATASET_FILES[name]
    for root in (os.environ.get("TEMPODIA_DATA_DIR"), "data"):
        if not root:
            continue
        path = os.path.join(root, filename)
        if os.path.isfile(path):
            graph = ingest_sociopatterns(path, resolution=20)
            _GRAPH_CACHE[name] = (graph, f"recording at {path}")
            return _GRAPH_CACHE[name]
    lines = build_contact_lines(name)
    graph = ingest_sociopatterns(io.StringIO("\n".join(lines)), resolution=20)
    _GRAPH_CACHE[name] = (graph, "bundled synthetic stand-in")
    return _GRAPH_CACHE[name]


# ---------------------------------------------------------------------------
# the hand-checked 9-node walkthrough used across test modules
#
# nodes a..i mapped to ids 0..8; events (step, u, v); flow from source 5:
#   step 2 reaches {1, 2}, step 3 reaches {0}, step 4 reaches {3, 8},
#   step 5 reaches {7}, step 6 reaches {4}; node 6's only contact happens
#   at step 1, before anything else moves, so it is never reached.

WALKTHROUGH_EVENTS = [
    (2, 5, 1),
    (2, 5, 2),
    (3, 1, 0),
    (4, 0, 3),
    (4, 2, 8),
    (5, 8, 7),
    (6, 3, 4),
    (1, 4, 6),
]
WALKTHROUGH_N = 9
WALKTHROUGH_SOURCE = 5
WALKTHROUGH_ARRIVALS = {5: 0, 1: 2, 2: 2, 0: 3, 3: 4, 8: 4, 7: 5, 4: 6}
WALKTHROUGH_UNREACHED = {6}


def walkthrough_graph() -> TemporalGraph:
    return TemporalGraph.from_events(WALKTHROUGH_N, WALKTHROUGH_EVENTS)
