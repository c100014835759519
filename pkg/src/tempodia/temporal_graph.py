"""Storage, ingestion, and transformation of temporal contact networks.

A temporal graph is a set of undirected contact events ``(t, u, v)`` on a
dense node range ``[0, N)`` together with a step horizon ``T``; every event
satisfies ``0 <= t < T``.  Events are canonicalised on construction: node
pairs are stored with ``u < v``, duplicates collapse, and the event table is
sorted by ``(t, u, v)``.  All downstream code relies on that ordering.
"""

from __future__ import annotations

import io
import os
from dataclasses import dataclass
from typing import Iterable, Iterator, NamedTuple, TextIO

import numpy as np


class ParseError(ValueError):
    """A contact line could not be parsed.  Carries a 1-based line number."""

    def __init__(self, message: str, line_no: int | None = None):
        self.line_no = line_no
        if line_no is not None:
            message = f"line {line_no}: {message}"
        super().__init__(message)


class EmptyInputError(ValueError):
    """The input contained no contact events at all."""


class ContactEvent(NamedTuple):
    """One undirected contact at a discrete step, stored with ``u < v``."""

    t: int
    u: int
    v: int


@dataclass(frozen=True)
class TemporalGraph:
    """Immutable event table over a dense node range.

    ``events`` has shape ``(m, 3)`` with int64 rows ``(t, u, v)``, ``u < v``,
    unique and sorted lexicographically.  ``horizon`` counts steps, so valid
    steps are ``0 .. horizon-1``.  ``resolution`` is the wall-clock seconds
    per step when the graph came from timestamped data, else ``None``.
    """

    n_nodes: int
    events: np.ndarray
    horizon: int
    resolution: int | None = None

    def __post_init__(self):
        ev = self.events
        if ev.ndim != 2 or ev.shape[1] != 3:
            raise ValueError("events must be an (m, 3) array")
        if self.n_nodes < 0:
            raise ValueError("n_nodes must be non-negative")
        if self.horizon < 0:
            raise ValueError("horizon must be non-negative")
        if len(ev):
            if ev[:, 0].min() < 0 or ev[:, 0].max() >= self.horizon:
                raise ValueError("event step out of range [0, horizon)")
            if ev[:, 1:].min() < 0 or ev[:, 1:].max() >= self.n_nodes:
                raise ValueError("event node out of range [0, n_nodes)")
            if (ev[:, 1] >= ev[:, 2]).any():
                raise ValueError("events must satisfy u < v")

    @classmethod
    def from_events(
        cls,
        n_nodes: int,
        events: Iterable[tuple[int, int, int]],
        horizon: int | None = None,
        resolution: int | None = None,
    ) -> "TemporalGraph":
        """Build a graph from ``(t, u, v)`` triples in any order.

        Pairs are flipped to ``u < v``, duplicates collapse silently, and
        self-contacts are rejected.  ``horizon`` defaults to one past the
        latest event step (0 for an empty event set).
        """
        arr = np.asarray(list(events), dtype=np.int64)
        if arr.size == 0:
            arr = np.empty((0, 3), dtype=np.int64)
        if arr.ndim != 2 or arr.shape[1] != 3:
            raise ValueError("events must be (t, u, v) triples")
        if len(arr):
            if (arr[:, 1] == arr[:, 2]).any():
                raise ValueError("self-contact (u == v) is not allowed")
            lo = np.minimum(arr[:, 1], arr[:, 2])
            hi = np.maximum(arr[:, 1], arr[:, 2])
            arr = np.column_stack([arr[:, 0], lo, hi])
            arr = np.unique(arr, axis=0)  # also sorts by (t, u, v)
        if horizon is None:
            horizon = int(arr[:, 0].max()) + 1 if len(arr) else 0
        return cls(n_nodes=n_nodes, events=arr, horizon=horizon, resolution=resolution)

    @property
    def n_events(self) -> int:
        return len(self.events)

    def iter_events(self) -> Iterator[ContactEvent]:
        for t, u, v in self.events:
            yield ContactEvent(int(t), int(u), int(v))

    def events_by_step(self) -> Iterator[tuple[int, np.ndarray]]:
        """Yield ``(t, block)`` for each step that has events, in order."""
        ev = self.events
        if not len(ev):
            return
        steps, starts = np.unique(ev[:, 0], return_index=True)
        bounds = np.append(starts, len(ev))
        for i, t in enumerate(steps):
            yield int(t), ev[bounds[i]:bounds[i + 1]]

    def __eq__(self, other) -> bool:
        if not isinstance(other, TemporalGraph):
            return NotImplemented
        return (
            self.n_nodes == other.n_nodes
            and self.horizon == other.horizon
            and self.resolution == other.resolution
            and self.events.shape == other.events.shape
            and bool((self.events == other.events).all())
        )

    __hash__ = None  # mutable-array payload; identity hashing would mislead

    def __repr__(self) -> str:
        return (
            f"TemporalGraph(n_nodes={self.n_nodes}, n_events={self.n_events}, "
            f"horizon={self.horizon}, resolution={self.resolution})"
        )


@dataclass(frozen=True)
class StaticProjection:
    """Time-collapsed view: each pair that ever interacts becomes one edge.

    ``avg_degree`` is the standard ``2E / N``.  ``edges_per_node`` (``E / N``)
    is the convention used by the dataset summary tables; keep the two
    straight when comparing against published numbers.
    """

    n_nodes: int
    edges: np.ndarray  # (E, 2) int64, u < v, sorted, unique
    degrees: np.ndarray  # (N,) int64

    @property
    def n_edges(self) -> int:
        return len(self.edges)

    @property
    def avg_degree(self) -> float:
        if self.n_nodes == 0:
            return 0.0
        return 2.0 * self.n_edges / self.n_nodes

    @property
    def edges_per_node(self) -> float:
        if self.n_nodes == 0:
            return 0.0
        return self.n_edges / self.n_nodes

    @property
    def degree_second_moment(self) -> float:
        if self.n_nodes == 0:
            return 0.0
        return float(np.mean(self.degrees.astype(np.float64) ** 2))

    def edge_set(self) -> set[tuple[int, int]]:
        return {(int(u), int(v)) for u, v in self.edges}


def ingest_sociopatterns(
    source: str | os.PathLike | TextIO | Iterable[str],
    resolution: int = 20,
) -> TemporalGraph:
    """Read whitespace-delimited contact lines ``timestamp id_u id_v [...]``.

    ``source`` is a path, an open text stream, or any iterable of lines.
    Extra trailing columns are ignored, ``#`` lines and blank lines are
    skipped, timestamps are rebased to the earliest one and divided by
    ``resolution`` to obtain steps, and node labels are remapped to a dense
    ``[0, N)`` range (numeric sort when every label parses as an integer,
    lexicographic otherwise).  Duplicate events collapse; a self-contact is
    a :class:`ParseError`.  Input with no contact lines at all raises
    :class:`EmptyInputError`.
    """
    if resolution <= 0:
        raise ValueError("resolution must be a positive number of seconds")
    if isinstance(source, (str, os.PathLike)):
        with open(source, "r", encoding="utf-8") as fh:
            return _ingest_lines(fh, resolution)
    return _ingest_lines(source, resolution)


def _ingest_lines(fh: TextIO, resolution: int) -> TemporalGraph:
    timestamps: list[int] = []
    pairs: list[tuple[str, str]] = []
    for line_no, raw in enumerate(fh, start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        fields = line.split()
        if len(fields) < 3:
            raise ParseError(
                f"expected at least 3 fields, got {len(fields)}", line_no
            )
        try:
            ts = int(fields[0])
        except ValueError:
            raise ParseError(f"bad timestamp {fields[0]!r}", line_no) from None
        a, b = fields[1], fields[2]
        if a == b:
            raise ParseError(f"self-contact for node {a!r}", line_no)
        timestamps.append(ts)
        pairs.append((a, b))
    if not timestamps:
        raise EmptyInputError("input contains no contact events")

    labels = sorted({x for p in pairs for x in p}, key=_label_key)
    index = {lab: i for i, lab in enumerate(labels)}
    ts_arr = np.asarray(timestamps, dtype=np.int64)
    steps = (ts_arr - ts_arr.min()) // resolution
    triples = (
        (int(s), index[a], index[b]) for s, (a, b) in zip(steps, pairs)
    )
    return TemporalGraph.from_events(
        n_nodes=len(labels), events=triples, resolution=resolution
    )


def _label_key(label: str):
    try:
        return (0, int(label), "")
    except ValueError:
        return (1, 0, label)


_HEADER_MAGIC = "# tempodia-graph v1"
_RNG_NOTE = "pcg64"  # numpy default_rng bit generator; fixed for reproducibility


def write_graph(
    graph: TemporalGraph,
    dest: str | os.PathLike | TextIO,
    extra: dict[str, object] | None = None,
) -> None:
    """Write the canonical text form: a ``#`` header, then ``t u v`` lines.

    The header pins everything needed to reconstruct the graph exactly
    (node count, horizon, resolution) plus optional provenance key-values
    such as a generator configuration.  Output is byte-deterministic for a
    given graph and ``extra`` mapping.
    """
    if hasattr(dest, "write"):
        _write_lines(graph, dest, extra)
        return
    with open(dest, "w", encoding="utf-8", newline="\n") as fh:
        _write_lines(graph, fh, extra)


def _write_lines(graph: TemporalGraph, fh: TextIO, extra) -> None:
    res = "-" if graph.resolution is None else str(graph.resolution)
    fh.write(_HEADER_MAGIC + "\n")
    fh.write(
        f"# n_nodes={graph.n_nodes} horizon={graph.horizon} resolution={res}\n"
    )
    fh.write(f"# rng={_RNG_NOTE}\n")
    for key in sorted(extra or {}):
        fh.write(f"# {key}={extra[key]}\n")
    for t, u, v in graph.events:
        fh.write(f"{t} {u} {v}\n")


def read_graph(source: str | os.PathLike | TextIO) -> TemporalGraph:
    """Read a graph written by :func:`write_graph`.

    The header is authoritative: isolated nodes and trailing event-free
    steps survive a round trip, which plain contact ingestion cannot
    guarantee.
    """
    if hasattr(source, "read"):
        return _read_lines(source)
    with open(source, "r", encoding="utf-8") as fh:
        return _read_lines(fh)


def _read_lines(fh: TextIO) -> TemporalGraph:
    first = fh.readline().rstrip("\n")
    if first != _HEADER_MAGIC:
        raise ParseError(f"not a tempodia graph file (got {first!r})", 1)
    meta: dict[str, str] = {}
    triples: list[tuple[int, int, int]] = []
    for line_no, raw in enumerate(fh, start=2):
        line = raw.strip()
        if not line:
            continue
        if line.startswith("#"):
            for token in line[1:].split():
                if "=" in token:
                    key, _, value = token.partition("=")
                    meta.setdefault(key, value)
            continue
        fields = line.split()
        if len(fields) != 3:
            raise ParseError("expected 't u v'", line_no)
        try:
            triples.append((int(fields[0]), int(fields[1]), int(fields[2])))
        except ValueError:
            raise ParseError(f"bad event line {line!r}", line_no) from None
    for key in ("n_nodes", "horizon"):
        if key not in meta:
            raise ParseError(f"header is missing {key}")
    resolution = None if meta.get("resolution", "-") == "-" else int(meta["resolution"])
    return TemporalGraph.from_events(
        n_nodes=int(meta["n_nodes"]),
        events=triples,
        horizon=int(meta["horizon"]),
        resolution=resolution,
    )


def remove_nodes(
    graph: TemporalGraph, fraction: float, seed: int
) -> tuple[TemporalGraph, np.ndarray]:
    """Remove a uniform random ``floor(fraction * N)`` of the nodes.

    Removal is nested in ``fraction`` for a fixed seed: the removed set at a
    larger fraction contains the removed set at any smaller one, so sweeps
    over fractions shrink monotonically.  Survivors are renumbered densely
    in ascending old-id order.  Returns the reduced graph and an ``(N,)``
    mapping array, ``mapping[old] = new`` or ``-1`` if removed; the reduced
    graph keeps the original horizon and resolution.
    """
    if not 0.0 <= fraction < 1.0:
        raise ValueError("fraction must lie in [0, 1)")
    n = graph.n_nodes
    rng = np.random.default_rng(seed)
    order = rng.permutation(n)
    n_removed = int(fraction * n)
    removed = order[:n_removed]
    keep_mask = np.ones(n, dtype=bool)
    keep_mask[removed] = False
    mapping = np.full(n, -1, dtype=np.int64)
    mapping[keep_mask] = np.arange(int(keep_mask.sum()), dtype=np.int64)

    ev = graph.events
    if len(ev):
        alive = keep_mask[ev[:, 1]] & keep_mask[ev[:, 2]]
        ev = ev[alive]
        ev = np.column_stack([ev[:, 0], mapping[ev[:, 1]], mapping[ev[:, 2]]])
    reduced = TemporalGraph(
        n_nodes=int(keep_mask.sum()),
        events=np.ascontiguousarray(ev),
        horizon=graph.horizon,
        resolution=graph.resolution,
    )
    return reduced, mapping


def static_projection(graph: TemporalGraph) -> StaticProjection:
    """Collapse time: one undirected edge per pair that ever interacts."""
    if len(graph.events):
        pairs = np.unique(graph.events[:, 1:], axis=0)
    else:
        pairs = np.empty((0, 2), dtype=np.int64)
    degrees = np.zeros(graph.n_nodes, dtype=np.int64)
    if len(pairs):
        degrees += np.bincount(pairs[:, 0], minlength=graph.n_nodes)
        degrees += np.bincount(pairs[:, 1], minlength=graph.n_nodes)
    return StaticProjection(n_nodes=graph.n_nodes, edges=pairs, degrees=degrees)


def contact_durations(graph: TemporalGraph) -> dict[tuple[int, int], list[int]]:
    """Lengths of maximal runs of consecutive active steps, per pair.

    A pair active at steps ``{2, 3, 4, 9}`` has durations ``[3, 1]``.
    Every pair with at least one event appears in the result.
    """
    runs, _ = _pair_runs(graph)
    return runs


def contact_gaps(graph: TemporalGraph) -> dict[tuple[int, int], list[int]]:
    """Idle steps between consecutive runs of the same pair.

    For runs ending at ``e`` and next starting at ``s`` the gap is
    ``s - e - 1`` (a pair active at 4 and again at 9 has a gap of 4).
    Pairs with a single run map to an empty list.
    """
    _, gaps = _pair_runs(graph)
    return gaps


def _pair_runs(graph):
    ev = graph.events
    durations: dict[tuple[int, int], list[int]] = {}
    gaps: dict[tuple[int, int], list[int]] = {}
    if not len(ev):
        return durations, gaps
    # regroup by pair, then by step; events are unique so runs are clean
    order = np.lexsort((ev[:, 0], ev[:, 2], ev[:, 1]))
    t = ev[order, 0]
    u = ev[order, 1]
    v = ev[order, 2]
    new_pair = np.empty(len(ev), dtype=bool)
    new_pair[0] = True
    new_pair[1:] = (u[1:] != u[:-1]) | (v[1:] != v[:-1])
    new_run = new_pair.copy()
    new_run[1:] |= t[1:] != t[:-1] + 1
    run_starts = np.flatnonzero(new_run)
    run_ends = np.append(run_starts[1:], len(ev)) - 1
    for s, e in zip(run_starts, run_ends):
        pair = (int(u[s]), int(v[s]))
        durations.setdefault(pair, []).append(int(t[e] - t[s] + 1))
        gaps.setdefault(pair, [])
        if not new_pair[s]:  # run continues an earlier run of the same pair
            prev_end = t[s - 1]
            gaps[pair].append(int(t[s] - prev_end - 1))
    return durations, gaps
