"""Random temporal graphs with a prescribed degree distribution.

Generation is two-stage.  First a static graph is drawn with a
configuration-model pairing: integer degrees are sampled from the chosen
family, clamped to ``[1, N-1]``, parity-fixed, and the resulting stubs are
paired uniformly, re-shuffling clashing stubs (self-loops, duplicate edges)
up to a budget before re-drawing the whole pairing.  Second, each static
edge independently becomes active at exactly ``active_time`` distinct steps
chosen uniformly from ``[0, horizon)``.

All randomness flows through one generator seeded from the config, with a
fixed call order (degree draw, parity fix, pairings, per-edge step choices
in sorted edge order), so a config maps to exactly one output graph on any
platform.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping

import numpy as np

from .temporal_graph import TemporalGraph

FAMILIES = ("normal", "pareto", "poisson")

_REWIRE_ROUNDS = 200
_REDRAW_ROUNDS = 50


class GenerationError(RuntimeError):
    """The stub pairing could not realise the degree sequence in budget."""


@dataclass(frozen=True)
class GeneratorConfig:
    """Recipe for one random temporal graph.

    ``dist_params`` overrides the family defaults: ``mean`` / ``stddev``
    (normal, defaulting to the target degree and a quarter of it),
    ``shape`` / ``scale`` (Pareto, defaulting to shape 2.5 with the scale
    set so the mean hits the target), and ``rate`` (Poisson, defaulting to
    the target).
    """

    n_nodes: int
    distribution: str
    target_avg_degree: float
    active_time: int
    horizon: int
    seed: int
    dist_params: Mapping[str, float] = field(default_factory=dict)

    def __post_init__(self):
        if self.n_nodes < 2:
            raise ValueError("n_nodes must be at least 2")
        if self.distribution not in FAMILIES:
            raise ValueError(
                f"unknown distribution {self.distribution!r}; pick one of {FAMILIES}"
            )
        if self.target_avg_degree <= 0:
            raise ValueError("target_avg_degree must be positive")
        if self.horizon < 1:
            raise ValueError("horizon must be at least 1")
        if not 1 <= self.active_time <= self.horizon:
            raise ValueError("active_time must lie in [1, horizon]")
        if self.seed < 0:
            raise ValueError("seed must be non-negative")
        resolved_distribution(self)  # validate overrides eagerly

    def as_header(self) -> dict[str, object]:
        """Key-value echo of the config for serialization headers."""
        fields = {
            "dist": self.distribution,
            "target_avg_degree": self.target_avg_degree,
            "active_time": self.active_time,
            "seed": self.seed,
        }
        for key in sorted(self.dist_params):
            fields[f"dist_{key}"] = self.dist_params[key]
        return fields


def resolved_distribution(config: GeneratorConfig) -> dict[str, float | str]:
    """Concrete family parameters after defaults and overrides."""
    params = dict(config.dist_params)
    k = config.target_avg_degree
    if config.distribution == "normal":
        out = {
            "family": "normal",
            "mean": float(params.pop("mean", k)),
            "stddev": float(params.pop("stddev", k / 4.0)),
        }
        if out["stddev"] < 0:
            raise ValueError("stddev must be non-negative")
    elif config.distribution == "pareto":
        shape = float(params.pop("shape", 2.5))
        if shape <= 1:
            raise ValueError("pareto shape must exceed 1 for a finite mean")
        scale = float(params.pop("scale", k * (shape - 1.0) / shape))
        if scale <= 0:
            raise ValueError("pareto scale must be positive")
        out = {"family": "pareto", "shape": shape, "scale": scale}
    else:
        out = {"family": "poisson", "rate": float(params.pop("rate", k))}
        if out["rate"] <= 0:
            raise ValueError("poisson rate must be positive")
    if params:
        raise ValueError(
            f"unknown {config.distribution} parameter(s): {sorted(params)}"
        )
    return out


def _draw_degrees(config: GeneratorConfig, rng: np.random.Generator) -> np.ndarray:
    dist = resolved_distribution(config)
    n = config.n_nodes
    if dist["family"] == "normal":
        raw = rng.normal(dist["mean"], dist["stddev"], size=n)
    elif dist["family"] == "pareto":
        # Pareto I with minimum `scale`: numpy's pareto() is the Lomax tail
        raw = dist["scale"] * (1.0 + rng.pareto(dist["shape"], size=n))
    else:
        raw = rng.poisson(dist["rate"], size=n)
    degrees = np.rint(raw).astype(np.int64)
    np.clip(degrees, 1, n - 1, out=degrees)
    if degrees.sum() % 2:
        eligible = np.flatnonzero(degrees < n - 1)
        degrees[rng.choice(eligible)] += 1
    return degrees


def _pair_stubs(degrees: np.ndarray, rng: np.random.Generator) -> np.ndarray:
    """Uniform configuration-model pairing into a simple graph.

    Clashing stubs are re-shuffled among themselves; if that never clears,
    the whole pairing is re-drawn.  Returns a sorted ``(E, 2)`` edge array.
    """
    n = len(degrees)
    stubs = np.repeat(np.arange(n, dtype=np.int64), degrees)
    for _ in range(_REDRAW_ROUNDS):
        rng.shuffle(stubs)
        edges: set[tuple[int, int]] = set()
        pending = stubs
        for _ in range(_REWIRE_ROUNDS):
            clashes: list[int] = []
            for i in range(0, len(pending), 2):
                a, b = int(pending[i]), int(pending[i + 1])
                if a > b:
                    a, b = b, a
                if a == b or (a, b) in edges:
                    clashes.append(int(pending[i]))
                    clashes.append(int(pending[i + 1]))
                else:
                    edges.add((a, b))
            if not clashes:
                out = np.asarray(sorted(edges), dtype=np.int64)
                return out.reshape(-1, 2)
            pending = np.asarray(clashes, dtype=np.int64)
            rng.shuffle(pending)
    raise GenerationError(
        "could not pair the degree sequence into a simple graph; "
        "the sequence is likely infeasible or extremely dense"
    )


def generate(config: GeneratorConfig) -> TemporalGraph:
    """Draw the temporal graph described by ``config``.

    Each static edge is active at exactly ``config.active_time`` distinct
    steps, uniform without replacement over ``[0, horizon)``.  The realized
    static mean degree tracks the target up to rounding, clamping, and
    sampling noise.
    """
    rng = np.random.default_rng(config.seed)
    degrees = _draw_degrees(config, rng)
    edges = _pair_stubs(degrees, rng)
    zeta, horizon = config.active_time, config.horizon
    if zeta == horizon:
        steps = np.tile(np.arange(horizon, dtype=np.int64), len(edges))
    else:
        per_edge = [rng.choice(horizon, size=zeta, replace=False) for _ in edges]
        steps = np.concatenate(per_edge) if per_edge else np.empty(0, dtype=np.int64)
    events = np.column_stack(
        [
            steps,
            np.repeat(edges[:, 0], zeta),
            np.repeat(edges[:, 1], zeta),
        ]
    )
    events = events[np.lexsort((events[:, 2], events[:, 1], events[:, 0]))]
    return TemporalGraph(
        n_nodes=config.n_nodes,
        events=np.ascontiguousarray(events),
        horizon=horizon,
        resolution=None,
    )
