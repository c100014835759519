"""Closed-form and recurrence estimates for flow coverage and diameters.

The reachable-set model works on four parameters: network size ``N``, mean
static degree ``<k>``, the number of active steps per edge ``zeta``, and the
step horizon ``T``.  An edge is active at a uniformly chosen ``zeta`` of the
``T`` steps, so the per-step activation probability is ``p = zeta / T`` and
the expected number of neighbours reachable in one step, the effective
degree, is ``<k> * zeta / T``.

The layered recurrence estimates how many new nodes a flow touches at each
step: every node of the previous layer contributes an effective-degree worth
of links into the untouched pool, discounted by a quadratic overlap term for
links that land on nodes already claimed within the same layer.  Negative
contributions clamp to zero.  The recurrence can stall below full coverage
(the overlap discount caps per-step growth), in which case the curve carries
no saturation step and says so through ``flags`` instead of raising.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class ModelParams:
    """Parameters of the reachable-set model.

    ``active_time`` is the per-edge count of active steps (``zeta``) and
    must not exceed ``horizon``; both are in step units.
    """

    n_nodes: int
    avg_degree: float
    active_time: float
    horizon: float

    def __post_init__(self):
        if self.n_nodes < 1:
            raise ValueError("n_nodes must be at least 1")
        if self.avg_degree < 0:
            raise ValueError("avg_degree must be non-negative")
        if self.horizon <= 0:
            raise ValueError("horizon must be positive")
        if not 0 < self.active_time <= self.horizon:
            raise ValueError("active_time must lie in (0, horizon]")

    @property
    def activation_probability(self) -> float:
        return self.active_time / self.horizon

    @property
    def effective_degree(self) -> float:
        return self.avg_degree * self.active_time / self.horizon


@dataclass(frozen=True)
class GrowthCurve:
    """Modelled growth of the reached set, excluding the source.

    ``per_step_cumulative[t]`` is the expected number of nodes reached by
    step ``t`` beyond the source (index 0 is 0), clamped to ``N``;
    ``layer_sizes[t]`` is the increment contributed at step ``t``.  The
    source is accounted for inside the recurrence's untouched-pool term, not
    in the arrays.

    ``saturation_step`` uses a completion convention: it is one past the
    first step whose cumulative (source included) covers the network, so a
    flow that touches everyone in a single step saturates at 2.  It is
    ``None`` when the recurrence stalls or runs out of steps, with the
    reason recorded in ``flags`` (``stalled``, ``step-limit``); other flags
    are ``saturated`` and ``clamped-term`` (an overlap-discounted
    contribution went negative and was clamped to zero).
    """

    per_step_cumulative: np.ndarray
    layer_sizes: np.ndarray
    saturation_step: int | None
    flags: tuple[str, ...]


def recurrence_curve(params: ModelParams, max_steps: int | None = None) -> GrowthCurve:
    """Iterate the layered growth recurrence.

    The first layer is the effective degree (clamped to the pool of ``N-1``
    other nodes).  Each later layer sums, over the ``round(previous layer)``
    spreading nodes indexed ``l = 1..L``, the contribution
    ``khat * (pool - khat * l * (l+1) / 2) / N`` with ``pool`` the count of
    still-untouched nodes, clamping negative summands to zero.  Iteration
    stops at coverage (cumulative including source reaches ``N``), on a
    stalled layer (rounds to zero), or at ``max_steps``.
    """
    if max_steps is None:
        max_steps = max(int(4 * params.horizon) + 16, 64)
    if max_steps < 1:
        raise ValueError("max_steps must be at least 1")
    n = params.n_nodes
    khat = params.effective_degree
    flags: set[str] = set()

    layer1 = min(khat, float(max(n - 1, 0)))
    layers = [0.0, layer1]
    cum = layer1
    cumulative = [0.0, min(cum, float(n))]
    covered_at: int | None = 1 if 1 + cum >= n else None

    t = 1
    while covered_at is None and t < max_steps:
        t += 1
        spreaders = int(round(layers[-1]))
        if spreaders <= 0:
            flags.add("stalled")
            break
        pool = n - 1 - cum
        new = 0.0
        for l in range(1, spreaders + 1):
            term = khat * (pool - khat * l * (l + 1) / 2.0) / n
            if term < 0:
                flags.add("clamped-term")
                term = 0.0
            new += term
        layers.append(new)
        cum += new
        cumulative.append(min(cum, float(n)))
        if 1 + cum >= n:
            covered_at = t

    if covered_at is not None:
        flags.add("saturated")
        saturation_step = covered_at + 1
    else:
        saturation_step = None
        if "stalled" not in flags:
            flags.add("step-limit")
    return GrowthCurve(
        per_step_cumulative=np.asarray(cumulative, dtype=np.float64),
        layer_sizes=np.asarray(layers, dtype=np.float64),
        saturation_step=saturation_step,
        flags=tuple(sorted(flags)),
    )


def tau_estimate(params: ModelParams) -> float:
    """Steps until one third of the network is reached, from slow growth.

    Treats coverage as compounding at rate ``1 + khat / N`` per step, which
    gives ``ln(N / 3) / ln(1 + khat / N)``.  Clamped below at 0 (a network
    of up to three nodes is one-third covered by the source alone).
    """
    khat = params.effective_degree
    if khat <= 0:
        raise ValueError("tau estimate is undefined for zero effective degree")
    value = math.log(params.n_nodes / 3.0) / math.log1p(khat / params.n_nodes)
    return max(value, 0.0)


def effective_diameter_estimate(params: ModelParams, form: str = "scaled") -> float:
    """Steps until the whole network is reached, from compounding growth.

    ``scaled`` (the headline form) compounds at ``1 + p * khat / N`` with
    ``p`` the activation probability; ``unscaled`` omits that factor and
    compounds at ``1 + khat / N``, mirroring :func:`tau_estimate`'s rate.
    """
    if form not in ("scaled", "unscaled"):
        raise ValueError(f"unknown form {form!r}")
    khat = params.effective_degree
    rate = params.activation_probability * khat if form == "scaled" else khat
    if rate <= 0:
        raise ValueError("estimate is undefined for zero growth rate")
    return math.log(params.n_nodes) / math.log1p(rate / params.n_nodes)


def log_growth_estimate(params: ModelParams) -> float:
    """Logarithmic full-coverage estimate ``(T / (zeta * khat)) * ln N``."""
    khat = params.effective_degree
    if khat <= 0:
        raise ValueError("estimate is undefined for zero effective degree")
    return params.horizon / (params.active_time * khat) * math.log(params.n_nodes)


def logistic_peak_estimate(
    n_nodes: int,
    contact_rate: float,
    initial: float = 1.0,
    dt: float = 1e-3,
) -> float:
    """Time of fastest growth for logistic spreading ``di/dt = k (N - i) i``.

    Integrates with forward Euler from ``i(0) = initial`` and returns the
    time at which the rate peaks (the curve's inflection, ``i = N / 2``).
    Raises when the integration leaves ``[0, N]``, which signals a ``dt``
    too coarse for the chosen rate.
    """
    n = float(n_nodes)
    if n < 1:
        raise ValueError("n_nodes must be at least 1")
    if not 0 < initial < n:
        raise ValueError("initial must lie strictly between 0 and n_nodes")
    if contact_rate <= 0 or dt <= 0:
        raise ValueError("contact_rate and dt must be positive")

    # generous budget: saturation takes ~(ln((N-i0)/i0) + 60) / (k N) time
    span = (math.log((n - initial) / initial) + 60.0) / (contact_rate * n)
    max_iter = int(span / dt) + 1000

    i = initial
    t = 0.0
    best_rate = -math.inf
    best_t = 0.0
    for _ in range(max_iter):
        rate = contact_rate * (n - i) * i
        if rate > best_rate:
            best_rate = rate
            best_t = t
        i += dt * rate
        t += dt
        if not math.isfinite(i) or i < 0 or i > n * (1 + 1e-9):
            raise ValueError("integration left [0, N]; decrease dt")
        if i >= n * (1 - 1e-9):
            break
    return best_t
