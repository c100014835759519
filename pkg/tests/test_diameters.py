"""Per-source and network-level diameter metrics."""

import math

import numpy as np
import pytest

from tempodia import (
    TemporalGraph,
    network_diameters,
    propagate,
    propagate_all,
    source_diameters,
)
from tempodia.diameters import AGGREGATIONS

from helpers import (
    WALKTHROUGH_SOURCE,
    random_small_graph,
    walkthrough_graph,
)


def _sd(graph, source):
    return source_diameters(propagate(graph, source))


def _nd(graph, aggregation="default"):
    return network_diameters(propagate_all(graph), aggregation=aggregation)


class TestSourceDiameters:
    def test_walkthrough_values(self):
        d = _sd(walkthrough_graph(), WALKTHROUGH_SOURCE)
        assert d.effective == 6
        assert d.peak == 2
        assert d.tau == 2

    def test_peak_breaks_ties_earliest(self):
        # one new arrival at step 1 and one at step 2: earliest max wins
        g = TemporalGraph.from_events(3, [(1, 0, 1), (2, 0, 2)])
        d = _sd(g, 0)
        assert d.peak == 1

    def test_nothing_reached(self):
        # n=4 -> threshold 2; the lone source misses it, so tau is absent
        g = TemporalGraph.from_events(4, [], horizon=3)
        d = _sd(g, 0)
        assert d.effective == 0
        assert d.peak == 0
        assert d.tau is None

    def test_isolated_source_larger_graph(self):
        g = TemporalGraph.from_events(6, [(1, 1, 2)], horizon=3)
        d = _sd(g, 0)
        assert d.effective == 0 and d.peak == 0 and d.tau is None

    def test_tau_threshold_small_n(self):
        # n <= 3: the source alone meets ceil(n/3), so tau is 0
        for n in (1, 2, 3):
            g = TemporalGraph.from_events(n, [], horizon=2)
            assert _sd(g, 0).tau == 0

    def test_tau_threshold_boundary(self):
        # n=4 -> threshold ceil(4/3)=2: source plus one more node
        g = TemporalGraph.from_events(4, [(2, 0, 1)])
        assert _sd(g, 0).tau == 2

    def test_tau_unattained_is_none(self):
        # n=7 -> threshold 3, but only 2 nodes ever reached
        g = TemporalGraph.from_events(7, [(1, 0, 1)], horizon=4)
        d = _sd(g, 0)
        assert d.effective == 1
        assert d.tau is None

    def test_tau_counts_cumulatively(self):
        # n=9 -> threshold 3: source + 2 arrivals; second arrival lands at 4
        g = TemporalGraph.from_events(9, [(1, 0, 1), (4, 1, 2), (6, 2, 3)])
        assert _sd(g, 0).tau == 4


class TestNetworkDiameters:
    def test_walkthrough_default(self):
        nd = _nd(walkthrough_graph())
        assert (nd.effective_net, nd.peak_net, nd.tau_net) == (6.0, 2.0, 2.0)
        assert nd.aggregation == "default"
        assert len(nd.per_source) == 9

    def test_aggregation_modes(self):
        g = walkthrough_graph()
        eff = [_sd(g, s).effective for s in range(g.n_nodes)]
        assert _nd(g, "max").effective_net == max(eff)
        assert _nd(g, "min").effective_net == min(eff)
        assert _nd(g, "mean").effective_net == pytest.approx(sum(eff) / len(eff))

    def test_unknown_aggregation(self):
        with pytest.raises(ValueError):
            _nd(walkthrough_graph(), "median")

    def test_no_traces(self):
        with pytest.raises(ValueError):
            network_diameters([])

    def test_tau_none_sources_excluded_from_min(self):
        # source 0 attains tau; isolated sources do not and must not poison it
        g = TemporalGraph.from_events(4, [(2, 0, 1)])
        nd = _nd(g)
        assert nd.tau_net == 2.0

    def test_tau_unattained_everywhere(self):
        g = TemporalGraph.from_events(7, [(1, 0, 1)], horizon=4)
        nd = _nd(g)
        assert nd.tau_net is None
        assert nd.effective_net == 1.0
        # fallback: peak of the slowest-extent source (effective == 1)
        assert nd.peak_net == 1.0

    def test_permutation_invariance(self):
        rng = np.random.default_rng(47)
        for _ in range(15):
            g = random_small_graph(rng)
            if g.n_nodes < 2:
                continue
            perm = rng.permutation(g.n_nodes)
            relabeled = TemporalGraph.from_events(
                g.n_nodes,
                [(int(t), int(perm[u]), int(perm[v])) for t, u, v in g.events],
                horizon=g.horizon,
            )
            for agg in AGGREGATIONS:
                a = _nd(g, agg)
                b = _nd(relabeled, agg)
                for field in ("effective_net", "peak_net", "tau_net"):
                    x, y = getattr(a, field), getattr(b, field)
                    if x is None or y is None:
                        assert x is y
                    else:
                        assert math.isclose(x, y), (agg, field, x, y)


class TestMetricProperties:
    def test_bounds_and_types(self):
        rng = np.random.default_rng(53)
        for _ in range(25):
            g = random_small_graph(rng)
            for s in range(g.n_nodes):
                d = _sd(g, s)
                assert 0 <= d.effective <= g.horizon
                assert 0 <= d.peak <= d.effective or d.effective == 0
                if d.tau is not None:
                    assert 0 <= d.tau <= d.effective or d.tau == 0

    def test_adding_events_never_delays_prior_arrivals(self):
        # extra contacts can change every aggregate metric, but any node
        # already reached keeps an arrival at least as early
        rng = np.random.default_rng(59)
        for _ in range(20):
            g = random_small_graph(rng)
            extra_t = int(rng.integers(max(g.horizon, 1)))
            u, v = (int(x) for x in rng.choice(g.n_nodes, size=2, replace=False))
            augmented = TemporalGraph.from_events(
                g.n_nodes,
                [tuple(e) for e in g.events] + [(extra_t, u, v)],
                horizon=g.horizon,
            )
            source = int(rng.integers(g.n_nodes))
            base = propagate(g, source)
            more = propagate(augmented, source)
            for node, step in base.arrivals.items():
                assert 0 <= more.arrivals[node] <= step
            # tau, when attained before, stays attained and never later
            bd, md = source_diameters(base), source_diameters(more)
            if bd.tau is not None:
                assert md.tau is not None and md.tau <= bd.tau
