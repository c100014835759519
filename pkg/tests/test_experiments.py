"""Sweeps, removal studies, correlations, histograms, and report writers."""

import json
import math

import numpy as np
import pytest

from tempodia import (
    GeneratorConfig,
    TemporalGraph,
    correlations,
    degree_sweep,
    distribution_report,
    error_metrics,
    generate,
    log2_bins,
    network_diameters,
    propagate_all,
    removal_sweep,
    size_sweep,
)
from tempodia.experiments import (
    CorrelationMatrix,
    RemovalRow,
    RemovalSweep,
    SweepPoint,
    SweepResult,
    write_bins_report,
    write_correlation_report,
    write_removal_report,
    write_sweep_report,
)
from tempodia.temporal_graph import static_projection

BASE = GeneratorConfig(
    n_nodes=40,
    distribution="normal",
    target_avg_degree=6.0,
    active_time=4,
    horizon=8,
    seed=1,
)


def _floats_equal(a, b):
    if a is None or b is None:
        return a is b
    if math.isnan(a) or math.isnan(b):
        return math.isnan(a) and math.isnan(b)
    return a == b


def assert_sweeps_equal(a: SweepResult, b: SweepResult):
    assert a.axis == b.axis and a.repeats == b.repeats and a.flags == b.flags
    assert len(a.points) == len(b.points)
    for p, q in zip(a.points, b.points):
        assert p.axis_value == q.axis_value
        assert p.sim_values == q.sim_values
        for field in ("sim_mean", "sim_std", "pred_recurrence", "pred_closed_form"):
            assert _floats_equal(getattr(p, field), getattr(q, field)), field
    for field in ("rmse", "mse", "mae"):
        assert _floats_equal(getattr(a, field), getattr(b, field)), field


class TestErrorMetrics:
    def test_hand_case(self):
        rmse, mse, mae = error_metrics([1.0, 2.0, 3.0], [2.0, 2.0, 5.0])
        assert mse == pytest.approx(5.0 / 3.0)
        assert rmse == pytest.approx(math.sqrt(5.0 / 3.0))
        assert mae == pytest.approx(1.0)

    def test_identities(self):
        rng = np.random.default_rng(61)
        for _ in range(20):
            n = int(rng.integers(1, 30))
            obs = rng.normal(size=n)
            pred = rng.normal(size=n)
            rmse, mse, mae = error_metrics(obs, pred)
            assert abs(rmse**2 - mse) <= 1e-9
            assert mae <= rmse + 1e-12
            assert rmse <= math.sqrt(n) * mae + 1e-12

    def test_nonfinite_pairs_dropped(self):
        rmse, mse, mae = error_metrics(
            [1.0, math.nan, 3.0, 4.0], [1.5, 2.0, math.inf, 4.0]
        )
        # only the first and last pairs survive: diffs -0.5 and 0
        assert mse == pytest.approx(0.125)
        assert mae == pytest.approx(0.25)
        assert rmse == pytest.approx(math.sqrt(0.125))

    def test_all_pairs_dropped(self):
        rmse, mse, mae = error_metrics([math.nan], [1.0])
        assert math.isnan(rmse) and math.isnan(mse) and math.isnan(mae)

    def test_shape_mismatch(self):
        with pytest.raises(ValueError):
            error_metrics([1.0, 2.0], [1.0])


class TestSweeps:
    def test_degree_sweep_structure(self):
        result = degree_sweep(BASE, [4.0, 8.0], repeats=2)
        assert result.axis == "avg_degree"
        assert [p.axis_value for p in result.points] == [4.0, 8.0]
        for p in result.points:
            assert len(p.sim_values) == 2
            assert p.sim_mean == pytest.approx(np.mean(p.sim_values))
            assert p.sim_std == pytest.approx(np.std(p.sim_values))

    def test_size_sweep_structure(self):
        result = size_sweep(BASE, [30, 40], repeats=2)
        assert result.axis == "n_nodes"
        assert [p.axis_value for p in result.points] == [30.0, 40.0]

    def test_repeat_seeds_differ(self):
        result = degree_sweep(BASE, [6.0], repeats=4)
        values = result.points[0].sim_values
        assert len(set(values)) > 1  # distinct repeats saw distinct graphs

    def test_deterministic_across_runs(self):
        assert_sweeps_equal(
            degree_sweep(BASE, [4.0, 8.0], repeats=2),
            degree_sweep(BASE, [4.0, 8.0], repeats=2),
        )

    def test_jobs_do_not_change_results(self):
        assert_sweeps_equal(
            degree_sweep(BASE, [4.0, 8.0], repeats=2, jobs=1),
            degree_sweep(BASE, [4.0, 8.0], repeats=2, jobs=2),
        )

    def test_stall_flags(self):
        # at these parameters the growth recurrence stalls below coverage:
        # every recurrence prediction is NaN and the flags must say so
        result = degree_sweep(BASE, [6.0], repeats=1)
        assert math.isnan(result.points[0].pred_recurrence)
        assert "model-stalled" in result.flags
        assert "no-model-saturation" in result.flags
        assert math.isnan(result.rmse)

    def test_closed_form_always_present_here(self):
        result = degree_sweep(BASE, [4.0, 8.0], repeats=1)
        for p in result.points:
            assert math.isfinite(p.pred_closed_form)

    def test_validation(self):
        with pytest.raises(ValueError):
            degree_sweep(BASE, [], repeats=2)
        with pytest.raises(ValueError):
            degree_sweep(BASE, [4.0], repeats=0)
        with pytest.raises(ValueError):
            degree_sweep(BASE, [4.0], repeats=1, jobs=0)
        with pytest.raises(ValueError):
            degree_sweep(BASE, [0.0], repeats=1)
        with pytest.raises(ValueError):
            size_sweep(BASE, [1], repeats=1)


class TestRemovalSweep:
    def test_zero_fraction_matches_intact_graph(self):
        graph = generate(BASE)
        sweep = removal_sweep(graph, [0.0], seed=5)
        row = sweep.rows[0]
        proj = static_projection(graph)
        report = network_diameters(propagate_all(graph))
        assert row.n_nodes == graph.n_nodes
        assert row.n_edges == proj.n_edges
        assert row.edges_per_node == pytest.approx(proj.edges_per_node)
        assert row.effective == report.effective_net
        assert row.tau == report.tau_net
        assert row.peak == report.peak_net
        assert row.flags == ()

    def test_counts_non_increasing_along_sorted_fractions(self):
        graph = generate(BASE)
        fractions = [0.0, 0.1, 0.2, 0.4, 0.6, 0.9]
        sweep = removal_sweep(graph, fractions, seed=5)
        ns = [r.n_nodes for r in sweep.rows]
        es = [r.n_edges for r in sweep.rows]
        assert ns == sorted(ns, reverse=True)
        assert es == sorted(es, reverse=True)

    def test_rows_keep_given_order(self):
        graph = generate(BASE)
        sweep = removal_sweep(graph, [0.5, 0.0], seed=5)
        assert [r.fraction for r in sweep.rows] == [0.5, 0.0]

    def test_emptied_graph(self):
        # removal keeps at least one node (floor of fraction < 1), so the
        # emptied row only appears when the input itself has no nodes
        graph = TemporalGraph.from_events(0, [], horizon=3)
        sweep = removal_sweep(graph, [0.0, 0.5], seed=5)
        for row in sweep.rows:
            assert row.flags == ("emptied",)
            assert row.n_nodes == 0 and row.n_edges == 0
            assert row.effective is None and row.tau is None and row.peak is None

    def test_fraction_one_rejected(self):
        graph = generate(BASE)
        with pytest.raises(ValueError):
            removal_sweep(graph, [1.0], seed=5)

    def test_no_events_flag(self):
        graph = TemporalGraph.from_events(5, [(1, 0, 1)], horizon=3)
        sweep = removal_sweep(graph, [0.8], seed=5)
        row = sweep.rows[0]
        assert row.n_nodes == 1
        assert row.flags == ("no-events",)
        assert row.effective == 0.0


class TestCorrelations:
    def test_needs_three_rows(self):
        rows = [
            RemovalRow(0.0, 10, 20, 2.0, 5.0, 3.0, 2.0, ()),
            RemovalRow(0.5, 5, 8, 1.6, 4.0, 2.0, 1.0, ()),
        ]
        with pytest.raises(ValueError):
            correlations(rows)

    def test_perfect_correlations(self):
        rows = [
            RemovalRow(0.0, 30, 60, 2.0, 6.0, 2.0, 1.0, ()),
            RemovalRow(0.2, 20, 40, 2.0, 4.0, 4.0, 2.0, ()),
            RemovalRow(0.4, 10, 20, 2.0, 2.0, 6.0, 3.0, ()),
        ]
        corr = correlations(rows)
        names = corr.variables
        m = corr.matrix
        i_n, i_eff, i_tau = names.index("N"), names.index("eff_d"), names.index("tau_d")
        assert m[i_n, i_eff] == pytest.approx(1.0)
        assert m[i_n, i_tau] == pytest.approx(-1.0)
        assert np.allclose(m, m.T, equal_nan=True)
        assert np.all(np.diag(m) == 1.0)

    def test_constant_column_undefined(self):
        rows = [
            RemovalRow(0.0, 30, 60, 2.0, 6.0, 2.0, 1.0, ()),
            RemovalRow(0.2, 20, 40, 2.0, 4.0, 4.0, 2.0, ()),
            RemovalRow(0.4, 10, 20, 2.0, 2.0, 6.0, 3.0, ()),
        ]
        corr = correlations(rows)
        i = corr.variables.index("k_avg")
        off_diag = [corr.matrix[i, j] for j in range(len(corr.variables)) if j != i]
        assert all(math.isnan(x) for x in off_diag)
        assert ("N", "k_avg") in corr.undefined
        assert corr.matrix[i, i] == 1.0

    def test_absent_values_excluded_pairwise(self):
        rows = [
            RemovalRow(0.0, 40, 80, 2.0, 8.0, 2.0, 1.0, ()),
            RemovalRow(0.2, 30, 60, 2.5, 6.0, 3.0, 2.0, ()),
            RemovalRow(0.4, 20, 40, 3.0, 4.0, 5.0, 3.0, ()),
            RemovalRow(0.8, 10, 20, 3.5, None, None, None, ("emptied",)),
        ]
        corr = correlations(rows)
        i_n, i_eff = corr.variables.index("N"), corr.variables.index("eff_d")
        # the absent row drops out; the remaining three are perfectly linear
        assert corr.matrix[i_n, i_eff] == pytest.approx(1.0)

    def test_accepts_sweep_object(self):
        graph = generate(BASE)
        sweep = removal_sweep(graph, [0.0, 0.2, 0.4, 0.6], seed=5)
        corr = correlations(sweep)
        assert corr.matrix.shape == (6, 6)


class TestLog2Bins:
    def test_hand_case(self):
        bins = log2_bins([1, 1, 2, 3, 4, 9])
        assert bins.lower.tolist() == [1, 2, 4, 8]
        assert bins.upper.tolist() == [2, 4, 8, 16]
        assert bins.counts.tolist() == [2, 2, 1, 1]

    def test_interior_zeros_kept(self):
        bins = log2_bins([1, 9])
        assert bins.counts.tolist() == [1, 0, 0, 1]

    def test_powers_of_two_land_in_own_bin(self):
        bins = log2_bins([8])
        assert bins.lower.tolist()[-1] == 8
        assert bins.counts.tolist() == [0, 0, 0, 1]

    def test_empty(self):
        bins = log2_bins([])
        assert bins.lower.size == 0 and bins.counts.size == 0

    def test_rejects_nonpositive(self):
        with pytest.raises(ValueError):
            log2_bins([0, 1])

    def test_total_preserved(self):
        rng = np.random.default_rng(67)
        values = rng.integers(1, 500, size=200)
        assert log2_bins(values).counts.sum() == 200


class TestDistributionReport:
    def test_pooled_runs(self):
        # pair (0,1): steps 1,2,3 then 5 -> runs of 3 and 1 with a gap of 1;
        # pair (1,2): step 2 -> run of 1
        g = TemporalGraph.from_events(
            3, [(1, 0, 1), (2, 0, 1), (3, 0, 1), (5, 0, 1), (2, 1, 2)]
        )
        report = distribution_report(g)
        assert report.durations.tolist() == [1, 1, 3]
        assert report.gaps.tolist() == [1]
        assert report.duration_bins.counts.tolist() == [2, 1]
        assert report.gap_bins.counts.tolist() == [1]

    def test_empty_graph(self):
        report = distribution_report(TemporalGraph.from_events(3, [], horizon=2))
        assert report.durations.size == 0
        assert report.gaps.size == 0
        assert report.duration_bins.counts.size == 0


class TestWriters:
    def test_sweep_report_bytes(self, tmp_path):
        result = SweepResult(
            axis="avg_degree",
            base=BASE,
            repeats=2,
            points=(
                SweepPoint(
                    axis_value=6.0,
                    sim_values=(3.0, 4.0),
                    sim_mean=3.5,
                    sim_std=0.5,
                    pred_recurrence=math.nan,
                    pred_closed_form=10.25,
                ),
            ),
            rmse=math.nan,
            mse=math.nan,
            mae=math.nan,
            flags=("model-stalled", "no-model-saturation"),
        )
        names = write_sweep_report(result, tmp_path)
        assert names == ["sweep.csv", "sweep.json"]
        assert (tmp_path / "sweep.csv").read_text() == (
            "# axis=avg_degree\n"
            "# n_nodes=40 distribution=normal target_avg_degree=6 "
            "active_time=4 horizon=8 repeats=2 base_seed=1\n"
            "# rmse=nan mse=nan mae=nan\n"
            "axis,sim_mean,sim_std,pred_recurrence,pred_closed_form\n"
            "6,3.5,0.5,nan,10.25\n"
        )
        payload = json.loads((tmp_path / "sweep.json").read_text())
        assert payload["points"][0]["pred_recurrence"] is None  # NaN -> null
        assert payload["points"][0]["sim_values"] == [3.0, 4.0]
        assert payload["rmse"] is None
        assert payload["flags"] == ["model-stalled", "no-model-saturation"]

    def test_removal_report_bytes(self, tmp_path):
        sweep = RemovalSweep(
            seed=3,
            rows=(
                RemovalRow(0.0, 20, 40, 2.0, 5.0, 3.0, 2.0, ()),
                RemovalRow(0.5, 10, 12, 1.2, None, None, None, ("emptied",)),
            ),
        )
        names = write_removal_report(sweep, tmp_path)
        assert names == ["removal.csv", "removal.json"]
        assert (tmp_path / "removal.csv").read_text() == (
            "# removal seed=3\n"
            "p,N,E,k_avg,eff_d,tau_d,peak_d\n"
            "0,20,40,2,5,3,2\n"
            "0.5,10,12,1.2,,,\n"
        )
        payload = json.loads((tmp_path / "removal.json").read_text())
        assert payload["rows"][1]["eff_d"] is None
        assert payload["rows"][1]["flags"] == ["emptied"]

    def test_correlation_report_bytes(self, tmp_path):
        corr = CorrelationMatrix(
            variables=("a", "b"),
            matrix=np.array([[1.0, math.nan], [math.nan, 1.0]]),
            undefined=(("a", "b"),),
        )
        write_correlation_report(corr, tmp_path)
        assert (tmp_path / "corr.csv").read_text() == (
            ",a,b\n"
            "a,1,nan\n"
            "b,nan,1\n"
        )
        payload = json.loads((tmp_path / "corr.json").read_text())
        assert payload["matrix"] == [[1.0, None], [None, 1.0]]
        assert payload["undefined"] == [["a", "b"]]

    def test_bins_report_bytes(self, tmp_path):
        bins = log2_bins([1, 1, 2, 3, 4, 9])
        write_bins_report(bins, tmp_path, "hist_durations", "durations")
        assert (tmp_path / "hist_durations.csv").read_text() == (
            "# durations\n"
            "bin_lo,bin_hi,count\n"
            "1,2,2\n"
            "2,4,2\n"
            "4,8,1\n"
            "8,16,1\n"
        )
        payload = json.loads((tmp_path / "hist_durations.json").read_text())
        assert payload["bins"][0] == {"lo": 1, "hi": 2, "count": 2}

    def test_rewrites_are_byte_identical(self, tmp_path):
        graph = generate(BASE)
        sweep = removal_sweep(graph, [0.0, 0.3], seed=5)
        write_removal_report(sweep, tmp_path)
        first = (tmp_path / "removal.csv").read_bytes()
        write_removal_report(sweep, tmp_path)
        assert (tmp_path / "removal.csv").read_bytes() == first
