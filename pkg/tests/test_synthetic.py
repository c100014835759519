"""Synthetic contact corpora: exact headline statistics, stable bytes."""

import numpy as np
import pytest

from tempodia import ingest_sociopatterns, propagate, static_projection
from tempodia.synthetic import (
    DATASET_FILES,
    PROFILES,
    build_contact_lines,
    write_corpus,
)

# node and edge counts each profile must reproduce exactly
HEADLINE = {
    "highschool": (327, 5818),
    "conference": (403, 9565),
    "hospital": (75, 1139),
    "workplace": (217, 4274),
}


class TestProfiles:
    def test_catalogue(self):
        assert set(PROFILES) == set(HEADLINE)
        assert DATASET_FILES["highschool"] == "highschool.dat"

    def test_unknown_name(self):
        with pytest.raises(KeyError):
            build_contact_lines("metro")

    @pytest.mark.parametrize("name", sorted(HEADLINE))
    def test_headline_statistics_exact(self, name):
        graph = ingest_sociopatterns(build_contact_lines(name))
        proj = static_projection(graph)
        n, e = HEADLINE[name]
        assert graph.n_nodes == n
        assert proj.n_edges == e

    @pytest.mark.parametrize("name", sorted(HEADLINE))
    def test_every_node_appears(self, name):
        graph = ingest_sociopatterns(build_contact_lines(name))
        seen = np.zeros(graph.n_nodes, dtype=bool)
        seen[graph.events[:, 1]] = True
        seen[graph.events[:, 2]] = True
        assert seen.all()

    def test_deterministic_lines(self):
        assert build_contact_lines("hospital") == build_contact_lines("hospital")

    def test_lines_sorted_by_timestamp(self):
        stamps = [int(line.split()[0]) for line in build_contact_lines("hospital")]
        assert stamps == sorted(stamps)

    def test_group_columns_only_where_configured(self):
        assert len(build_contact_lines("highschool")[0].split()) == 5
        assert len(build_contact_lines("conference")[0].split()) == 3

    def test_network_is_connected_over_time(self):
        # a flow from the first step's earliest participant must reach a
        # large majority; anything less means the corpus fell apart
        graph = ingest_sociopatterns(build_contact_lines("hospital"))
        trace = propagate(graph, int(graph.events[0, 1]))
        assert trace.reached_count >= 0.9 * graph.n_nodes


class TestWriteCorpus:
    def test_writes_requested_files(self, tmp_path):
        out = write_corpus(tmp_path, names=["hospital"])
        assert sorted(out) == ["hospital"]
        text = (tmp_path / "hospital.dat").read_text()
        assert text.splitlines() == build_contact_lines("hospital")

    def test_round_trip_through_ingest(self, tmp_path):
        path = write_corpus(tmp_path, names=["hospital"])["hospital"]
        graph = ingest_sociopatterns(path)
        assert graph.n_nodes == 75
        assert static_projection(graph).n_edges == 1139
