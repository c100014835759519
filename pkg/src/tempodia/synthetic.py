"""Deterministic synthetic contact corpora with realistic texture.

Each profile builds a raw contact file in the wearable-sensor format
(``timestamp id_u id_v [group_u group_v]``) whose headline statistics match
a published deployment exactly: node count, static edge count, and thus
edges per node.  Everything else is synthetic but shaped like the real
recordings: activity happens in daily windows, contacts between a pair come
in bursty runs (run counts, durations, and inter-run gaps all heavy-tailed;
hospital- and workplace-style profiles use unit-length runs), and node ids
look like raw badge numbers.

These corpora serve as stand-ins when the original recordings are not on
disk (see ``scripts/fetch_datasets.py`` for obtaining those); experiments
run on either interchangeably.  Generation is a pure function of the
profile, so files are byte-identical across runs and platforms.
"""

from __future__ import annotations

import os
from dataclasses import dataclass

import numpy as np

RESOLUTION = 20  # seconds per step in the raw timestamp column
_BASE_TS = 1_000_000

_DURATION_CAP = 96
_GAP_CAP = 2400
_RUNS_CAP = 40


@dataclass(frozen=True)
class CorpusProfile:
    name: str
    n_nodes: int
    n_pairs: int
    days: int
    day_steps: int
    unit_durations: bool
    n_groups: int
    seed: int
    label_base: int
    group_columns: bool


PROFILES: dict[str, CorpusProfile] = {
    p.name: p
    for p in (
        CorpusProfile(
            name="highschool",
            n_nodes=327,
            n_pairs=5818,
            days=3,
            day_steps=1400,
            unit_durations=False,
            n_groups=9,
            seed=20131101,
            label_base=1000,
            group_columns=True,
        ),
        CorpusProfile(
            name="conference",
            n_nodes=403,
            n_pairs=9565,
            days=2,
            day_steps=1600,
            unit_durations=False,
            n_groups=12,
            seed=20090701,
            label_base=1100,
            group_columns=False,
        ),
        CorpusProfile(
            name="hospital",
            n_nodes=75,
            n_pairs=1139,
            days=4,
            day_steps=1200,
            unit_durations=True,
            n_groups=4,
            seed=20101206,
            label_base=1000,
            group_columns=True,
        ),
        CorpusProfile(
            name="workplace",
            n_nodes=217,
            n_pairs=4274,
            days=5,
            day_steps=1200,
            unit_durations=True,
            n_groups=8,
            seed=20150629,
            label_base=100,
            group_columns=False,
        ),
    )
}

DATASET_FILES = {name: f"{name}.dat" for name in PROFILES}


def _draw_pairs(
    profile: CorpusProfile, rng: np.random.Generator
) -> tuple[list[tuple[int, int]], np.ndarray, dict[int, int]]:
    """Exactly ``n_pairs`` distinct pairs, every node covered.

    A shuffled chain touches each node once (so ingestion sees the full
    node count); the rest are sampled with a bias toward same-group pairs,
    which yields clustering and a spread-out degree sequence.

    A handful of nodes are designated late joiners: badges that only show
    up near the end of the recording, as happens in real deployments.
    They get a few dedicated partners and are otherwise excluded from pair
    filling; every pair touching one is scheduled inside its late window.
    Returns the pairs, the group assignment, and the late-joiner window
    starts keyed by node.
    """
    n = profile.n_nodes
    groups = rng.integers(profile.n_groups, size=n)
    members = [np.flatnonzero(groups == g) for g in range(profile.n_groups)]

    span = profile.days * profile.day_steps
    n_late = max(4, n // 50)
    late_nodes = rng.choice(n, size=n_late, replace=False)
    late_windows = {
        int(node): int(0.90 * span) + int(rng.integers(max(span // 50, 1)))
        for node in late_nodes
    }

    def canon(a, b):
        return (min(int(a), int(b)), max(int(a), int(b)))

    pairs: set[tuple[int, int]] = set()
    chain = rng.permutation(n)
    for a, b in zip(chain[:-1], chain[1:]):
        pairs.add(canon(a, b))
    others = np.asarray([i for i in range(n) if i not in late_windows])
    for node in sorted(late_windows):
        n_partners = min(8, n - 1)
        for partner in rng.choice(others, size=n_partners, replace=False):
            pairs.add(canon(node, partner))
    while len(pairs) < profile.n_pairs:
        if rng.random() < 0.7:
            grp = members[int(rng.integers(profile.n_groups))]
            if len(grp) < 2:
                continue
            a, b = rng.choice(grp, size=2, replace=False)
        else:
            a, b = rng.choice(n, size=2, replace=False)
        if a in late_windows or b in late_windows:
            continue
        pairs.add(canon(a, b))
    return sorted(pairs), groups, late_windows


def _pair_steps(profile: CorpusProfile, rng: np.random.Generator) -> list[int]:
    """Active steps for one pair: bursty runs inside daily windows."""
    n_days = int(rng.integers(1, profile.days + 1))
    home_days = sorted(rng.choice(profile.days, size=n_days, replace=False).tolist())
    window = int(0.7 * profile.day_steps)
    steps: list[int] = []
    for day in home_days:
        lo = day * profile.day_steps
        n_runs = min(1 + int(rng.zipf(2.3)), _RUNS_CAP)
        start = lo + int(rng.integers(max(window // 2, 1)))
        for _ in range(n_runs):
            if start >= lo + window:
                break
            if profile.unit_durations:
                duration = 1
            else:
                duration = min(int(rng.zipf(2.2)), _DURATION_CAP)
            steps.extend(range(start, start + duration))
            gap = min(int(rng.zipf(1.6)), _GAP_CAP)
            start = start + duration + gap
    return steps


def _late_pair_steps(
    profile: CorpusProfile, rng: np.random.Generator, window_start: int
) -> list[int]:
    """Active steps for a pair involving a late joiner: one tight burst."""
    n_runs = 3 + int(rng.integers(4))
    start = window_start + int(rng.integers(16))
    steps: list[int] = []
    for _ in range(n_runs):
        if profile.unit_durations:
            duration = 1
        else:
            duration = min(int(rng.zipf(2.2)), _DURATION_CAP)
        steps.extend(range(start, start + duration))
        start = start + duration + min(int(rng.zipf(1.6)), 24)
    return steps


def build_contact_lines(name: str) -> list[str]:
    """Raw contact lines for one profile, sorted by timestamp."""
    if name not in PROFILES:
        raise KeyError(f"unknown corpus {name!r}; have {sorted(PROFILES)}")
    profile = PROFILES[name]
    rng = np.random.default_rng(profile.seed)
    pairs, groups, late_windows = _draw_pairs(profile, rng)
    labels = profile.label_base + rng.permutation(profile.n_nodes)

    records: list[tuple[int, int, int, int, int]] = []
    for u, v in pairs:
        if u in late_windows or v in late_windows:
            window = max(
                late_windows.get(u, -1), late_windows.get(v, -1)
            )
            steps = _late_pair_steps(profile, rng, window)
        else:
            steps = _pair_steps(profile, rng)
        for step in steps:
            records.append((step, int(labels[u]), int(labels[v]), int(groups[u]), int(groups[v])))
    records.sort()
    lines = []
    for step, lu, lv, gu, gv in records:
        ts = _BASE_TS + step * RESOLUTION
        if profile.group_columns:
            lines.append(f"{ts} {lu} {lv} G{gu} G{gv}")
        else:
            lines.append(f"{ts} {lu} {lv}")
    return lines


def write_corpus(directory, names=None) -> dict[str, str]:
    """Write the requested corpora (default: all) into ``directory``.

    Returns a name -> path mapping.  Existing files are overwritten.
    """
    os.makedirs(directory, exist_ok=True)
    out = {}
    for name in names or sorted(PROFILES):
        path = os.path.join(directory, DATASET_FILES[name])
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            for line in build_contact_lines(name):
                fh.write(line + "\n")
        out[name] = path
    return out
