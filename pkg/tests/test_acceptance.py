"""Acceptance suite: one test per criterion, each printing a verdict line.

Run with ``pytest -v -s tests/test_acceptance.py`` to see the per-criterion
lines alongside the pytest verdicts.
"""

import functools
import time

import numpy as np

from proxmem import fixtures
from proxmem.interplay import (
    InterplayPolicies,
    init_interplay,
    resolve_conflict,
    run_interplay,
)
from proxmem.memory import (
    b_matrix,
    hebbian_weights,
    permute_memories,
    permute_weights,
)
from proxmem.recall import proximity_recall, single_recall
from proxmem.replication import replay_fixture
from proxmem.experiment import ExperimentConfig, run_batch
from proxmem.topology import (
    PermutationSequence,
    distance_matrix,
    proximity_permutation,
    select_stimulus_pair,
)

from conftest import random_geometry


def criterion(num, title):
    def decorate(fn):
        @functools.wraps(fn)
        def wrapper(*args, **kwargs):
            try:
                fn(*args, **kwargs)
            except BaseException:
                print(f"\ncriterion {num}: FAIL - {title}")
                raise
            print(f"\ncriterion {num}: PASS - {title}")
        return wrapper
    return decorate


@criterion(1, "fixture geometry reproduces both proximity permutations exactly")
def test_criterion_1_permutation_exactness(builtin_distances):
    p1 = proximity_permutation(builtin_distances, 2)
    p2 = proximity_permutation(builtin_distances, 3)
    assert p1.labels == fixtures.PI_X1, "pi_x1 mismatch"
    assert p2.labels == fixtures.PI_X2, "pi_x2 mismatch"
    assert sum(a == b for a, b in zip(p1.labels, fixtures.PI_X1)) == 20
    assert sum(a == b for a, b in zip(p2.labels, fixtures.PI_X2)) == 20
    # the tie: neurons 17 and 20 both at squared distance 13 from neuron 2,
    # resolved by ascending label
    assert builtin_distances.squared[1, 16] == 13
    assert builtin_distances.squared[1, 19] == 13
    assert p1.labels.index(17) < p1.labels.index(20)


@criterion(2, "stimulus pair selection returns (2, 3) on the fixture")
def test_criterion_2_stimulus_pair(builtin_geometry):
    assert select_stimulus_pair(builtin_geometry) == fixtures.STIMULUS_PAIR == (2, 3)


@criterion(3, "memory permutation consistency, exact up to documented defects")
def test_criterion_3_memory_consistency(builtin_memories, builtin_distances):
    p1 = proximity_permutation(builtin_distances, 2)
    p2 = proximity_permutation(builtin_distances, 3)
    r1 = permute_memories(builtin_memories, p1)
    r2 = permute_memories(builtin_memories, p2)
    printed_r1 = np.array(fixtures.R1MEMS_PRINTED)

    # rows 1 and 2: all 40 entries exact
    assert np.array_equal(r1[0], printed_r1[0])
    assert np.array_equal(r1[1], printed_r1[1])
    # row 3: the curated defect map is exact; nothing else disagrees
    mismatches = (np.nonzero(r1[2] != printed_r1[2])[0] + 1).tolist()
    documented = [n for n in fixtures.CURATION_NOTES if n.key == "r1mems_row3_entries"]
    assert documented, "curation log lost the r1Mems row 3 note"
    assert mismatches == list(documented[0].printed_positions) == [16, 17, 18]

    # the second permuted set: the one 20-entry printed row is exact
    assert r2[1].tolist() == list(fixtures.R2MEMS_PRINTED[1])
    # each 21-entry printed row reconciles by deleting one spurious entry,
    # and the curation log names a valid candidate
    for row, printed, note_key in ((0, fixtures.R2MEMS_PRINTED[0], "r2mems_row1_length"),
                                   (2, fixtures.R2MEMS_PRINTED[2], "r2mems_row3_length")):
        printed = list(printed)
        assert len(printed) == 21
        removable = [k + 1 for k in range(21)
                     if printed[:k] + printed[k + 1:] == r2[row].tolist()]
        assert removable, f"row {row + 1} does not reconcile"
        note = next(n for n in fixtures.CURATION_NOTES if n.key == note_key)
        assert set(note.printed_positions) <= set(removable)


@criterion(4, "algebraic invariant suites, 1000 seeded instances each, zero violations")
def test_criterion_4_algebraic_invariants():
    rng = np.random.default_rng(20260809)

    # T structure, B split, commutation, permutation round trip
    for _ in range(1000):
        n = int(rng.integers(2, 15))
        m = int(rng.integers(1, 6))
        mems = (2 * rng.integers(0, 2, size=(m, n)) - 1).astype(np.int64)
        T = hebbian_weights(mems)
        assert np.array_equal(T, T.T)
        assert (np.diag(T) == 0).all()
        assert np.abs(T).max() <= m
        B = b_matrix(T)
        assert np.array_equal(B + B.T, T)
        order = np.arange(n)
        rng.shuffle(order)
        p = PermutationSequence(order=order, start=int(order[0]) + 1)
        assert np.array_equal(permute_weights(T, p), hebbian_weights(permute_memories(mems, p)))
        inverse = PermutationSequence(order=p.inverse, start=int(p.inverse[0]) + 1)
        assert np.array_equal(permute_memories(permute_memories(mems, p), inverse), mems)

    # single-pattern recall exactness
    for _ in range(1000):
        n = int(rng.integers(2, 15))
        geom = random_geometry(rng, n=n)
        x = (2 * rng.integers(0, 2, size=(1, n)) - 1).astype(np.int64)
        perm = proximity_permutation(distance_matrix(geom), int(rng.integers(1, n + 1)))
        xp = permute_memories(x, perm)[0]
        res = single_recall(b_matrix(permute_weights(hebbian_weights(x), perm)), int(xp[0]))
        assert np.array_equal(res.final, xp)

    # clamping monotonicity and zero-free finals
    for _ in range(1000):
        n = int(rng.integers(2, 15))
        m = int(rng.integers(1, 6))
        geom = random_geometry(rng, n=n)
        mems = (2 * rng.integers(0, 2, size=(m, n)) - 1).astype(np.int64)
        perm = proximity_permutation(distance_matrix(geom), 1)
        B = b_matrix(permute_weights(hebbian_weights(mems), perm))
        res = single_recall(B, 1)
        assert (res.final != 0).all()
        prev = np.zeros(n, dtype=np.int64)
        prev[0] = 1
        for step in res.steps:
            nz = np.nonzero(prev)[0]
            assert (step.state[nz] == prev[nz]).all()
            assert np.count_nonzero(step.state) == np.count_nonzero(prev) + 1
            prev = step.state


@criterion(5, "published recall outcomes reproduce; the report names the variant")
def test_criterion_5_recall_outcomes(builtin_geometry, builtin_memories, builtin_distances):
    report = replay_fixture()
    reproducing = ("reproduced", "reproduced_under_variant")
    for key in ("recall_r1_plus_memory3", "recall_r2_plus_memory2",
                "recall_r2_minus_pseudo", "pseudo_position_4"):
        item = report.item(key)
        assert item.status in reproducing, f"{key}: {item.status}"

    # the outcomes themselves, under the default conventions
    T = hebbian_weights(builtin_memories)
    p1 = proximity_permutation(builtin_distances, 2)
    p2 = proximity_permutation(builtin_distances, 3)
    res_a = proximity_recall(T, p1, +1, mems=builtin_memories)
    assert res_a.outcome.exact and res_a.outcome.nearest == 3
    res_b = proximity_recall(T, p2, +1, mems=builtin_memories)
    assert res_b.outcome.exact and res_b.outcome.nearest == 2
    res_c = proximity_recall(T, p2, -1, mems=builtin_memories)
    assert res_c.outcome.kind == "pseudo"
    assert res_c.outcome.nearest == 3 and res_c.outcome.distance == 1
    diff = np.nonzero(res_c.final != permute_memories(builtin_memories, p2)[2])[0] + 1
    assert diff.tolist() == [4]


@criterion(6, "interplay structural invariants hold; exact figures variant-qualified")
def test_criterion_6_interplay(builtin_geometry, builtin_memories):
    # structural, under the default first-writer-wins conventions
    result = run_interplay(init_interplay(
        builtin_geometry, builtin_memories, fixtures.STIMULUS_PAIR, (1, -1), seed=0))
    for final in result.finals:
        assert (final != 0).all()
    assert result.rounds_total < 20
    assert result.agree

    # the exact published figures are reproduction targets qualified by the
    # variant table, never silently passed
    report = replay_fixture()
    rounds_item = report.item("interplay_rounds_12")
    assert rounds_item.status in ("reproduced", "reproduced_under_variant"), rounds_item.status
    error_item = report.item("interplay_neuron13_error")
    assert error_item.status in ("reproduced", "reproduced_under_variant"), error_item.status

    # and the named variant actually delivers them
    variant = rounds_item.variant or {"sign_policy": "plus", "update_window": "strict",
                                      "lane_order": [1, 2], "visibility": "same_round",
                                      "blocked": "pause"}
    pol = InterplayPolicies(
        sign_policy=variant["sign_policy"], update_window=variant["update_window"],
        lane_order=tuple(variant["lane_order"]), visibility=variant["visibility"],
        blocked=variant["blocked"])
    rep = run_interplay(init_interplay(
        builtin_geometry, builtin_memories, fixtures.STIMULUS_PAIR, (1, -1),
        policies=pol, seed=0))
    assert rep.rounds_total == 12
    target = builtin_memories[fixtures.INTERPLAY_TARGET_MEMORY - 1]
    for net in rep.finals_network:
        assert (np.nonzero(net != target)[0] + 1).tolist() == [fixtures.INTERPLAY_ERROR_NEURON]


@criterion(7, "fair random draw resolves incoming-wins at 0.5 +- 0.05 over 10^4 conflicts")
def test_criterion_7_conflict_statistics():
    t0 = time.time()
    rng = np.random.default_rng(555)
    trials = 10_000
    wins = 0
    for i in range(trials):
        existing = 1 if i % 2 else -1
        _, incoming_won = resolve_conflict("fair_draw", existing, -existing, rng)
        wins += incoming_won
    freq = wins / trials
    assert abs(freq - 0.5) <= 0.05, f"incoming-wins frequency {freq}"
    assert time.time() - t0 < 30


@criterion(8, "batch determinism, parallel byte-identity, runtime and pseudo-rate bounds")
def test_criterion_8_batch_stability():
    config = ExperimentConfig(trials=1000, n=20, m=3, coord_range=(0, 9),
                              master_seed=2026, mode="single")
    t0 = time.time()
    stats1, _ = run_batch(config, workers=1)
    elapsed = time.time() - t0
    assert elapsed < 60, f"1000-trial batch took {elapsed:.1f}s"
    stats2, _ = run_batch(config, workers=2)
    assert stats1.to_json() == stats2.to_json(), "statistics depend on parallelism"
    assert 0.0 < stats1.pseudo_rate < 0.5, f"pseudo rate {stats1.pseudo_rate}"
