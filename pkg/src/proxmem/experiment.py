"""Monte Carlo harness: seeded trials, batches, aggregate statistics.

A trial regenerates the whole pipeline (geometry, memories, stimulus
pair, recalls or interplay) from a single integer seed. Batch seeds are
derived from the master seed with numpy's SeedSequence using the trial
index as spawn key, so any subset of trials can be re-run in isolation:

    trial_seed(i) = SeedSequence(master_seed, spawn_key=(i,)).generate_state(1)[0]
"""

from __future__ import annotations

import csv
import hashlib
import json
import warnings
from dataclasses import asdict, dataclass

import numpy as np
from joblib import Parallel, delayed

from .errors import ConfigError, DegeneratePairWarning
from .interplay import (
    BLOCKED_POLICIES,
    CONFLICT_POLICIES,
    UPDATE_WINDOWS,
    VISIBILITIES,
    InterplayPolicies,
    init_interplay,
    run_interplay,
)
from .memory import generate_memories, hebbian_weights
from .recall import SIGN_POLICIES, proximity_recall
from .topology import distance_matrix, generate_geometry, proximity_permutation, select_stimulus_pair

MODES = ("single", "interplay")


@dataclass(frozen=True)
class ExperimentConfig:
    trials: int
    n: int = 20
    m: int = 3
    coord_range: tuple[int, int] = (0, 9)
    master_seed: int = 0
    mode: str = "single"
    sign_policy: str = "plus"
    conflict_policy: str = "first_writer"
    lane_order: tuple[int, int] = (1, 2)
    visibility: str = "same_round"
    blocked: str = "pause"
    update_window: str = "strict"

    def __post_init__(self):
        object.__setattr__(self, "coord_range", tuple(int(v) for v in self.coord_range))
        object.__setattr__(self, "lane_order", tuple(int(v) for v in self.lane_order))
        self.validate()

    def validate(self) -> None:
        checks = [
            ("trials", self.trials >= 1, "must be >= 1"),
            ("n", self.n >= 2, "must be >= 2"),
            ("m", self.m >= 1, "must be >= 1"),
            ("coord_range", len(self.coord_range) == 2 and self.coord_range[0] <= self.coord_range[1],
             "must be (lo, hi) with lo <= hi"),
            ("mode", self.mode in MODES, f"must be one of {MODES}"),
            ("sign_policy", self.sign_policy in SIGN_POLICIES, f"must be one of {SIGN_POLICIES}"),
            ("conflict_policy", self.conflict_policy in CONFLICT_POLICIES,
             f"must be one of {CONFLICT_POLICIES}"),
            ("lane_order", self.lane_order in ((1, 2), (2, 1)), "must be (1, 2) or (2, 1)"),
            ("visibility", self.visibility in VISIBILITIES, f"must be one of {VISIBILITIES}"),
            ("blocked", self.blocked in BLOCKED_POLICIES, f"must be one of {BLOCKED_POLICIES}"),
            ("update_window", self.update_window in UPDATE_WINDOWS, f"must be one of {UPDATE_WINDOWS}"),
        ]
        for name, ok, msg in checks:
            if not ok:
                raise ConfigError(f"{name}: {msg} (got {getattr(self, name)!r})")

    def policies(self) -> InterplayPolicies:
        return InterplayPolicies(
            sign_policy=self.sign_policy,
            conflict_policy=self.conflict_policy,
            lane_order=self.lane_order,
            visibility=self.visibility,
            blocked=self.blocked,
            update_window=self.update_window,
        )

    def to_dict(self) -> dict:
        d = asdict(self)
        d["coord_range"] = list(self.coord_range)
        d["lane_order"] = list(self.lane_order)
        return d

    @classmethod
    def from_dict(cls, data: dict) -> "ExperimentConfig":
        if not isinstance(data, dict):
            raise ConfigError("config root must be a JSON object")
        known = set(cls.__dataclass_fields__)
        for key in data:
            if key not in known:
                raise ConfigError(f"{key}: unknown field")
        if "trials" not in data:
            raise ConfigError("trials: required field is missing")
        kwargs = dict(data)
        for key in ("coord_range", "lane_order"):
            if key in kwargs:
                value = kwargs[key]
                if not isinstance(value, (list, tuple)) or len(value) != 2:
                    raise ConfigError(f"{key}: must be a two-element list")
                kwargs[key] = tuple(value)
        try:
            return cls(**kwargs)
        except TypeError as e:
            raise ConfigError(str(e)) from e

    @classmethod
    def from_json_file(cls, path) -> "ExperimentConfig":
        try:
            with open(path, encoding="utf-8") as f:
                data = json.load(f)
        except json.JSONDecodeError as e:
            raise ConfigError(f"{path}: line {e.lineno}: {e.msg}") from e
        return cls.from_dict(data)


def derive_trial_seed(master_seed: int, index: int) -> int:
    """Deterministic per-trial seed; see module docstring for the scheme."""
    ss = np.random.SeedSequence(master_seed, spawn_key=(index,))
    return int(ss.generate_state(1, dtype=np.uint64)[0])


@dataclass(frozen=True)
class RunOutcome:
    """One recall (or interplay) run inside a trial, flattened for CSV."""

    mode: str
    start_a: int
    start_b: int | None
    init_a: int
    init_b: int | None
    outcome: str  # "exact" | "pseudo"
    nearest: int
    distance: int
    polarity: int
    rounds: int
    conflicts: int
    zero_sums: int
    agree: bool | None  # interplay only


@dataclass(frozen=True)
class TrialRecord:
    index: int
    seed: int
    geometry_digest: str
    pair: tuple[int, int]
    degenerate_pair: bool
    runs: tuple[RunOutcome, ...]


def _geometry_digest(coords: np.ndarray) -> str:
    return hashlib.sha256(coords.astype(np.int64).tobytes()).hexdigest()[:16]


def run_trial(config: ExperimentConfig, seed: int, index: int = -1) -> TrialRecord:
    """One end-to-end sample: geometry, memories, pair, recalls/interplay."""
    ss = np.random.SeedSequence(seed)
    ss_geom, ss_mems, ss_dyn = ss.spawn(3)
    geom = generate_geometry(np.random.default_rng(ss_geom), config.n, config.coord_range)
    mems = generate_memories(np.random.default_rng(ss_mems), config.m, config.n)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", DegeneratePairWarning)
        pair = select_stimulus_pair(geom)
    degenerate = pair[0] == pair[1]
    dyn_rng = np.random.default_rng(ss_dyn)

    runs: list[RunOutcome] = []
    if config.mode == "single":
        d = distance_matrix(geom)
        T = hebbian_weights(mems)
        for start in dict.fromkeys(pair):
            perm = proximity_permutation(d, start)
            inits = sorted({int(v) for v in mems[:, start - 1]}, reverse=True)
            for init in inits:
                res = proximity_recall(T, perm, init, mems=mems,
                                       sign_policy=config.sign_policy, rng=dyn_rng)
                runs.append(RunOutcome(
                    mode="single", start_a=start, start_b=None, init_a=init, init_b=None,
                    outcome=res.outcome.kind, nearest=res.outcome.nearest,
                    distance=res.outcome.distance, polarity=res.outcome.polarity,
                    rounds=res.rounds, conflicts=0,
                    zero_sums=len(res.zero_sum_rounds), agree=None,
                ))
    else:
        if not degenerate:
            policies = config.policies()
            seen: set[tuple[int, int]] = set()
            for k in range(config.m):
                inits = (int(mems[k, pair[0] - 1]), int(mems[k, pair[1] - 1]))
                if inits in seen:
                    continue
                seen.add(inits)
                session = init_interplay(geom, mems, pair, inits,
                                         policies=policies, seed=dyn_rng)
                result = run_interplay(session)
                zero_sums = sum(
                    1 for rep in result.reports for a in rep.actions if a.zero_sum
                )
                runs.append(RunOutcome(
                    mode="interplay", start_a=pair[0], start_b=pair[1],
                    init_a=inits[0], init_b=inits[1],
                    outcome=result.outcomes[0].kind, nearest=result.outcomes[0].nearest,
                    distance=result.outcomes[0].distance,
                    polarity=result.outcomes[0].polarity,
                    rounds=result.rounds_total, conflicts=result.conflict_count,
                    zero_sums=zero_sums, agree=result.agree,
                ))

    return TrialRecord(
        index=index, seed=seed, geometry_digest=_geometry_digest(geom.coords),
        pair=pair, degenerate_pair=degenerate, runs=tuple(runs),
    )


@dataclass
class BatchStatistics:
    config: dict
    trials: int
    runs: int
    exact_count: int
    pseudo_count: int
    exact_rate: float
    pseudo_rate: float
    mean_pseudo_hamming: float | None
    rounds_histogram: dict[int, int]
    conflict_total: int
    zero_sum_total: int
    degenerate_pairs: int
    trials_with_pseudo: int

    def to_dict(self) -> dict:
        d = asdict(self)
        d["rounds_histogram"] = {str(k): v for k, v in sorted(self.rounds_histogram.items())}
        return d

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, indent=2) + "\n"


def aggregate(config: ExperimentConfig, records: list[TrialRecord]) -> BatchStatistics:
    """Order-independent reduction of trial records."""
    records = sorted(records, key=lambda r: r.index)
    runs = [run for rec in records for run in rec.runs]
    exact = sum(1 for r in runs if r.outcome == "exact")
    pseudo = sum(1 for r in runs if r.outcome == "pseudo")
    pseudo_h = [r.distance for r in runs if r.outcome == "pseudo"]
    hist: dict[int, int] = {}
    for r in runs:
        hist[r.rounds] = hist.get(r.rounds, 0) + 1
    return BatchStatistics(
        config=config.to_dict(),
        trials=len(records),
        runs=len(runs),
        exact_count=exact,
        pseudo_count=pseudo,
        exact_rate=exact / len(runs) if runs else 0.0,
        pseudo_rate=pseudo / len(runs) if runs else 0.0,
        mean_pseudo_hamming=(sum(pseudo_h) / len(pseudo_h)) if pseudo_h else None,
        rounds_histogram=hist,
        conflict_total=sum(r.conflicts for r in runs),
        zero_sum_total=sum(r.zero_sums for r in runs),
        degenerate_pairs=sum(1 for rec in records if rec.degenerate_pair),
        trials_with_pseudo=sum(
            1 for rec in records if any(r.outcome == "pseudo" for r in rec.runs)
        ),
    )


def run_batch(config: ExperimentConfig, workers: int = 1) -> tuple[BatchStatistics, list[TrialRecord]]:
    """Run all trials; statistics do not depend on ``workers``."""
    seeds = [derive_trial_seed(config.master_seed, i) for i in range(config.trials)]
    if workers == 1:
        records = [run_trial(config, seed, i) for i, seed in enumerate(seeds)]
    else:
        records = Parallel(n_jobs=workers)(
            delayed(run_trial)(config, seed, i) for i, seed in enumerate(seeds)
        )
    return aggregate(config, records), list(records)


CSV_COLUMNS = (
    "trial", "seed", "geometry_digest", "degenerate_pair", "mode",
    "start_a", "start_b", "init_a", "init_b", "outcome", "nearest",
    "distance", "polarity", "rounds", "conflicts", "zero_sums", "agree",
)


def write_trials_csv(records: list[TrialRecord], path) -> None:
    """One row per run; trials without runs still get a stub row."""
    with open(path, "w", encoding="utf-8", newline="") as f:
        writer = csv.writer(f)
        writer.writerow(CSV_COLUMNS)
        for rec in sorted(records, key=lambda r: r.index):
            if not rec.runs:
                writer.writerow([rec.index, rec.seed, rec.geometry_digest,
                                 rec.degenerate_pair] + [""] * (len(CSV_COLUMNS) - 4))
            for run in rec.runs:
                writer.writerow([
                    rec.index, rec.seed, rec.geometry_digest, rec.degenerate_pair,
                    run.mode, run.start_a,
                    "" if run.start_b is None else run.start_b,
                    run.init_a, "" if run.init_b is None else run.init_b,
                    run.outcome, run.nearest, run.distance, run.polarity,
                    run.rounds, run.conflicts, run.zero_sums,
                    "" if run.agree is None else run.agree,
                ])


def write_statistics_json(stats: BatchStatistics, path) -> None:
    with open(path, "w", encoding="utf-8") as f:
        f.write(stats.to_json())
