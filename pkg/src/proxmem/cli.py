"""Command-line surface.

Subcommands: generate | recall | interplay | replicate | batch.
Exit codes: 0 success, 1 domain error, 2 usage or I/O error. The literal
fixture name "builtin" selects the embedded 20-neuron fixture; otherwise
a fixture is a directory holding geometry.json and memories.json. Neuron
labels on the command line are 1-based throughout. PROXMEM_SEED overrides
the default seed where one applies.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import os
import sys
from pathlib import Path

import numpy as np

from . import fixtures
from .errors import ProxmemError
from .experiment import ExperimentConfig, run_batch, write_statistics_json, write_trials_csv
from .interplay import (
    BLOCKED_POLICIES,
    CONFLICT_POLICIES,
    InterplayPolicies,
    UPDATE_WINDOWS,
    VISIBILITIES,
    init_interplay,
    render_round_trace,
    run_interplay,
    write_interplay_trace_jsonl,
)
from .memory import generate_memories, hebbian_weights, load_memories_file, save_memories
from .recall import SIGN_POLICIES, proximity_recall, write_trace_jsonl
from .replication import replay_fixture
from .topology import (
    distance_matrix,
    generate_geometry,
    load_geometry_file,
    proximity_permutation,
    save_geometry,
)


def _default_seed() -> int:
    return int(os.environ.get("PROXMEM_SEED", "0"))


def _parse_range(text: str) -> tuple[int, int]:
    lo, _, hi = text.partition(":")
    try:
        return int(lo), int(hi)
    except ValueError:
        raise argparse.ArgumentTypeError(f"range must look like lo:hi, got {text!r}")


def _parse_pair(text: str) -> tuple[int, int]:
    parts = text.split(",")
    if len(parts) != 2:
        raise argparse.ArgumentTypeError(f"expected two comma-separated values, got {text!r}")
    try:
        return int(parts[0]), int(parts[1])
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected integers, got {text!r}")


def _parse_init(text: str) -> int:
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"init must be +1 or -1, got {text!r}")
    if v not in (-1, 1):
        raise argparse.ArgumentTypeError(f"init must be +1 or -1, got {text!r}")
    return v


def _parse_init_pair(text: str) -> tuple[int, int]:
    a, b = _parse_pair(text)
    if a not in (-1, 1) or b not in (-1, 1):
        raise argparse.ArgumentTypeError(f"inits must each be +1 or -1, got {text!r}")
    return a, b


def _load_fixture(name: str):
    if name == "builtin":
        return fixtures.builtin_geometry(), fixtures.builtin_memories()
    root = Path(name)
    return (
        load_geometry_file(root / "geometry.json"),
        load_memories_file(root / "memories.json"),
    )


def _add_policy_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--sign-policy", choices=SIGN_POLICIES, default="plus")
    p.add_argument("--update-window", choices=UPDATE_WINDOWS, default="strict")
    p.add_argument("--conflict-policy", choices=CONFLICT_POLICIES, default="first_writer")
    p.add_argument("--lane-order", type=_parse_pair, default=(1, 2), metavar="A,B")
    p.add_argument("--visibility", choices=VISIBILITIES, default="same_round")
    p.add_argument("--blocked", choices=BLOCKED_POLICIES, default="pause")


def cmd_generate(args) -> int:
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    rng = np.random.default_rng(args.seed)
    geom = generate_geometry(rng, args.n, args.range)
    mems = generate_memories(rng, args.memories, args.n)
    save_geometry(geom, out / "geometry.json")
    save_memories(mems, out / "memories.json")
    digest = hashlib.sha256(geom.coords.tobytes() + mems.tobytes()).hexdigest()[:16]
    print(f"wrote {out / 'geometry.json'} and {out / 'memories.json'} (digest {digest})")
    return 0


def cmd_recall(args) -> int:
    geom, mems = _load_fixture(args.fixture)
    d = distance_matrix(geom)
    perm = proximity_permutation(d, args.start)
    T = hebbian_weights(mems)
    rng = np.random.default_rng(args.seed)
    result = proximity_recall(T, perm, args.init, mems=mems,
                              sign_policy=args.sign_policy, rng=rng)
    out = result.outcome
    if out.exact:
        polarity = "" if out.polarity == 1 else " (negated polarity)"
        print(f"ExactMatch memory {out.nearest}{polarity}")
    else:
        print(f"PseudoMemory, Hamming {out.distance} from memory {out.nearest}")
    print(f"rounds: {result.rounds}, early convergence round: {result.early_convergence_round}")
    print(f"final (sequence coords): {result.final.tolist()}")
    if args.trace:
        write_trace_jsonl(result, args.trace)
        print(f"trace written to {args.trace}")
    return 0


def cmd_interplay(args) -> int:
    geom, mems = _load_fixture(args.fixture)
    policies = InterplayPolicies(
        sign_policy=args.sign_policy,
        conflict_policy=args.conflict_policy,
        lane_order=args.lane_order,
        visibility=args.visibility,
        blocked=args.blocked,
        update_window=args.update_window,
    )
    session = init_interplay(geom, mems, args.pair, args.inits,
                             policies=policies, seed=args.seed)
    result = run_interplay(session)
    print(f"rounds: {result.rounds_total} (with >=1 clamp: {result.rounds_active})")
    print(f"lanes agree after de-permutation: {result.agree}")
    for lane, out in zip((1, 2), result.outcomes):
        kind = "ExactMatch" if out.exact else f"PseudoMemory (Hamming {out.distance})"
        print(f"lane {lane}: {kind}, nearest memory {out.nearest}")
    print(f"conflicts: {result.conflict_count}")
    if args.render_rounds:
        print(render_round_trace(result))
    if args.trace:
        write_interplay_trace_jsonl(result, args.trace)
        print(f"trace written to {args.trace}")
    return 0


def cmd_replicate(args) -> int:
    report = replay_fixture()
    if args.report:
        with open(args.report, "w", encoding="utf-8") as f:
            f.write(report.to_json())
        print(f"report written to {args.report}")
    if args.text:
        with open(args.text, "w", encoding="utf-8") as f:
            f.write(report.to_text())
        print(f"text report written to {args.text}")
    if not args.report and not args.text:
        print(report.to_text())
    statuses = {it.key: it.status for it in report.items}
    for key, status in statuses.items():
        print(f"{key}: {status}")
    print(f"exact tier ok: {report.exact_tier_ok}")
    return 0 if report.exact_tier_ok else 1


def cmd_batch(args) -> int:
    config = ExperimentConfig.from_json_file(args.config)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    stats, records = run_batch(config, workers=args.workers)
    write_statistics_json(stats, out / "statistics.json")
    write_trials_csv(records, out / "trials.csv")
    print(f"trials: {stats.trials}, runs: {stats.runs}")
    print(f"exact rate: {stats.exact_rate:.4f}, pseudo rate: {stats.pseudo_rate:.4f}")
    print(f"wrote {out / 'statistics.json'} and {out / 'trials.csv'}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="proxmem",
        description="proximity-ordered B-matrix associative memory simulator",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("generate", help="write geometry and memory fixture files")
    p.add_argument("--seed", type=int, default=_default_seed())
    p.add_argument("--n", type=int, default=20)
    p.add_argument("--range", type=_parse_range, default=(0, 9), metavar="LO:HI")
    p.add_argument("--memories", type=int, default=3)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_generate)

    p = sub.add_parser("recall", help="single-source clamped recall")
    p.add_argument("--fixture", required=True, help="'builtin' or a fixture directory")
    p.add_argument("--start", type=int, required=True, help="start neuron label (1-based)")
    p.add_argument("--init", type=_parse_init, default=1)
    p.add_argument("--sign-policy", choices=SIGN_POLICIES, default="plus")
    p.add_argument("--seed", type=int, default=_default_seed())
    p.add_argument("--trace", help="write a JSON-lines trace here")
    p.set_defaults(func=cmd_recall)

    p = sub.add_parser("interplay", help="dual-source recall")
    p.add_argument("--fixture", required=True)
    p.add_argument("--pair", type=_parse_pair, required=True, metavar="A,B")
    p.add_argument("--inits", type=_parse_init_pair, default=(1, -1), metavar="X,Y")
    _add_policy_flags(p)
    p.add_argument("--seed", type=int, default=_default_seed())
    p.add_argument("--trace")
    p.add_argument("--render-rounds", action="store_true",
                   help="print rounds as paired labeled state rows")
    p.set_defaults(func=cmd_interplay)

    p = sub.add_parser("replicate", help="replay the embedded fixture and report")
    p.add_argument("--report", help="write the structured JSON report here")
    p.add_argument("--text", help="write the human-readable report here")
    p.set_defaults(func=cmd_replicate)

    p = sub.add_parser("batch", help="run a config-driven Monte Carlo batch")
    p.add_argument("--config", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--workers", type=int, default=1)
    p.set_defaults(func=cmd_batch)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ProxmemError as e:
        print(f"error: {e}", file=sys.stderr)
        return 1
    except OSError as e:
        print(f"io error: {e}", file=sys.stderr)
        return 2
    except json.JSONDecodeError as e:
        print(f"parse error: {e}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
