"""Single-source B-matrix clamped recall.

The state starts with one seeded position and extends one position per
round along the proximity sequence: the value clamped at cursor c is the
sign of the B-matrix row restricted to the already-clamped prefix,

    value = sign( sum_{q < c} B[c][q] * state[q] ),

with zero sums resolved by a configurable policy. Once clamped, a value
never changes.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

from .errors import CursorClamped, SizeMismatch
from .memory import b_matrix, permute_memories, permute_weights
from .topology import PermutationSequence
from .validation import (
    check_bipolar_matrix,
    check_rng,
    check_sign_value,
    check_tri_state,
)

SIGN_POLICIES = ("plus", "minus", "coin")


def resolve_sign(h: int, sign_policy: str, rng=None) -> tuple[int, bool]:
    """Map a local field to +-1; returns (value, was_zero).

    "plus" and "minus" resolve a zero field deterministically; "coin"
    draws a fair +-1 from the supplied generator.
    """
    if h > 0:
        return 1, False
    if h < 0:
        return -1, False
    if sign_policy == "plus":
        return 1, True
    if sign_policy == "minus":
        return -1, True
    if sign_policy == "coin":
        if rng is None:
            raise ValueError("sign_policy 'coin' needs an rng")
        return (1 if rng.integers(0, 2) else -1), True
    raise ValueError(f"unknown sign policy {sign_policy!r}")


@dataclass(frozen=True)
class TraceStep:
    round: int
    position: int  # 1-based sequence position that was clamped
    value: int
    zero_sum: bool
    state: np.ndarray  # snapshot after the clamp


@dataclass(frozen=True)
class OutcomeClass:
    """Classification of a zero-free vector against a memory set.

    Both each memory and its negation are checked; ``polarity`` records
    which sign of the nearest memory matched best.
    """

    kind: str  # "exact" | "pseudo"
    nearest: int  # 1-based memory index
    polarity: int  # +1 if the vector is nearest to the memory, -1 to its negation
    distance: int  # Hamming distance to the nearest (signed) memory
    hamming: tuple[int, ...]  # per-memory distance to the stored polarity
    hamming_negated: tuple[int, ...]  # per-memory distance to the negation

    @property
    def exact(self) -> bool:
        return self.kind == "exact"


def classify_outcome(v, mems) -> OutcomeClass:
    """Hamming-classify v against every memory and its negation."""
    M = check_bipolar_matrix(mems)
    vec = np.asarray(v).ravel()
    if vec.shape[0] != M.shape[1]:
        raise SizeMismatch(f"vector length {vec.shape[0]} != memory length {M.shape[1]}")
    d_pos = (vec[None, :] != M).sum(axis=1)
    d_neg = M.shape[1] - d_pos
    best = np.minimum(d_pos, d_neg)
    nearest = int(np.argmin(best))
    polarity = 1 if d_pos[nearest] <= d_neg[nearest] else -1
    distance = int(best[nearest])
    return OutcomeClass(
        kind="exact" if distance == 0 else "pseudo",
        nearest=nearest + 1,
        polarity=polarity,
        distance=distance,
        hamming=tuple(int(x) for x in d_pos),
        hamming_negated=tuple(int(x) for x in d_neg),
    )


def recall_step(B, state, cursor: int, sign_policy: str = "plus", rng=None) -> tuple[int, np.ndarray]:
    """Clamp sequence position ``cursor`` (1-based) in place.

    Returns (value, state). The caller must skip positions that are
    already clamped; asking to re-clamp raises CursorClamped.
    """
    B = np.asarray(B)
    state = check_tri_state(state, n=B.shape[0])
    c = cursor - 1
    if not 0 <= c < B.shape[0]:
        raise SizeMismatch(f"cursor {cursor} out of range 1..{B.shape[0]}")
    if state[c] != 0:
        raise CursorClamped(f"position {cursor} is already clamped to {int(state[c])}")
    h = int(B[c, :c] @ state[:c])
    value, _ = resolve_sign(h, sign_policy, rng)
    state[c] = value
    return value, state


@dataclass
class RecallResult:
    final: np.ndarray  # zero-free vector in sequence coordinates
    steps: list[TraceStep]
    early_convergence_round: int | None
    zero_sum_rounds: tuple[int, ...]
    init: int
    outcome: OutcomeClass | None = None
    permutation: PermutationSequence | None = None
    network_final: np.ndarray | None = None  # de-permuted, when a permutation is known

    @property
    def rounds(self) -> int:
        return len(self.steps)


def _sign_image(B, state, sign_policy: str) -> np.ndarray:
    """Resolved sign of B @ state for every position (deterministic policies only)."""
    h = np.asarray(B) @ state
    zero_to = 1 if sign_policy != "minus" else -1
    return np.where(h > 0, 1, np.where(h < 0, -1, zero_to))


def single_recall(B, init: int, mems=None, sign_policy: str = "plus", rng=None,
                  record_trace: bool = True) -> RecallResult:
    """Run the full clamping cascade from a seeded first position.

    The trace records one step per round (cursor 2..n). Early convergence
    is the first round whose unclamped tail of sign(B state) already
    equals the eventual final tail; the cascade often settles on the
    retrieved memory well before the cursor reaches it.
    """
    B = np.asarray(B)
    n = B.shape[0]
    init = check_sign_value(init)
    rng = check_rng(rng) if sign_policy == "coin" else rng
    state = np.zeros(n, dtype=np.int64)
    state[0] = init
    steps: list[TraceStep] = []
    zero_rounds: list[int] = []
    for c in range(1, n):
        h = int(B[c, :c] @ state[:c])
        value, was_zero = resolve_sign(h, sign_policy, rng)
        state[c] = value
        if was_zero:
            zero_rounds.append(c)
        if record_trace:
            steps.append(TraceStep(round=c, position=c + 1, value=value,
                                   zero_sum=was_zero, state=state.copy()))
    final = state.copy()

    early = None
    if record_trace and sign_policy != "coin":
        for step in [None, *steps[:-1]]:
            rnd = 0 if step is None else step.round
            clamped = rnd + 1  # positions 1..clamped are set after round rnd
            if clamped >= n:
                break
            snapshot = np.zeros(n, dtype=np.int64)
            snapshot[:clamped] = final[:clamped]
            image = _sign_image(B, snapshot, sign_policy)
            if np.array_equal(image[clamped:], final[clamped:]):
                early = rnd
                break

    outcome = classify_outcome(final, mems) if mems is not None else None
    return RecallResult(final=final, steps=steps, early_convergence_round=early,
                        zero_sum_rounds=tuple(zero_rounds), init=init, outcome=outcome)


def proximity_recall(T, permutation: PermutationSequence, init: int, mems=None,
                     sign_policy: str = "plus", rng=None) -> RecallResult:
    """Recall along a proximity sequence, given network-coordinate inputs.

    T and mems are permuted into sequence coordinates, the B-matrix is
    extracted, and the result carries both the sequence-coordinate final
    vector and its de-permuted network-coordinate form.
    """
    Tp = permute_weights(T, permutation)
    B = b_matrix(Tp)
    mems_p = permute_memories(mems, permutation) if mems is not None else None
    result = single_recall(B, init, mems=mems_p, sign_policy=sign_policy, rng=rng)
    network = np.empty(permutation.n, dtype=np.int64)
    network[permutation.order] = result.final
    result.permutation = permutation
    result.network_final = network
    return result


def write_trace_jsonl(result: RecallResult, path) -> None:
    """One JSON record per iteration: round, state, new position, value."""
    with open(path, "w", encoding="utf-8") as f:
        for step in result.steps:
            rec = {
                "round": step.round,
                "state": step.state.tolist(),
                "new_position": step.position,
                "value": int(step.value),
            }
            f.write(json.dumps(rec) + "\n")
