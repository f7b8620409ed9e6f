"""Dual-source simultaneous recall with cross-clamping.

Two lanes, one per stimulus site, advance through their own proximity
sequences in shared rounds. Whenever a lane clamps a neuron, the value is
copied into the other lane at that neuron's position there (cross-clamp).
A lane whose next position is already clamped is "blocked"; what happens
then is governed by the blocked-handling policy:

  pause    - the lane spends the round stepping past one blocked position
             and clamps nothing ("pump" only the free lane);
  advance  - the lane skips every blocked position and clamps the next
             free one in the same round;
  lockstep - like advance, but a lane idles while its next free position
             lies ahead of the other lane's next free position, so the
             two activation fronts never overtake each other.

Cross-clamp visibility is either same_round (a value lands in the other
lane immediately, ahead of that lane's turn) or next_round (all crosses
land when the round ends, so both lanes act on the round's opening state).
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

from .errors import DegeneratePair, NonTermination, SizeMismatch
from .memory import b_matrix, hebbian_weights, permute_memories, permute_weights
from .recall import SIGN_POLICIES, OutcomeClass, classify_outcome, resolve_sign
from .topology import NetworkGeometry, PermutationSequence, distance_matrix, proximity_permutation
from .validation import check_bipolar_matrix, check_rng, check_sign_value

CONFLICT_POLICIES = ("first_writer", "own_lane", "fair_draw")
BLOCKED_POLICIES = ("pause", "advance", "lockstep")
VISIBILITIES = ("same_round", "next_round")
UPDATE_WINDOWS = ("strict", "full_row")


@dataclass(frozen=True)
class InterplayPolicies:
    """Scheduling and update conventions for one session."""

    sign_policy: str = "plus"
    conflict_policy: str = "first_writer"
    lane_order: tuple[int, int] = (1, 2)
    visibility: str = "same_round"
    blocked: str = "pause"
    update_window: str = "strict"

    def __post_init__(self):
        if self.sign_policy not in SIGN_POLICIES:
            raise ValueError(f"sign_policy must be one of {SIGN_POLICIES}")
        if self.conflict_policy not in CONFLICT_POLICIES:
            raise ValueError(f"conflict_policy must be one of {CONFLICT_POLICIES}")
        if tuple(self.lane_order) not in ((1, 2), (2, 1)):
            raise ValueError("lane_order must be (1, 2) or (2, 1)")
        if self.visibility not in VISIBILITIES:
            raise ValueError(f"visibility must be one of {VISIBILITIES}")
        if self.blocked not in BLOCKED_POLICIES:
            raise ValueError(f"blocked must be one of {BLOCKED_POLICIES}")
        if self.update_window not in UPDATE_WINDOWS:
            raise ValueError(f"update_window must be one of {UPDATE_WINDOWS}")
        object.__setattr__(self, "lane_order", tuple(self.lane_order))

    def as_dict(self) -> dict:
        return {
            "sign_policy": self.sign_policy,
            "conflict_policy": self.conflict_policy,
            "lane_order": list(self.lane_order),
            "visibility": self.visibility,
            "blocked": self.blocked,
            "update_window": self.update_window,
        }


@dataclass(frozen=True)
class ConflictEvent:
    lane: int  # lane whose position held the existing value
    position: int  # 1-based position in that lane
    neuron: int  # 1-based neuron label
    existing: int
    incoming: int
    kept: int
    policy: str

    @property
    def incoming_won(self) -> bool:
        return self.kept == self.incoming


@dataclass(frozen=True)
class CrossEvent:
    source_lane: int
    neuron: int  # 1-based
    target_lane: int
    target_position: int  # 1-based
    value: int
    applied: bool  # value was written into a previously-zero position
    agreed: bool  # target already held the same value
    conflict: ConflictEvent | None = None


@dataclass(frozen=True)
class LaneAction:
    lane: int
    kind: str  # "clamped" | "idle" | "complete"
    position: int | None = None  # 1-based, for clamps
    value: int | None = None
    zero_sum: bool = False
    skipped: tuple[int, ...] = ()  # 1-based positions passed this round


@dataclass(frozen=True)
class RoundReport:
    round: int
    actions: tuple[LaneAction, ...]
    crosses: tuple[CrossEvent, ...]
    states: tuple[np.ndarray, ...]  # per-lane state after the round

    @property
    def clamped_any(self) -> bool:
        return any(a.kind == "clamped" for a in self.actions)


@dataclass
class _Lane:
    index: int  # 1 or 2
    start: int  # 1-based start neuron
    permutation: PermutationSequence
    T: np.ndarray  # permuted full weight matrix
    B: np.ndarray  # strict lower triangle of T
    mems: np.ndarray  # permuted memory set
    state: np.ndarray
    cursor: int = 1  # 0-based index of the next sequence position to consider

    @property
    def n(self) -> int:
        return self.state.shape[0]

    def next_free(self, view=None) -> int | None:
        v = self.state if view is None else view
        free = np.nonzero(v[self.cursor:] == 0)[0]
        return None if free.size == 0 else self.cursor + int(free[0])


@dataclass
class InterplaySession:
    lanes: list[_Lane]
    policies: InterplayPolicies
    rng: np.random.Generator
    pair: tuple[int, ...]
    inits: tuple[int, ...]
    round: int = 0
    reports: list[RoundReport] = field(default_factory=list)
    initial_states: tuple[np.ndarray, ...] | None = None

    def lane(self, index: int) -> _Lane:
        return self.lanes[index - 1]

    def other(self, index: int) -> "_Lane | None":
        return self.lanes[2 - index] if len(self.lanes) == 2 else None

    @property
    def complete(self) -> bool:
        return all((lane.state != 0).all() for lane in self.lanes)


@dataclass
class InterplayResult:
    pair: tuple[int, ...]
    inits: tuple[int, ...]
    policies: InterplayPolicies
    initial_states: tuple[np.ndarray, ...]
    reports: list[RoundReport]
    rounds_total: int
    rounds_active: int  # rounds in which at least one lane clamped
    finals: tuple[np.ndarray, ...]  # sequence coordinates
    finals_network: tuple[np.ndarray, ...]  # de-permuted
    agree: bool
    outcomes: tuple[OutcomeClass, ...]
    conflict_count: int

    @property
    def conflicts(self) -> list[ConflictEvent]:
        return [c.conflict for r in self.reports for c in r.crosses if c.conflict is not None]


def resolve_conflict(policy: str, existing: int, incoming: int, rng=None) -> tuple[int, bool]:
    """Pick the surviving value for a contested position.

    Returns (kept, incoming_won). ``first_writer`` and ``own_lane`` both
    keep the existing value (a clamped position is never recomputed, so
    the incoming side is always the foreign lane); ``fair_draw`` flips a
    seeded fair coin, the simplest equilibration between contradictory
    stimuli.
    """
    existing = check_sign_value(existing, "existing")
    incoming = check_sign_value(incoming, "incoming")
    if existing == incoming:
        raise ValueError("equal values must not reach the conflict resolver")
    if policy in ("first_writer", "own_lane"):
        kept = existing
    elif policy == "fair_draw":
        if rng is None:
            raise ValueError("fair_draw needs an rng")
        kept = incoming if rng.integers(0, 2) else existing
    else:
        raise ValueError(f"unknown conflict policy {policy!r}")
    return kept, kept == incoming


def init_interplay(geom: NetworkGeometry, mems, pair: tuple[int, int],
                   inits: tuple[int, int], policies: InterplayPolicies | None = None,
                   seed=None) -> InterplaySession:
    """Build a two-lane session from network-coordinate inputs.

    Each lane starts with its own init at sequence position 1 plus the
    other lane's init cross-clamped at the other start neuron's position,
    matching the round-0 states of a dual stimulation event.
    """
    a, b = int(pair[0]), int(pair[1])
    if a == b:
        raise DegeneratePair(f"interplay needs two distinct start neurons, got ({a}, {b})")
    M = check_bipolar_matrix(mems, n_columns=geom.n)
    if not (1 <= a <= geom.n and 1 <= b <= geom.n):
        raise SizeMismatch(f"pair {pair} out of range 1..{geom.n}")
    init_a = check_sign_value(inits[0], "inits[0]")
    init_b = check_sign_value(inits[1], "inits[1]")
    policies = policies or InterplayPolicies()
    d = distance_matrix(geom)
    T = hebbian_weights(M)

    lanes = []
    for index, (start, other_start, own_init, other_init) in enumerate(
        [(a, b, init_a, init_b), (b, a, init_b, init_a)], start=1
    ):
        perm = proximity_permutation(d, start)
        Tp = permute_weights(T, perm)
        state = np.zeros(geom.n, dtype=np.int64)
        state[0] = own_init
        state[perm.position_of(other_start) - 1] = other_init
        lanes.append(
            _Lane(index=index, start=start, permutation=perm, T=Tp,
                  B=b_matrix(Tp), mems=permute_memories(M, perm), state=state)
        )

    session = InterplaySession(
        lanes=lanes, policies=policies, rng=check_rng(seed),
        pair=(a, b), inits=(init_a, init_b),
    )
    session.initial_states = tuple(lane.state.copy() for lane in lanes)
    return session


def solo_interplay(geom: NetworkGeometry, mems, start: int, init: int,
                   policies: InterplayPolicies | None = None, seed=None) -> InterplaySession:
    """A session with the second stimulus source disabled.

    With no partner lane there is nothing to cross-clamp or to block on,
    so running this session is equivalent to single-source recall; the
    equivalence is pinned by a test.
    """
    M = check_bipolar_matrix(mems, n_columns=geom.n)
    init = check_sign_value(init)
    policies = policies or InterplayPolicies()
    d = distance_matrix(geom)
    T = hebbian_weights(M)
    perm = proximity_permutation(d, start)
    Tp = permute_weights(T, perm)
    state = np.zeros(geom.n, dtype=np.int64)
    state[0] = init
    lane = _Lane(index=1, start=start, permutation=perm, T=Tp, B=b_matrix(Tp),
                 mems=permute_memories(M, perm), state=state)
    session = InterplaySession(
        lanes=[lane], policies=policies, rng=check_rng(seed),
        pair=(start,), inits=(init,),
    )
    session.initial_states = (state.copy(),)
    return session


def _apply_cross(session: InterplaySession, source: _Lane, target: _Lane,
                 neuron0: int, value: int) -> CrossEvent:
    pos0 = int(target.permutation.inverse[neuron0])
    existing = int(target.state[pos0])
    conflict = None
    applied = False
    agreed = False
    if existing == 0:
        target.state[pos0] = value
        applied = True
    elif existing == value:
        agreed = True
    else:
        kept, _ = resolve_conflict(session.policies.conflict_policy, existing, value, session.rng)
        conflict = ConflictEvent(
            lane=target.index, position=pos0 + 1, neuron=neuron0 + 1,
            existing=existing, incoming=value, kept=kept,
            policy=session.policies.conflict_policy,
        )
        target.state[pos0] = kept
        applied = kept == value
    return CrossEvent(
        source_lane=source.index, neuron=neuron0 + 1, target_lane=target.index,
        target_position=pos0 + 1, value=value, applied=applied, agreed=agreed,
        conflict=conflict,
    )


def interplay_round(session: InterplaySession) -> RoundReport:
    """Advance both lanes one round; returns the per-round report."""
    pol = session.policies
    session.round += 1
    same_round = pol.visibility == "same_round"
    snaps = {lane.index: lane.state.copy() for lane in session.lanes}
    actions: list[LaneAction] = []
    crosses: list[CrossEvent] = []
    pending: list[tuple[_Lane, _Lane, int, int]] = []

    for li in pol.lane_order:
        if li > len(session.lanes):
            continue
        lane = session.lane(li)
        other = session.other(li)
        view = lane.state if same_round else snaps[li]

        if pol.blocked == "pause":
            if lane.cursor >= lane.n:
                actions.append(LaneAction(lane=li, kind="complete"))
                continue
            if view[lane.cursor] != 0:
                # one blocked position consumed per round, no clamp
                skipped = (lane.cursor + 1,)
                lane.cursor += 1
                actions.append(LaneAction(lane=li, kind="idle", skipped=skipped))
                continue
            pos = lane.cursor
            skipped: tuple[int, ...] = ()
        else:
            pos = lane.next_free(view)
            if pos is None:
                lane.cursor = lane.n
                actions.append(LaneAction(lane=li, kind="complete"))
                continue
            if pol.blocked == "lockstep" and other is not None:
                onf = other.next_free()  # live state: includes an earlier-in-round clamp
                if onf is not None and pos > onf:
                    actions.append(LaneAction(lane=li, kind="idle"))
                    continue
            skipped = tuple(p + 1 for p in range(lane.cursor, pos))

        if pol.update_window == "strict":
            h = int(lane.B[pos, :pos] @ view[:pos])
        else:
            h = int(lane.T[pos] @ view)  # full row; view[pos] is zero
        value, was_zero = resolve_sign(h, pol.sign_policy, session.rng)
        lane.state[pos] = value
        lane.cursor = pos + 1
        actions.append(
            LaneAction(lane=li, kind="clamped", position=pos + 1, value=value,
                       zero_sum=was_zero, skipped=skipped)
        )
        neuron0 = int(lane.permutation.order[pos])
        if other is not None:
            if same_round:
                crosses.append(_apply_cross(session, lane, other, neuron0, value))
            else:
                pending.append((lane, other, neuron0, value))

    for lane, other, neuron0, value in pending:
        crosses.append(_apply_cross(session, lane, other, neuron0, value))

    report = RoundReport(
        round=session.round,
        actions=tuple(actions),
        crosses=tuple(crosses),
        states=tuple(lane.state.copy() for lane in session.lanes),
    )
    session.reports.append(report)
    return report


def run_interplay(session: InterplaySession) -> InterplayResult:
    """Iterate rounds until both lanes are fully clamped."""
    n = session.lanes[0].n
    while not session.complete:
        if session.round >= 2 * n:
            raise NonTermination(
                f"interplay still incomplete after {session.round} rounds "
                f"(policies: {session.policies.as_dict()})"
            )
        interplay_round(session)

    finals = tuple(lane.state.copy() for lane in session.lanes)
    finals_network = []
    for lane in session.lanes:
        net = np.empty(n, dtype=np.int64)
        net[lane.permutation.order] = lane.state
        finals_network.append(net)
    outcomes = tuple(classify_outcome(lane.state, lane.mems) for lane in session.lanes)
    conflict_count = sum(
        1 for r in session.reports for c in r.crosses if c.conflict is not None
    )
    agree = len(finals_network) < 2 or bool(
        np.array_equal(finals_network[0], finals_network[1])
    )
    return InterplayResult(
        pair=session.pair, inits=session.inits, policies=session.policies,
        initial_states=session.initial_states, reports=list(session.reports),
        rounds_total=session.round,
        rounds_active=sum(1 for r in session.reports if r.clamped_any),
        finals=finals, finals_network=tuple(finals_network),
        agree=agree, outcomes=outcomes, conflict_count=conflict_count,
    )


def _fmt_state(state: np.ndarray) -> str:
    return "[" + " ".join(str(int(v)) for v in state) + "]"


def render_round_trace(result: InterplayResult, names: tuple[str, ...] | None = None) -> str:
    """Rounds as paired labeled state rows, for eyeball diffing."""
    names = names or tuple(f"seq(start {s})" for s in result.pair)
    lines = ["0"]
    lines += [f"{nm} = {_fmt_state(st)}" for nm, st in zip(names, result.initial_states)]
    for rep in result.reports:
        lines.append(str(rep.round))
        lines += [f"{nm} = {_fmt_state(st)}" for nm, st in zip(names, rep.states)]
    return "\n".join(lines) + "\n"


def write_interplay_trace_jsonl(result: InterplayResult, path) -> None:
    """One JSON record per round, mirroring RoundReport."""
    with open(path, "w", encoding="utf-8") as f:
        for rep in result.reports:
            rec = {
                "round": rep.round,
                "actions": [
                    {
                        "lane": a.lane,
                        "kind": a.kind,
                        "position": a.position,
                        "value": a.value,
                        "zero_sum": a.zero_sum,
                        "skipped": list(a.skipped),
                    }
                    for a in rep.actions
                ],
                "crosses": [
                    {
                        "source_lane": c.source_lane,
                        "neuron": c.neuron,
                        "target_lane": c.target_lane,
                        "target_position": c.target_position,
                        "value": c.value,
                        "applied": c.applied,
                        "agreed": c.agreed,
                        "conflict": None
                        if c.conflict is None
                        else {
                            "existing": c.conflict.existing,
                            "incoming": c.conflict.incoming,
                            "kept": c.conflict.kept,
                            "policy": c.conflict.policy,
                        },
                    }
                    for c in rep.crosses
                ],
                "states": [st.tolist() for st in rep.states],
            }
            f.write(json.dumps(rec) + "\n")
