"""Replay of the shipped fixture against the published artifacts.

Every checkable published value gets a checklist item with one of four
statuses:

  reproduced                      - matches under the default conventions
  reproduced_under_variant        - matches under at least one grid variant
  reproduced_up_to_documented_defects - matches except at positions the
                                    curation log identifies as defective
  not_reproduced                  - no grid variant matches

The update conventions the source leaves open (zero-sign resolution,
update window, lane order, cross-clamp visibility, blocked handling) form
a 48-point grid; ``variant_search`` scores every combination against the
checklist and the report names the reproducing variant for each item.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, asdict

import numpy as np
from sklearn.model_selection import ParameterGrid

from . import fixtures
from .interplay import InterplayPolicies, init_interplay, run_interplay
from .memory import hebbian_weights, permute_memories
from .recall import proximity_recall
from .topology import distance_matrix, proximity_permutation, select_stimulus_pair

DEFAULT_VARIANT_GRID = {
    "sign_policy": ["plus", "minus"],
    "update_window": ["strict", "full_row"],
    "lane_order": [(1, 2), (2, 1)],
    "visibility": ["same_round", "next_round"],
    "blocked": ["pause", "advance", "lockstep"],
}

EXACT_TIER_KEYS = (
    "permutation_pi_x1",
    "permutation_pi_x2",
    "stimulus_pair",
    "r1mems_consistency",
    "r2mems_consistency",
)

SCORED_KEYS = (
    "recall_r1_plus_memory3",
    "recall_r2_plus_memory2",
    "recall_r2_minus_pseudo",
    "pseudo_position_4",
    "pseudo_matches_printed",
    "interplay_terminates",
    "interplay_lanes_agree",
    "interplay_rounds_12",
    "interplay_neuron13_error",
)


@dataclass
class ChecklistItem:
    key: str
    description: str
    status: str
    variant: dict | None = None
    details: dict | None = None

    def to_dict(self) -> dict:
        return asdict(self)


@dataclass
class VariantScore:
    variant: dict
    score: int
    reproduced: dict[str, bool]

    def to_dict(self) -> dict:
        return {"variant": self.variant, "score": self.score, "reproduced": self.reproduced}


@dataclass
class ReplicationReport:
    items: list[ChecklistItem]
    variant_table: list[VariantScore]
    curation: list[dict]

    def item(self, key: str) -> ChecklistItem:
        for it in self.items:
            if it.key == key:
                return it
        raise KeyError(key)

    @property
    def exact_tier_ok(self) -> bool:
        ok = ("reproduced", "reproduced_up_to_documented_defects")
        return all(self.item(k).status in ok for k in EXACT_TIER_KEYS)

    def to_dict(self) -> dict:
        return {
            "items": [it.to_dict() for it in self.items],
            "variant_table": [v.to_dict() for v in self.variant_table],
            "curation": self.curation,
            "exact_tier_ok": self.exact_tier_ok,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True) + "\n"

    def to_text(self) -> str:
        lines = ["fixture replication report", "=" * 26, ""]
        for it in self.items:
            lines.append(f"[{it.status}] {it.key}")
            lines.append(f"    {it.description}")
            if it.variant:
                lines.append(f"    variant: {it.variant}")
            if it.details:
                for k, v in it.details.items():
                    lines.append(f"    {k}: {v}")
        lines.append("")
        lines.append(f"exact tier ok: {self.exact_tier_ok}")
        lines.append("")
        lines.append("variant table (top 10 of %d)" % len(self.variant_table))
        for vs in self.variant_table[:10]:
            lines.append(f"    score {vs.score:2d}  {vs.variant}")
        lines.append("")
        lines.append("curation log")
        for note in self.curation:
            lines.append(f"    {note['key']}: [{note['artifact']}] {note['description']}")
        return "\n".join(lines) + "\n"


def _variant_key(variant: dict) -> tuple:
    return tuple(sorted((k, str(v)) for k, v in variant.items()))


def _policies_from_variant(variant: dict) -> InterplayPolicies:
    return InterplayPolicies(
        sign_policy=variant["sign_policy"],
        update_window=variant["update_window"],
        lane_order=tuple(variant["lane_order"]),
        visibility=variant["visibility"],
        blocked=variant["blocked"],
        conflict_policy="first_writer",
    )


def _variant_as_plain(variant: dict) -> dict:
    out = dict(variant)
    out["lane_order"] = list(out["lane_order"])
    return out


def _single_deletion_alignment(printed, derived) -> list[int]:
    """1-based indices whose removal makes a 21-entry row equal the derived one."""
    printed = list(printed)
    derived = list(derived)
    if len(printed) != len(derived) + 1:
        return []
    return [
        k + 1
        for k in range(len(printed))
        if printed[:k] + printed[k + 1:] == derived
    ]


def _evaluate_variant(variant: dict, geom, mems, d, T) -> dict[str, bool]:
    """Score the rule-dependent checklist items for one grid point."""
    results: dict[str, bool] = {}
    sign = variant["sign_policy"]
    pi1 = proximity_permutation(d, fixtures.STIMULUS_PAIR[0])
    pi2 = proximity_permutation(d, fixtures.STIMULUS_PAIR[1])

    res_a = proximity_recall(T, pi1, +1, mems=mems, sign_policy=sign)
    results["recall_r1_plus_memory3"] = res_a.outcome.exact and res_a.outcome.nearest == 3

    res_b = proximity_recall(T, pi2, +1, mems=mems, sign_policy=sign)
    results["recall_r2_plus_memory2"] = res_b.outcome.exact and res_b.outcome.nearest == 2

    res_c = proximity_recall(T, pi2, -1, mems=mems, sign_policy=sign)
    out_c = res_c.outcome
    results["recall_r2_minus_pseudo"] = (
        out_c.kind == "pseudo" and out_c.nearest == 3 and out_c.distance == 1
        and out_c.polarity == 1
    )
    diff = np.nonzero(res_c.final != permute_memories(mems, pi2)[2])[0]
    results["pseudo_position_4"] = diff.size == 1 and int(diff[0]) + 1 == 4
    results["pseudo_matches_printed"] = bool(
        np.array_equal(res_c.final, np.array(fixtures.PSEUDO_MEMORY_PRINTED))
    )

    try:
        session = init_interplay(
            geom, mems, fixtures.STIMULUS_PAIR, (+1, -1),
            policies=_policies_from_variant(variant), seed=0,
        )
        result = run_interplay(session)
    except Exception:
        for key in ("interplay_terminates", "interplay_lanes_agree",
                    "interplay_rounds_12", "interplay_neuron13_error"):
            results[key] = False
        return results

    target = mems[fixtures.INTERPLAY_TARGET_MEMORY - 1]
    results["interplay_terminates"] = True
    results["interplay_lanes_agree"] = result.agree
    results["interplay_rounds_12"] = result.rounds_total == fixtures.INTERPLAY_PRINTED_ROUNDS
    err_ok = True
    for net in result.finals_network:
        bad = np.nonzero(net != target)[0] + 1
        if bad.tolist() != [fixtures.INTERPLAY_ERROR_NEURON]:
            err_ok = False
    results["interplay_neuron13_error"] = err_ok
    return results


def variant_search(grid: dict | None = None) -> list[VariantScore]:
    """Score every update-convention combination against the checklist."""
    geom = fixtures.builtin_geometry()
    mems = fixtures.builtin_memories()
    d = distance_matrix(geom)
    T = hebbian_weights(mems)
    scores = []
    for variant in ParameterGrid(grid or DEFAULT_VARIANT_GRID):
        reproduced = _evaluate_variant(variant, geom, mems, d, T)
        scores.append(
            VariantScore(
                variant=_variant_as_plain(variant),
                score=sum(reproduced.values()),
                reproduced=reproduced,
            )
        )
    scores.sort(key=lambda vs: (-vs.score, sorted(vs.variant.items()).__repr__()))
    return scores


def _status_from_table(table: list[VariantScore], key: str, default_variant: dict) -> tuple[str, dict | None]:
    """reproduced if the default conventions match, else best variant, else not."""
    winners = [vs for vs in table if vs.reproduced.get(key)]
    if not winners:
        return "not_reproduced", None
    for vs in winners:
        if _variant_key(vs.variant) == _variant_key(default_variant):
            return "reproduced", None
    return "reproduced_under_variant", winners[0].variant


def replay_fixture(grid: dict | None = None) -> ReplicationReport:
    """Run every checkable published artifact and assemble the report."""
    geom = fixtures.builtin_geometry()
    mems = fixtures.builtin_memories()
    d = distance_matrix(geom)
    T = hebbian_weights(mems)
    items: list[ChecklistItem] = []
    default_variant = _variant_as_plain({
        "sign_policy": "plus", "update_window": "strict",
        "lane_order": (1, 2), "visibility": "same_round", "blocked": "pause",
    })

    # --- exact tier -------------------------------------------------------
    pi1 = proximity_permutation(d, 2)
    tie = (int(d.squared[1, 16]), int(d.squared[1, 19]))
    items.append(ChecklistItem(
        key="permutation_pi_x1",
        description="proximity ordering from neuron 2 matches the published listing",
        status="reproduced" if pi1.labels == fixtures.PI_X1 else "not_reproduced",
        details={
            "labels": list(pi1.labels),
            "tie_neurons_17_20_squared_distances": list(tie),
            "tie_broken_by_label": pi1.labels.index(17) < pi1.labels.index(20),
        },
    ))
    pi2 = proximity_permutation(d, 3)
    items.append(ChecklistItem(
        key="permutation_pi_x2",
        description="proximity ordering from neuron 3 matches the published listing",
        status="reproduced" if pi2.labels == fixtures.PI_X2 else "not_reproduced",
        details={"labels": list(pi2.labels)},
    ))
    pi18 = proximity_permutation(d, 18)
    items.append(ChecklistItem(
        key="permutation_from_18",
        description="proximity ordering from neuron 18 matches the quoted sequence",
        status="reproduced" if pi18.labels == fixtures.PI_FROM_18 else "not_reproduced",
    ))
    pair = select_stimulus_pair(geom)
    items.append(ChecklistItem(
        key="stimulus_pair",
        description="x-extreme selection returns neurons (2, 3)",
        status="reproduced" if pair == fixtures.STIMULUS_PAIR else "not_reproduced",
        details={"pair": list(pair)},
    ))

    r1_derived = permute_memories(mems, pi1)
    r1_printed = np.array(fixtures.R1MEMS_PRINTED)
    mismatches = {
        row + 1: (np.nonzero(r1_derived[row] != r1_printed[row])[0] + 1).tolist()
        for row in range(3)
    }
    documented = {1: [], 2: [], 3: [16, 17, 18]}
    r1_ok = all(mismatches[r] == documented[r] for r in (1, 2, 3))
    items.append(ChecklistItem(
        key="r1mems_consistency",
        description=(
            "permuting the memory set through pi_x1 matches the printed first "
            "permuted set, except at the documented defective entries of row 3"
        ),
        status="reproduced_up_to_documented_defects" if r1_ok else "not_reproduced",
        details={
            "mismatch_positions_by_row": mismatches,
            "documented_defects": documented,
            "curation_key": "r1mems_row3_entries",
        },
    ))

    r2_derived = permute_memories(mems, pi2)
    row2_exact = bool(np.array_equal(r2_derived[1], np.array(fixtures.R2MEMS_PRINTED[1])))
    removal1 = _single_deletion_alignment(fixtures.R2MEMS_PRINTED[0], r2_derived[0].tolist())
    removal3 = _single_deletion_alignment(fixtures.R2MEMS_PRINTED[2], r2_derived[2].tolist())
    items.append(ChecklistItem(
        key="r2mems_consistency",
        description=(
            "row 2 (the only printed row with 20 entries) matches exactly; "
            "rows 1 and 3 match after deleting one spurious printed entry"
        ),
        status=(
            "reproduced_up_to_documented_defects"
            if row2_exact and removal1 and removal3
            else "not_reproduced"
        ),
        details={
            "row2_exact": row2_exact,
            "row1_spurious_entry_candidates": removal1,
            "row3_spurious_entry_candidates": removal3,
            "curation_keys": ["r2mems_row1_length", "r2mems_row3_length"],
        },
    ))

    # --- rule-dependent tier ---------------------------------------------
    table = variant_search(grid)

    res_a = proximity_recall(T, pi1, +1, mems=mems, sign_policy="plus")
    status, variant = _status_from_table(table, "recall_r1_plus_memory3", default_variant)
    items.append(ChecklistItem(
        key="recall_r1_plus_memory3",
        description="first-sequence recall from a +1 seed retrieves memory 3 exactly",
        status=status, variant=variant,
        details={
            "outcome": res_a.outcome.kind,
            "nearest": res_a.outcome.nearest,
            "early_convergence_round": res_a.early_convergence_round,
            "total_rounds": res_a.rounds,
        },
    ))
    res_b = proximity_recall(T, pi2, +1, mems=mems, sign_policy="plus")
    status, variant = _status_from_table(table, "recall_r2_plus_memory2", default_variant)
    items.append(ChecklistItem(
        key="recall_r2_plus_memory2",
        description="second-sequence recall from a +1 seed retrieves memory 2 exactly",
        status=status, variant=variant,
        details={"outcome": res_b.outcome.kind, "nearest": res_b.outcome.nearest},
    ))
    res_c = proximity_recall(T, pi2, -1, mems=mems, sign_policy="plus")
    for key, desc in (
        ("recall_r2_minus_pseudo",
         "second-sequence recall from a -1 seed yields a Hamming-1 pseudo-memory near memory 3"),
        ("pseudo_position_4",
         "the pseudo-memory differs from memory 3 at sequence position 4 only"),
        ("pseudo_matches_printed",
         "the produced pseudo-memory equals the printed pseudo-memory vector"),
    ):
        status, variant = _status_from_table(table, key, default_variant)
        items.append(ChecklistItem(
            key=key, description=desc, status=status, variant=variant,
            details={
                "distance_to_memory_3": res_c.outcome.hamming[2],
                "zero_sum_rounds": list(res_c.zero_sum_rounds),
            } if key == "recall_r2_minus_pseudo" else None,
        ))

    # structural interplay facts under the default conventions
    session = init_interplay(geom, mems, fixtures.STIMULUS_PAIR, (+1, -1),
                             policies=_policies_from_variant(default_variant), seed=0)
    default_result = run_interplay(session)
    items.append(ChecklistItem(
        key="interplay_terminates",
        description="dual-source run fully clamps both lanes in fewer rounds than neurons",
        status="reproduced" if default_result.rounds_total < geom.n else "not_reproduced",
        details={
            "rounds_total": default_result.rounds_total,
            "rounds_active": default_result.rounds_active,
        },
    ))
    items.append(ChecklistItem(
        key="interplay_lanes_agree",
        description="under first-writer-wins the de-permuted lane vectors are identical",
        status="reproduced" if default_result.agree else "not_reproduced",
    ))

    for key, desc in (
        ("interplay_rounds_12", "the dual-source run completes in exactly 12 rounds"),
        ("interplay_neuron13_error",
         "both lanes end one bit away from memory 3, at neuron 13 in both"),
    ):
        status, variant = _status_from_table(table, key, default_variant)
        details = None
        if status == "reproduced_under_variant":
            rep = run_interplay(init_interplay(
                geom, mems, fixtures.STIMULUS_PAIR, (+1, -1),
                policies=_policies_from_variant(variant), seed=0,
            ))
            details = {
                "rounds_total": rep.rounds_total,
                "rounds_active": rep.rounds_active,
                "default_rounds_total": default_result.rounds_total,
            }
        items.append(ChecklistItem(key=key, description=desc, status=status,
                                   variant=variant, details=details))

    # round-0 reconciliation of the 21-entry printed init rows
    init_rows = fixtures.INTERPLAY_TRACE_PRINTED[0]
    session0 = init_interplay(geom, mems, fixtures.STIMULUS_PAIR, (+1, -1), seed=0)
    recon = [
        _single_deletion_alignment(init_rows[i], session0.initial_states[i].tolist())
        for i in (0, 1)
    ]
    items.append(ChecklistItem(
        key="interplay_round0_reconciliation",
        description=(
            "printed round-0 rows (21 entries each) match the derived initial "
            "cross-clamped states after dropping one spurious zero"
        ),
        status="reproduced_up_to_documented_defects" if recon[0] and recon[1] else "not_reproduced",
        details={
            "lane1_droppable_positions": recon[0],
            "lane2_droppable_positions": recon[1],
            "curation_key": "trace_rounds_0_2_length",
        },
    ))

    # per-round trace comparison under the best reproducing variant
    best_key = "interplay_rounds_12"
    winners = [vs for vs in table if vs.reproduced.get(best_key)]
    if winners:
        best = winners[0].variant
        rep = run_interplay(init_interplay(
            geom, mems, fixtures.STIMULUS_PAIR, (+1, -1),
            policies=_policies_from_variant(best), seed=0,
        ))
        per_round = {}
        mismatch_positions = set()
        for printed_round, printed_rows in enumerate(fixtures.INTERPLAY_TRACE_PRINTED):
            if printed_round == 0:
                derived_rows = [s.tolist() for s in rep.initial_states]
            elif printed_round <= len(rep.reports):
                derived_rows = [s.tolist() for s in rep.reports[printed_round - 1].states]
            else:
                per_round[printed_round] = "missing"
                continue
            row_status = []
            for lane in (0, 1):
                printed = list(printed_rows[lane])
                derived = derived_rows[lane]
                if len(printed) == len(derived) + 1:
                    ok = bool(_single_deletion_alignment(printed, derived))
                    row_status.append("match_after_deletion" if ok else "mismatch")
                else:
                    diff = [i + 1 for i in range(len(derived)) if printed[i] != derived[i]]
                    mismatch_positions.update(diff)
                    row_status.append("match" if not diff else f"mismatch at {diff}")
            per_round[printed_round] = row_status
        documented_cols = {12, 13, 14, 19}
        items.append(ChecklistItem(
            key="interplay_trace_rows",
            description=(
                "printed per-round state rows match the reproduced schedule, up "
                "to the documented row lengths and column transpositions"
            ),
            status=(
                "reproduced_up_to_documented_defects"
                if mismatch_positions.issubset(documented_cols)
                else "not_reproduced"
            ),
            variant=best,
            details={
                "per_round": {str(k): v for k, v in per_round.items()},
                "mismatch_columns": sorted(mismatch_positions),
                "curation_key": "trace_rounds_6_11_transpositions",
            },
        ))

    return ReplicationReport(
        items=items,
        variant_table=table,
        curation=[asdict(note) for note in fixtures.CURATION_NOTES],
    )
