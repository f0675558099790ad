"""Reduction rules for weighted F2 systems and the transcript to undo them.

Rule 2 merges equations sharing a left-hand side (summing or cancelling
weights); rule 1 projects the system onto an independent column basis.
Neither changes the maximum excess, and the transcript lets any assignment
of the reduced system be lifted back to the original at equal excess.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import DimensionMismatchError, MaxlinError
from .f2core import Assignment, Equation, F2Vector, LinearSystem, rref

__all__ = [
    "MergeEvent",
    "ReductionTranscript",
    "apply_rule1",
    "apply_rule2",
    "make_irreducible",
    "lift_assignment",
    "replay_transcript",
    "is_irreducible",
]


@dataclass(frozen=True)
class MergeEvent:
    """One pairwise rule-2 merge; surviving_id is None when the pair cancelled."""

    merged_ids: tuple[int, int]
    surviving_id: int | None
    weight: Fraction


@dataclass(frozen=True)
class ReductionTranscript:
    """Everything needed to replay a reduction or lift an assignment back.

    Variable indices are original (0-based).  ``kept_variables[i]`` is the
    original index of reduced variable i; ``deleted_variables`` lists, in
    deletion order, each dropped column with the kept columns whose sum it
    equalled at deletion time.
    """

    original_n: int
    reduced_n: int
    kept_variables: tuple[int, ...]
    deleted_variables: tuple[tuple[int, frozenset[int]], ...] = ()
    merge_log: tuple[MergeEvent, ...] = ()

    def __post_init__(self) -> None:
        if len(self.kept_variables) != self.reduced_n:
            raise MaxlinError("kept_variables must have one entry per reduced variable")
        deleted = {j for j, _ in self.deleted_variables}
        if len(deleted) != len(self.deleted_variables):
            raise MaxlinError("a variable may be deleted only once")
        if deleted & set(self.kept_variables):
            raise MaxlinError("a variable cannot be both kept and deleted")

    def is_identity(self) -> bool:
        return (
            self.original_n == self.reduced_n
            and not self.deleted_variables
            and not self.merge_log
        )


def _identity_transcript(n: int) -> ReductionTranscript:
    return ReductionTranscript(n, n, tuple(range(n)))


def _merge_pair(a: Equation, b: Equation, new_id: int) -> Equation | None:
    """Rule 2 on two equations with equal lhs; None means both cancel."""
    if a.rhs == b.rhs:
        return Equation(a.lhs, a.rhs, a.weight + b.weight, new_id)
    if a.weight == b.weight:
        return None
    keep = a if a.weight > b.weight else b
    return Equation(a.lhs, keep.rhs, abs(a.weight - b.weight), new_id)


def _apply_rule2_logged(sys: LinearSystem) -> tuple[LinearSystem, tuple[MergeEvent, ...]]:
    groups: dict[int, list[Equation]] = {}
    for eq in sys.equations:
        groups.setdefault(eq.lhs.bits, []).append(eq)
    if all(len(g) == 1 for g in groups.values()):
        return sys, ()
    next_id = sys.next_id
    out: list[Equation] = []
    events: list[MergeEvent] = []
    for eqs in groups.values():
        if len(eqs) == 1:
            out.append(eqs[0])
            continue
        cur: Equation | None = eqs[0]
        for nxt in eqs[1:]:
            if cur is None:
                cur = nxt
                continue
            merged = _merge_pair(cur, nxt, next_id)
            if merged is None:
                events.append(MergeEvent((cur.eq_id, nxt.eq_id), None, Fraction(0)))
            else:
                events.append(MergeEvent((cur.eq_id, nxt.eq_id), merged.eq_id, merged.weight))
                next_id += 1
            cur = merged
        if cur is not None:
            out.append(cur)
    return LinearSystem(sys.n, tuple(out), next_id), tuple(events)


def apply_rule2(sys: LinearSystem) -> LinearSystem:
    """Merge all equations sharing a left-hand side; idempotent."""
    merged, _ = _apply_rule2_logged(sys)
    return merged


def apply_rule1(sys: LinearSystem) -> tuple[LinearSystem, ReductionTranscript]:
    """Delete every variable outside the leftmost independent column set.

    The projection is excess-preserving: each deleted column equals a sum
    of kept columns, recorded in the transcript.
    """
    pivots, reduced_rows = rref([eq.lhs.bits for eq in sys.equations], sys.n)
    rank = len(pivots)
    if rank == sys.n:
        return sys, _identity_transcript(sys.n)
    kept = tuple(pivots)
    pivot_set = set(pivots)
    deleted = []
    for j in range(sys.n):
        if j in pivot_set:
            continue
        deps = frozenset(pivots[r] for r in range(rank) if reduced_rows[r] >> j & 1)
        deleted.append((j, deps))
    new_eqs = []
    for eq in sys.equations:
        bits = 0
        for new_idx, old in enumerate(kept):
            if eq.lhs.bits >> old & 1:
                bits |= 1 << new_idx
        # a nonzero row restricted to pivot columns stays nonzero
        assert bits != 0
        new_eqs.append(Equation(F2Vector(rank, bits), eq.rhs, eq.weight, eq.eq_id))
    out = LinearSystem(rank, tuple(new_eqs), sys.next_id)
    return out, ReductionTranscript(sys.n, rank, kept, tuple(deleted))


def make_irreducible(sys: LinearSystem) -> tuple[LinearSystem, ReductionTranscript]:
    """Alternate rule 2 then rule 1 to a fixed point.

    Rule 2 only lowers m and rule 1 only lowers n, so the loop terminates.
    """
    kept_map = list(range(sys.n))
    deleted_all: list[tuple[int, frozenset[int]]] = []
    merges_all: list[MergeEvent] = []
    cur = sys
    while True:
        merged, events = _apply_rule2_logged(cur)
        projected, tr = apply_rule1(merged)
        if not events and not tr.deleted_variables:
            cur = projected
            break
        merges_all.extend(events)
        if tr.deleted_variables:
            deleted_all.extend(
                (kept_map[j], frozenset(kept_map[i] for i in deps))
                for j, deps in tr.deleted_variables
            )
            kept_map = [kept_map[p] for p in tr.kept_variables]
        cur = projected
    transcript = ReductionTranscript(
        sys.n, cur.n, tuple(kept_map), tuple(deleted_all), tuple(merges_all)
    )
    return cur, transcript


def lift_assignment(tr: ReductionTranscript, reduced: Assignment) -> Assignment:
    """Extend a reduced assignment to the original variables.

    Deleted variables become 0 and kept variables are copied through the
    column map; this preserves the excess of every reduced assignment
    exactly, because each equation reads the same value either way.
    """
    if reduced.n != tr.reduced_n:
        raise DimensionMismatchError(
            f"assignment has {reduced.n} variables, transcript expects {tr.reduced_n}"
        )
    bits = 0
    for i, orig in enumerate(tr.kept_variables):
        if reduced.bits >> i & 1:
            bits |= 1 << orig
    return Assignment(tr.original_n, bits)


def replay_transcript(tr: ReductionTranscript, original: LinearSystem) -> LinearSystem:
    """Re-derive the reduced system from the original plus the transcript.

    Column deletions commute with merging, so the replay restricts all rows
    to the kept columns first and then folds equal-lhs groups exactly as
    rule 2 does, consuming the recorded merge log and validating every
    event against it; the result must be bit-identical to the reduction's
    output.
    """
    if original.n != tr.original_n:
        raise DimensionMismatchError(
            f"system has {original.n} variables, transcript expects {tr.original_n}"
        )
    groups: dict[int, list[Equation]] = {}
    for eq in original.equations:
        bits = 0
        for new_idx, old in enumerate(tr.kept_variables):
            if eq.lhs.bits >> old & 1:
                bits |= 1 << new_idx
        projected = Equation(F2Vector(tr.reduced_n, bits), eq.rhs, eq.weight, eq.eq_id)
        groups.setdefault(bits, []).append(projected)
    log = list(tr.merge_log)
    consumed = 0
    out: list[Equation] = []
    for eqs in groups.values():
        cur: Equation | None = eqs[0]
        for nxt in eqs[1:]:
            if cur is None:
                cur = nxt
                continue
            if consumed == len(log):
                raise MaxlinError("transcript merge log ended early")
            event = log[consumed]
            consumed += 1
            if event.merged_ids != (cur.eq_id, nxt.eq_id):
                raise MaxlinError(
                    f"transcript expects merge {event.merged_ids}, "
                    f"replay reached ({cur.eq_id}, {nxt.eq_id})"
                )
            new_id = 0 if event.surviving_id is None else event.surviving_id
            merged = _merge_pair(cur, nxt, new_id)
            if (merged is None) != (event.surviving_id is None):
                raise MaxlinError(f"transcript merge outcome mismatch for {event.merged_ids}")
            if merged is not None and merged.weight != event.weight:
                raise MaxlinError(f"transcript merge weight mismatch for {event.merged_ids}")
            cur = merged
        if cur is not None:
            out.append(cur)
    if consumed != len(log):
        raise MaxlinError("transcript merge log has unused entries")
    return LinearSystem(tr.reduced_n, tuple(out))


def is_irreducible(sys: LinearSystem) -> bool:
    """True when rule 2 has nothing to merge and the lhs matrix has full rank."""
    if sys.has_duplicate_lhs():
        return False
    pivots, _ = rref([eq.lhs.bits for eq in sys.equations], sys.n)
    return len(pivots) == sys.n
