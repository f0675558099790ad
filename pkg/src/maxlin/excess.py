"""Maximum-excess machinery: constructive lower bound, exhaustive oracle,
and the above-average decision pipeline.

The lower bound marks a sum-independent set of equations first, which
guarantees k markings at full weight; the oracle enumerates assignments
exactly (scaled to integers, evaluated in blocks so work can be spread over
threads without changing the canonical result); the decision procedure
routes each instance to whichever of the two applies.
"""
from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .errors import (
    MaxlinError,
    NonIntegralWeightError,
    OracleCapError,
    PreconditionError,
)
from .f2core import Assignment, F2Vector, LinearSystem, evaluate, parity, reverse_bits
from .kset import VectorSet, find_kset
from .algoh import reconstruct, run_h, sequence_chooser
from .reduce import is_irreducible, lift_assignment, make_irreducible

__all__ = [
    "AaInstance",
    "ExcessWitness",
    "lower_bound_assignment",
    "brute_force_max_excess",
    "decide_aa",
    "DEFAULT_ORACLE_CAP",
]

DEFAULT_ORACLE_CAP = 24
_BLOCK_BITS = 16
# scaled weights must leave headroom in int64 accumulation
_INT64_SAFE = 1 << 62


@dataclass(frozen=True)
class AaInstance:
    """An integral-weight system plus the above-average parameter k."""

    system: LinearSystem
    k: int

    def __post_init__(self) -> None:
        if not self.system.has_integral_weights():
            raise NonIntegralWeightError("above-average instances require integral weights")
        if not isinstance(self.k, int) or self.k < 1:
            raise MaxlinError(f"parameter k must be a positive integer, got {self.k!r}")


@dataclass(frozen=True)
class ExcessWitness:
    """An assignment together with its exact excess and how it was found."""

    assignment: Assignment
    excess: Fraction
    method: str  # "marking" or "brute_force"


def lower_bound_assignment(sys: LinearSystem, k: int) -> ExcessWitness:
    """Constructively achieve excess >= k * w_min on an irreducible system.

    Requires k >= 2, k <= m and (m+2)^(k-1) <= 2^n (exact integers).  Builds
    the lhs vectors plus zero, extracts k of them with no sum of two or more
    in the set, marks those equations first — none can be touched before its
    turn — and back-substitutes the transcript into an assignment.
    """
    if not isinstance(k, int) or k < 2:
        raise PreconditionError("k_too_small", f"k must be an integer >= 2, got {k!r}")
    if not is_irreducible(sys):
        raise PreconditionError("not_irreducible", "system must be irreducible (rules 1-2)")
    m = sys.m
    if k > m:
        raise PreconditionError("m_less_than_k", f"need k <= m, got k={k}, m={m}")
    if (m + 2) ** (k - 1) > 2**sys.n:
        raise PreconditionError(
            "threshold_exceeded", f"need (m+2)^(k-1) <= 2^n, got ({m}+2)^{k - 1} > 2^{sys.n}"
        )
    members = VectorSet.from_vectors(
        sys.n, [eq.lhs for eq in sys.equations] + [F2Vector.zero(sys.n)]
    )
    marked_first = find_kset(members, k - 1)
    by_bits = {eq.lhs.bits: eq.eq_id for eq in sys.equations}
    ids = [by_bits[v.bits] for v in marked_first]
    run = run_h(sys, sequence_chooser(ids, require_present=True))
    assignment = reconstruct(run.records, sys.n)
    excess = evaluate(sys, assignment).excess
    if excess < k * sys.min_weight or excess < run.total_marked_weight:
        raise MaxlinError("internal error: marking lower bound not met")
    return ExcessWitness(assignment, excess, "marking")


def _scaled_equations(sys: LinearSystem) -> tuple[list[tuple[int, int, int]], int]:
    """Equations as (reversed-bit mask, rhs, integer weight) plus the scale."""
    scale = math.lcm(*(eq.weight.denominator for eq in sys.equations), 1)
    data = [
        (reverse_bits(eq.lhs.bits, sys.n), eq.rhs, int(eq.weight * scale))
        for eq in sys.equations
    ]
    return data, scale


def _block_best_numpy(eq_data, start: int, stop: int) -> tuple[int, int]:
    idx = np.arange(start, stop, dtype=np.uint64)
    acc = np.zeros(stop - start, dtype=np.int64)
    for mask, rhs, weight in eq_data:
        x = idx & np.uint64(mask)
        for shift in (32, 16, 8, 4, 2, 1):
            x = x ^ (x >> np.uint64(shift))
        falsified = (x & np.uint64(1)).astype(np.int64) ^ rhs
        acc += weight * (1 - 2 * falsified)
    pos = int(np.argmax(acc))
    return int(acc[pos]), start + pos


def _block_best_python(eq_data, start: int, stop: int) -> tuple[int, int]:
    best_val = None
    best_at = start
    for v in range(start, stop):
        total = 0
        for mask, rhs, weight in eq_data:
            total += weight if parity(mask & v) == rhs else -weight
        if best_val is None or total > best_val:
            best_val, best_at = total, v
    return best_val, best_at


def brute_force_max_excess(
    sys: LinearSystem, *, cap: int = DEFAULT_ORACLE_CAP, workers: int = 1
) -> ExcessWitness:
    """Exact maximum excess with the lexicographically smallest maximizer.

    Assignments are enumerated in lexicographic order (z_1 most
    significant) in fixed-size blocks; blocks may be evaluated on several
    threads, and the merge keeps the best value with the smallest index, so
    the witness is identical for every worker count.
    """
    if sys.n > cap:
        raise OracleCapError(f"{sys.n} variables exceed the oracle cap of {cap}")
    if workers < 1:
        raise MaxlinError("workers must be >= 1")
    eq_data, scale = _scaled_equations(sys)
    total_scaled = sum(w for _, _, w in eq_data)
    block = _block_best_numpy if total_scaled < _INT64_SAFE else _block_best_python
    span = 1 << sys.n
    starts = range(0, span, 1 << _BLOCK_BITS)
    if workers == 1:
        results = [block(eq_data, s, min(s + (1 << _BLOCK_BITS), span)) for s in starts]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(
                pool.map(
                    lambda s: block(eq_data, s, min(s + (1 << _BLOCK_BITS), span)), starts
                )
            )
    best_val, best_at = results[0]
    for val, at in results[1:]:
        if val > best_val or (val == best_val and at < best_at):
            best_val, best_at = val, at
    assignment = Assignment(sys.n, reverse_bits(best_at, sys.n))
    return ExcessWitness(assignment, Fraction(best_val, scale), "brute_force")


def decide_aa(
    inst: AaInstance, *, oracle_cap: int = DEFAULT_ORACLE_CAP, workers: int = 1
) -> tuple[bool, ExcessWitness]:
    """Decide whether the maximum excess reaches k; always returns a witness.

    Pipeline: reduce to an irreducible system; an empty result answers no
    (for k >= 1); k = 1 on a nonempty system is always yes, with the plain
    marking run as witness; k <= m with (m+2)^(k-1) <= 2^n is yes through
    the marking lower bound (integral weights make w_min >= 1); otherwise
    n <= m holds after reduction, the exponent is small, and exhaustive
    search settles it.  Yes-witnesses achieve excess >= k; no-witnesses are
    exact maximizers.  Everything is lifted back to the original variables.
    """
    original = inst.system
    k = inst.k
    reduced, transcript = make_irreducible(original)

    def lifted(witness: ExcessWitness) -> ExcessWitness:
        assignment = lift_assignment(transcript, witness.assignment)
        excess = evaluate(original, assignment).excess
        if excess != witness.excess:
            raise MaxlinError("internal error: lifting changed the excess")
        return ExcessWitness(assignment, excess, witness.method)

    if reduced.m == 0:
        witness = brute_force_max_excess(reduced, cap=oracle_cap, workers=workers)
        return False, lifted(witness)
    if k == 1:
        run = run_h(reduced)
        assignment = reconstruct(run.records, reduced.n)
        excess = evaluate(reduced, assignment).excess
        if excess < 1:
            raise MaxlinError("internal error: nonempty irreducible system has excess >= 1")
        return True, lifted(ExcessWitness(assignment, excess, "marking"))
    if k <= reduced.m and (reduced.m + 2) ** (k - 1) <= 2**reduced.n:
        witness = lower_bound_assignment(reduced, k)
        if witness.excess < k:
            raise MaxlinError("internal error: lower bound below k despite integral weights")
        return True, lifted(witness)
    witness = brute_force_max_excess(reduced, cap=oracle_cap, workers=workers)
    return witness.excess >= k, lifted(witness)
