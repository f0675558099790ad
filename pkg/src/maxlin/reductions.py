"""Bridges from exact-r SAT and bounded-arity CSP into weighted F2 systems,
plus the exact-threshold kernelization for arity-bounded systems.

Truth values live in {-1,+1} with -1 meaning true.  A clause or constraint
expands into a multilinear polynomial whose value encodes how far an
assignment sits above the random-assignment average; maximizing it is the
above-average question on the associated system.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Sequence

from .errors import MaxlinError, NonIntegralWeightError, PreconditionError
from .excess import DEFAULT_ORACLE_CAP, AaInstance, decide_aa
from .f2core import LinearSystem
from .fourier import FourierExpansion, eval_fourier, fourier_to_system
from .reduce import ReductionTranscript, make_irreducible

__all__ = [
    "CnfFormula",
    "CspConstraint",
    "CspInstance",
    "KernelOutcome",
    "sat_to_fourier",
    "satisfied_clause_count",
    "sat_satisfied_count_identity",
    "decide_sat_aa",
    "csp_to_fourier",
    "kernelize_rlin",
]


@dataclass(frozen=True)
class CnfFormula:
    """Multiset of clauses in DIMACS convention: signed 1-based literals."""

    n: int
    clauses: tuple[tuple[int, ...], ...]

    def __post_init__(self) -> None:
        if self.n < 0:
            raise MaxlinError("variable count must be non-negative")
        object.__setattr__(self, "clauses", tuple(tuple(c) for c in self.clauses))
        for clause in self.clauses:
            variables = set()
            for lit in clause:
                if lit == 0:
                    raise MaxlinError("literal 0 is not allowed")
                var = abs(lit)
                if var > self.n:
                    raise MaxlinError(f"literal {lit} exceeds variable count {self.n}")
                if var in variables:
                    raise MaxlinError(f"clause {clause} repeats variable {var}")
                variables.add(var)

    @property
    def m(self) -> int:
        return len(self.clauses)


@dataclass(frozen=True)
class CspConstraint:
    """An arity-r(f) constraint: variable tuple plus its satisfying points."""

    variables: tuple[int, ...]
    satisfying: frozenset[tuple[int, ...]]

    def __post_init__(self) -> None:
        object.__setattr__(self, "variables", tuple(self.variables))
        object.__setattr__(self, "satisfying", frozenset(tuple(v) for v in self.satisfying))
        arity = len(self.variables)
        if arity < 1:
            raise MaxlinError("constraints must touch at least one variable")
        if len(set(self.variables)) != arity:
            raise MaxlinError(f"constraint repeats a variable: {self.variables}")
        if not self.satisfying:
            raise MaxlinError("constraints must have at least one satisfying point")
        for point in self.satisfying:
            if len(point) != arity or any(v not in (-1, 1) for v in point):
                raise MaxlinError(f"satisfying point {point} must be a +-1 tuple of arity {arity}")

    @property
    def arity(self) -> int:
        return len(self.variables)


@dataclass(frozen=True)
class CspInstance:
    n: int
    constraints: tuple[CspConstraint, ...]

    def __post_init__(self) -> None:
        if self.n < 0:
            raise MaxlinError("variable count must be non-negative")
        object.__setattr__(self, "constraints", tuple(self.constraints))
        for cons in self.constraints:
            if any(not 0 <= v < self.n for v in cons.variables):
                raise MaxlinError(f"constraint variables {cons.variables} outside 0..{self.n - 1}")


@dataclass(frozen=True)
class KernelOutcome:
    """Either an immediate yes or the reduced system as the kernel.

    The reduced system and transcript are always carried so a witness can
    be produced (marking lower bound on the yes branch) and lifted back.
    """

    is_yes: bool
    reduced_system: LinearSystem
    transcript: ReductionTranscript
    k: int

    @property
    def kernel(self) -> LinearSystem | None:
        return None if self.is_yes else self.reduced_system


def sat_to_fourier(formula: CnfFormula, r: int) -> FourierExpansion:
    """Expand sum over clauses of [1 - prod (1 + eps_i x_i)] term by term.

    eps_i is +1 for a positive literal and -1 for a negated one; a falsified
    clause contributes 1 - 2^r and a satisfied one contributes 1.  The
    constant term is accumulated rather than assumed (each clause's own
    contribution cancels to zero).
    """
    if not isinstance(r, int) or r < 1:
        raise MaxlinError(f"clause arity r must be a positive integer, got {r!r}")
    constant = Fraction(0)
    coefficients: dict[frozenset[int], Fraction] = {}
    for clause in formula.clauses:
        if len(clause) != r:
            raise MaxlinError(f"clause {clause} does not have exactly {r} literals")
        variables = [abs(lit) - 1 for lit in clause]
        signs = [1 if lit > 0 else -1 for lit in clause]
        constant += 1
        for size in range(0, r + 1):
            for positions in combinations(range(r), size):
                product = 1
                for j in positions:
                    product *= signs[j]
                if size == 0:
                    constant -= product
                else:
                    subset = frozenset(variables[j] for j in positions)
                    coefficients[subset] = coefficients.get(subset, Fraction(0)) - product
    terms = {s: c for s, c in coefficients.items() if c != 0}
    return FourierExpansion(formula.n, constant, terms)


def satisfied_clause_count(formula: CnfFormula, point: Sequence[int]) -> int:
    """Clauses satisfied at a point of {-1,+1}^n (-1 means true)."""
    if len(point) != formula.n:
        raise MaxlinError(f"point has {len(point)} entries, expected {formula.n}")
    if any(v not in (-1, 1) for v in point):
        raise MaxlinError("point entries must be -1 or +1")
    count = 0
    for clause in formula.clauses:
        for lit in clause:
            value = point[abs(lit) - 1]
            if (lit > 0 and value == -1) or (lit < 0 and value == 1):
                count += 1
                break
    return count


def sat_satisfied_count_identity(formula: CnfFormula, point: Sequence[int]) -> tuple[int, Fraction]:
    """Satisfied-clause count s and the expansion's value g at the point.

    Asserts the bridge identity g = m - (m - s) * 2^r, which ties clause
    counting to the polynomial exactly.
    """
    arities = {len(c) for c in formula.clauses}
    if len(arities) > 1:
        raise MaxlinError(f"clauses have mixed arities {sorted(arities)}")
    r = arities.pop() if arities else 1
    s = satisfied_clause_count(formula, point)
    g = eval_fourier(sat_to_fourier(formula, r), point)
    assert g == formula.m - (formula.m - s) * 2**r
    return s, g


def decide_sat_aa(
    formula: CnfFormula,
    r: int,
    k: int,
    *,
    oracle_cap: int = DEFAULT_ORACLE_CAP,
    workers: int = 1,
) -> tuple[bool, tuple[int, ...]]:
    """Is there an assignment satisfying >= (1 - 2^-r) m + k 2^-r clauses?

    Decides through the expansion's system and translates the witness back
    through x_i = (-1)^{z_i}; the answer is re-validated by direct clause
    counting before being returned.
    """
    if r < 2:
        raise MaxlinError(f"exact-r SAT requires r >= 2, got {r}")
    if not isinstance(k, int) or k < 1:
        raise MaxlinError(f"parameter k must be a positive integer, got {k!r}")
    expansion = sat_to_fourier(formula, r)
    system, _constant = fourier_to_system(expansion)
    answer, witness = decide_aa(AaInstance(system, k), oracle_cap=oracle_cap, workers=workers)
    point = tuple(-1 if bit else 1 for bit in witness.assignment.values())
    s = satisfied_clause_count(formula, point)
    reaches = 2**r * s >= (2**r - 1) * formula.m + k
    if reaches != answer:
        raise MaxlinError("internal error: witness disagrees with clause counting")
    return answer, point


def csp_to_fourier(inst: CspInstance, r: int) -> FourierExpansion:
    """Expand the scaled satisfying-point indicators of every constraint.

    Each constraint f of arity r(f) contributes
    2^(r - r(f)) * sum over its satisfying points of [prod (1 + v_j x_ij) - 1];
    the result h satisfies h(x) = 2^r (s - E) with s the satisfied count and
    E the expected satisfied count under uniform random assignment.
    """
    if not isinstance(r, int) or r < 1:
        raise MaxlinError(f"arity bound r must be a positive integer, got {r!r}")
    constant = Fraction(0)
    coefficients: dict[frozenset[int], Fraction] = {}
    for cons in inst.constraints:
        if cons.arity > r:
            raise MaxlinError(f"constraint arity {cons.arity} exceeds the bound {r}")
        scale = 2 ** (r - cons.arity)
        for point in sorted(cons.satisfying):
            for size in range(0, cons.arity + 1):
                for positions in combinations(range(cons.arity), size):
                    product = 1
                    for j in positions:
                        product *= point[j]
                    if size == 0:
                        constant += scale * (product - 1)
                    else:
                        subset = frozenset(cons.variables[j] for j in positions)
                        coefficients[subset] = (
                            coefficients.get(subset, Fraction(0)) + scale * product
                        )
    terms = {s: c for s, c in coefficients.items() if c != 0}
    return FourierExpansion(inst.n, constant, terms)


def kernelize_rlin(sys: LinearSystem, r: int, k: int) -> KernelOutcome:
    """Exact-threshold kernelization for systems with at most r variables per
    equation.

    After reduction, m >= k together with (m+2)^(k-1) <= 2^n settles the
    instance as yes; otherwise the reduced system itself is the kernel —
    reduction preserves arity and the answer, and the failed threshold pins
    its variable count to O(k log k) for fixed r.
    """
    if not isinstance(r, int) or r < 1:
        raise MaxlinError(f"arity bound r must be a positive integer, got {r!r}")
    if not isinstance(k, int) or k < 2:
        raise PreconditionError("k_too_small", f"kernelization needs integer k >= 2, got {k!r}")
    if not sys.has_integral_weights():
        raise NonIntegralWeightError("kernelization requires integral weights")
    oversized = [eq.eq_id for eq in sys.equations if eq.lhs.popcount() > r]
    if oversized:
        raise MaxlinError(f"equations {oversized} have more than {r} variables")
    reduced, transcript = make_irreducible(sys)
    is_yes = reduced.m >= k and (reduced.m + 2) ** (k - 1) <= 2**reduced.n
    return KernelOutcome(is_yes, reduced, transcript, k)
