"""Exact F2 linear algebra and the weighted-system data model.

Vectors are packed into Python ints (bit j = variable j, 0-based), so any
dimension works and XOR/equality are single integer operations.  Weights are
exact ``fractions.Fraction`` values and must stay positive.  All types are
immutable after construction and safe to share across workers.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, NamedTuple, Sequence

from .errors import DimensionMismatchError, EquationNotFoundError, MaxlinError

__all__ = [
    "F2Vector",
    "Equation",
    "LinearSystem",
    "Assignment",
    "Evaluation",
    "add_lhs",
    "evaluate",
    "rank_and_basis",
    "rref",
    "as_weight",
    "parity",
    "reverse_bits",
]


def as_weight(value) -> Fraction:
    """Coerce an int/str/Fraction to an exact Fraction; floats are rejected."""
    if isinstance(value, float):
        raise MaxlinError("floating-point weights are not supported; use int, str or Fraction")
    return Fraction(value)


def parity(x: int) -> int:
    return x.bit_count() & 1


def reverse_bits(x: int, n: int) -> int:
    """Reverse the low n bits of x, making variable 1 the most significant.

    Integer order on the result equals lexicographic order on the
    (v_1, ..., v_n) coordinate tuple, which is the canonical order used
    for every tie-break in the package.
    """
    r = 0
    for _ in range(n):
        r = (r << 1) | (x & 1)
        x >>= 1
    return r


def _check_packed(n: int, bits: int) -> None:
    if n < 0:
        raise MaxlinError("dimension must be non-negative")
    if bits < 0 or bits >> n != 0:
        raise MaxlinError(f"bit pattern {bits:#x} does not fit dimension {n}")


@dataclass(frozen=True)
class F2Vector:
    """A length-n vector over F2; addition is XOR, so v + v = 0."""

    n: int
    bits: int = 0

    def __post_init__(self) -> None:
        _check_packed(self.n, self.bits)

    @classmethod
    def zero(cls, n: int) -> F2Vector:
        return cls(n, 0)

    @classmethod
    def from_support(cls, n: int, support: Iterable[int]) -> F2Vector:
        bits = 0
        for j in support:
            if not 0 <= j < n:
                raise MaxlinError(f"variable index {j} outside 0..{n - 1}")
            if bits >> j & 1:
                raise MaxlinError(f"duplicate variable index {j}")
            bits |= 1 << j
        return cls(n, bits)

    @classmethod
    def from01(cls, text: str) -> F2Vector:
        bits = 0
        for j, ch in enumerate(text):
            if ch == "1":
                bits |= 1 << j
            elif ch != "0":
                raise MaxlinError(f"invalid character {ch!r} in 0/1 vector")
        return cls(len(text), bits)

    def to01(self) -> str:
        return "".join("1" if self.bits >> j & 1 else "0" for j in range(self.n))

    def support(self) -> tuple[int, ...]:
        return tuple(j for j in range(self.n) if self.bits >> j & 1)

    def popcount(self) -> int:
        return self.bits.bit_count()

    def is_zero(self) -> bool:
        return self.bits == 0

    def min_var(self) -> int:
        """Lowest set coordinate (0-based)."""
        if self.bits == 0:
            raise MaxlinError("the zero vector has no support")
        return (self.bits & -self.bits).bit_length() - 1

    def lex_key(self) -> int:
        return reverse_bits(self.bits, self.n)

    def __xor__(self, other: F2Vector) -> F2Vector:
        if self.n != other.n:
            raise DimensionMismatchError(f"dimensions differ: {self.n} vs {other.n}")
        return F2Vector(self.n, self.bits ^ other.bits)


@dataclass(frozen=True)
class Assignment:
    """Values z_1..z_n packed like an F2Vector (bit j = z_{j+1})."""

    n: int
    bits: int = 0

    def __post_init__(self) -> None:
        _check_packed(self.n, self.bits)

    @classmethod
    def zero(cls, n: int) -> Assignment:
        return cls(n, 0)

    @classmethod
    def from_values(cls, values: Sequence[int]) -> Assignment:
        bits = 0
        for j, v in enumerate(values):
            if v not in (0, 1):
                raise MaxlinError("assignment values must be 0 or 1")
            if v:
                bits |= 1 << j
        return cls(len(values), bits)

    @classmethod
    def from01(cls, text: str) -> Assignment:
        vec = F2Vector.from01(text)
        return cls(vec.n, vec.bits)

    def values(self) -> tuple[int, ...]:
        return tuple(self.bits >> j & 1 for j in range(self.n))

    def to01(self) -> str:
        return "".join("1" if self.bits >> j & 1 else "0" for j in range(self.n))

    def flip(self, j: int) -> Assignment:
        if not 0 <= j < self.n:
            raise MaxlinError(f"variable index {j} outside 0..{self.n - 1}")
        return Assignment(self.n, self.bits ^ (1 << j))


@dataclass(frozen=True)
class Equation:
    """One weighted row: sum of the lhs support variables = rhs.

    The lhs may be zero only for transient sums (see add_lhs); a
    LinearSystem never stores such a row.
    """

    lhs: F2Vector
    rhs: int
    weight: Fraction
    eq_id: int

    def __post_init__(self) -> None:
        if self.rhs not in (0, 1):
            raise MaxlinError("rhs must be 0 or 1")
        object.__setattr__(self, "weight", as_weight(self.weight))
        if self.weight <= 0:
            raise MaxlinError("weights must be positive")
        if not isinstance(self.eq_id, int) or self.eq_id < 0:
            raise MaxlinError("equation ids must be non-negative integers")

    @property
    def n(self) -> int:
        return self.lhs.n

    def is_satisfied_by(self, assignment: Assignment) -> bool:
        if assignment.n != self.n:
            raise DimensionMismatchError(f"dimensions differ: {self.n} vs {assignment.n}")
        return parity(self.lhs.bits & assignment.bits) == self.rhs


def add_lhs(e1: Equation, e2: Equation) -> Equation:
    """Replace e2 by the sum of both equations.

    The lhs and rhs are XORed; weight and id stay those of e2, the equation
    being replaced.  The result may have a zero lhs (when both sides agree).
    """
    if e1.n != e2.n:
        raise DimensionMismatchError(f"dimensions differ: {e1.n} vs {e2.n}")
    return Equation(e1.lhs ^ e2.lhs, e1.rhs ^ e2.rhs, e2.weight, e2.eq_id)


@dataclass(frozen=True)
class LinearSystem:
    """Ordered multiset of equations over variables 0..n-1 with stable ids.

    Ids are assigned at construction and never reused; merged rows always
    get fresh ids drawn from ``next_id`` (which is bookkeeping and excluded
    from equality).
    """

    n: int
    equations: tuple[Equation, ...] = ()
    next_id: int = field(default=-1, compare=False)

    def __post_init__(self) -> None:
        object.__setattr__(self, "equations", tuple(self.equations))
        if self.n < 0:
            raise MaxlinError("dimension must be non-negative")
        by_id: dict[int, Equation] = {}
        for eq in self.equations:
            if eq.n != self.n:
                raise DimensionMismatchError(
                    f"equation {eq.eq_id} has dimension {eq.n}, system has {self.n}"
                )
            if eq.lhs.is_zero():
                raise MaxlinError(f"equation {eq.eq_id} has an empty left-hand side")
            if eq.eq_id in by_id:
                raise MaxlinError(f"duplicate equation id {eq.eq_id}")
            by_id[eq.eq_id] = eq
        min_next = max(by_id, default=-1) + 1
        if self.next_id < min_next:
            object.__setattr__(self, "next_id", min_next)
        object.__setattr__(self, "_by_id", by_id)

    @classmethod
    def build(cls, n: int, rows: Iterable[tuple]) -> LinearSystem:
        """Build from (support-or-F2Vector, rhs, weight) rows; ids run 0.."""
        eqs = []
        for i, (lhs, rhs, weight) in enumerate(rows):
            vec = lhs if isinstance(lhs, F2Vector) else F2Vector.from_support(n, lhs)
            eqs.append(Equation(vec, rhs, as_weight(weight), i))
        return cls(n, tuple(eqs))

    @property
    def m(self) -> int:
        return len(self.equations)

    @property
    def total_weight(self) -> Fraction:
        return sum((eq.weight for eq in self.equations), Fraction(0))

    @property
    def min_weight(self) -> Fraction:
        if not self.equations:
            raise MaxlinError("empty system has no minimum weight")
        return min(eq.weight for eq in self.equations)

    def equation(self, eq_id: int) -> Equation:
        try:
            return self._by_id[eq_id]
        except KeyError:
            raise EquationNotFoundError(f"no equation with id {eq_id}") from None

    def has_equation(self, eq_id: int) -> bool:
        return eq_id in self._by_id

    def ids(self) -> tuple[int, ...]:
        return tuple(eq.eq_id for eq in self.equations)

    def has_duplicate_lhs(self) -> bool:
        seen = set()
        for eq in self.equations:
            if eq.lhs.bits in seen:
                return True
            seen.add(eq.lhs.bits)
        return False

    def has_integral_weights(self) -> bool:
        return all(eq.weight.denominator == 1 for eq in self.equations)

    def content(self) -> tuple:
        """Id-insensitive view: (n, ordered (lhs bits, rhs, weight) triples)."""
        return (self.n, tuple((eq.lhs.bits, eq.rhs, eq.weight) for eq in self.equations))

    def replace_equations(self, equations: Iterable[Equation], next_id: int | None = None) -> LinearSystem:
        return LinearSystem(self.n, tuple(equations), self.next_id if next_id is None else next_id)


class Evaluation(NamedTuple):
    satisfied_weight: Fraction
    falsified_weight: Fraction
    excess: Fraction


def evaluate(sys: LinearSystem, assignment: Assignment) -> Evaluation:
    """Exact satisfied/falsified weights and their difference (the excess)."""
    if assignment.n != sys.n:
        raise DimensionMismatchError(f"dimensions differ: {sys.n} vs {assignment.n}")
    sat = Fraction(0)
    fals = Fraction(0)
    for eq in sys.equations:
        if parity(eq.lhs.bits & assignment.bits) == eq.rhs:
            sat += eq.weight
        else:
            fals += eq.weight
    return Evaluation(sat, fals, sat - fals)


def rref(rows: Sequence[int], n: int) -> tuple[list[int], list[int]]:
    """Reduced row echelon form over F2 with leftmost pivots.

    Returns (pivot columns ascending, reduced pivot rows aligned with them);
    non-pivot columns of the reduced rows express each dependent column of
    the input as a sum of pivot columns.
    """
    work = list(rows)
    pivots: list[int] = []
    reduced: list[int] = []
    for col in range(n):
        pivot_at = None
        for i, row in enumerate(work):
            if row >> col & 1:
                pivot_at = i
                break
        if pivot_at is None:
            continue
        prow = work.pop(pivot_at)
        for i in range(len(work)):
            if work[i] >> col & 1:
                work[i] ^= prow
        for i in range(len(reduced)):
            if reduced[i] >> col & 1:
                reduced[i] ^= prow
        pivots.append(col)
        reduced.append(prow)
    return pivots, reduced


def rank_and_basis(sys: LinearSystem) -> tuple[int, tuple[int, ...]]:
    """F2 rank of the lhs matrix and the lexicographically smallest
    independent column set (leftmost-pivot elimination)."""
    pivots, _ = rref([eq.lhs.bits for eq in sys.equations], sys.n)
    return len(pivots), tuple(pivots)
