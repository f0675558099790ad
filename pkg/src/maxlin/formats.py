"""Text formats: weighted systems, expansions, vector sets, DIMACS CNF, CSP.

All variable indices are 1-based on disk and 0-based in memory.  Rationals
are written in lowest terms as ``p`` or ``p/q``; floating-point notation is
rejected.  Comment lines start with ``c`` and are ignored everywhere.
"""
from __future__ import annotations

import re
from fractions import Fraction

from .errors import MaxlinError, ParseError
from .f2core import F2Vector, LinearSystem
from .fourier import FourierExpansion
from .kset import VectorSet
from .reduce import ReductionTranscript
from .reductions import CnfFormula, CspConstraint, CspInstance

__all__ = [
    "parse_rational",
    "format_rational",
    "parse_system",
    "emit_system",
    "emit_transcript_comments",
    "parse_fourier",
    "emit_fourier",
    "parse_vectorset",
    "parse_cnf",
    "parse_csp",
]

_RATIONAL_RE = re.compile(r"^[+-]?\d+(/\d+)?$")


def parse_rational(token: str, line_no: int) -> Fraction:
    if not _RATIONAL_RE.match(token):
        raise ParseError(line_no, f"{token!r} is not a decimal rational (p or p/q)")
    try:
        return Fraction(token)
    except ZeroDivisionError:
        raise ParseError(line_no, f"{token!r} has a zero denominator") from None


def format_rational(value: Fraction) -> str:
    return str(value)


def _content_lines(text: str) -> list[tuple[int, list[str]]]:
    """Non-comment, non-blank lines as (1-based line number, tokens)."""
    out = []
    for i, line in enumerate(text.splitlines(), start=1):
        tokens = line.split()
        if not tokens or tokens[0] == "c":
            continue
        out.append((i, tokens))
    return out


def _parse_int(token: str, line_no: int, what: str) -> int:
    try:
        return int(token)
    except ValueError:
        raise ParseError(line_no, f"{what} must be an integer, got {token!r}") from None


def _parse_header(lines, expected: str):
    if not lines:
        raise ParseError(1, f"missing 'p {expected}' header")
    line_no, tokens = lines[0]
    if len(tokens) != 4 or tokens[0] != "p" or tokens[1] != expected:
        raise ParseError(line_no, f"header must be 'p {expected} <n> <count>'")
    n = _parse_int(tokens[2], line_no, "variable count")
    count = _parse_int(tokens[3], line_no, "entry count")
    if n < 0 or count < 0:
        raise ParseError(line_no, "header counts must be non-negative")
    return n, count, lines[1:]


def _parse_index_list(tokens, line_no, n, count):
    if len(tokens) != count:
        raise ParseError(line_no, f"expected {count} indices, got {len(tokens)}")
    indices = []
    previous = 0
    for tok in tokens:
        idx = _parse_int(tok, line_no, "variable index")
        if not 1 <= idx <= n:
            raise ParseError(line_no, f"index {idx} outside 1..{n}")
        if idx <= previous:
            raise ParseError(line_no, "indices must be strictly increasing")
        previous = idx
        indices.append(idx - 1)
    return indices


def parse_system(text: str) -> LinearSystem:
    """Parse the weighted-system format: 'p maxlin n m' then one equation per
    line as '<weight> <b> <t> <i1> ... <it>'."""
    lines = _content_lines(text)
    n, m, rows = _parse_header(lines, "maxlin")
    if len(rows) != m:
        where = rows[m][0] if len(rows) > m else (rows[-1][0] if rows else 1)
        raise ParseError(where, f"header declares {m} equations, found {len(rows)}")
    built = []
    for line_no, tokens in rows:
        if len(tokens) < 3:
            raise ParseError(line_no, "equation lines need '<weight> <b> <t> <indices>'")
        weight = parse_rational(tokens[0], line_no)
        if weight <= 0:
            raise ParseError(line_no, f"weights must be positive, got {tokens[0]}")
        rhs = _parse_int(tokens[1], line_no, "right-hand bit")
        if rhs not in (0, 1):
            raise ParseError(line_no, f"right-hand bit must be 0 or 1, got {rhs}")
        t = _parse_int(tokens[2], line_no, "support size")
        if t < 1:
            raise ParseError(line_no, "equations must involve at least one variable")
        indices = _parse_index_list(tokens[3:], line_no, n, t)
        built.append((indices, rhs, weight))
    return LinearSystem.build(n, built)


def emit_system(sys: LinearSystem) -> str:
    lines = [f"p maxlin {sys.n} {sys.m}"]
    for eq in sys.equations:
        support = eq.lhs.support()
        idx = " ".join(str(j + 1) for j in support)
        lines.append(f"{format_rational(eq.weight)} {eq.rhs} {len(support)} {idx}".rstrip())
    return "\n".join(lines) + "\n"


def emit_transcript_comments(tr: ReductionTranscript) -> str:
    """Transcript as 'c transcript ...' lines appended to an emitted system."""
    lines = [("c transcript kept " + " ".join(str(i + 1) for i in tr.kept_variables)).rstrip()]
    for j, deps in tr.deleted_variables:
        dep_list = " ".join(str(i + 1) for i in sorted(deps))
        lines.append(f"c transcript deleted {j + 1} {len(deps)} {dep_list}".rstrip())
    for event in tr.merge_log:
        survivor = "-" if event.surviving_id is None else str(event.surviving_id)
        lines.append(
            "c transcript merge "
            f"{event.merged_ids[0]} {event.merged_ids[1]} {survivor} "
            f"{format_rational(event.weight)}"
        )
    return "\n".join(lines) + "\n"


def parse_fourier(text: str) -> FourierExpansion:
    """Parse the expansion format: 'p fourier n terms', 'const <rational>',
    then one term per line as '<coefficient> <t> <i1> ... <it>'."""
    lines = _content_lines(text)
    n, count, rows = _parse_header(lines, "fourier")
    if not rows:
        raise ParseError(lines[0][0], "missing 'const <rational>' line")
    const_no, const_tokens = rows[0]
    if len(const_tokens) != 2 or const_tokens[0] != "const":
        raise ParseError(const_no, "second line must be 'const <rational>'")
    constant = parse_rational(const_tokens[1], const_no)
    rows = rows[1:]
    if len(rows) != count:
        where = rows[count][0] if len(rows) > count else (rows[-1][0] if rows else const_no)
        raise ParseError(where, f"header declares {count} terms, found {len(rows)}")
    terms: dict[frozenset[int], Fraction] = {}
    for line_no, tokens in rows:
        if len(tokens) < 2:
            raise ParseError(line_no, "term lines need '<coefficient> <t> <indices>'")
        coeff = parse_rational(tokens[0], line_no)
        if coeff == 0:
            raise ParseError(line_no, "zero coefficients are not stored")
        t = _parse_int(tokens[1], line_no, "term size")
        if t < 1:
            raise ParseError(line_no, "terms must involve at least one variable")
        subset = frozenset(_parse_index_list(tokens[2:], line_no, n, t))
        if subset in terms:
            raise ParseError(line_no, "duplicate term subset")
        terms[subset] = coeff
    return FourierExpansion(n, constant, terms)


def emit_fourier(f: FourierExpansion) -> str:
    lines = [f"p fourier {f.n} {f.term_count}", f"const {format_rational(f.constant)}"]
    for subset, coeff in f.sorted_terms():
        idx = " ".join(str(i + 1) for i in sorted(subset))
        lines.append(f"{format_rational(coeff)} {len(subset)} {idx}")
    return "\n".join(lines) + "\n"


def parse_vectorset(text: str) -> VectorSet:
    """Parse the vector-set format: 'p vecset n count' then 0/1 rows."""
    lines = _content_lines(text)
    n, count, rows = _parse_header(lines, "vecset")
    if len(rows) != count:
        where = rows[count][0] if len(rows) > count else (rows[-1][0] if rows else 1)
        raise ParseError(where, f"header declares {count} vectors, found {len(rows)}")
    seen: set[int] = set()
    vectors = []
    for line_no, tokens in rows:
        if len(tokens) != 1 or len(tokens[0]) != n or set(tokens[0]) - {"0", "1"}:
            raise ParseError(line_no, f"expected a 0/1 string of length {n}")
        vec = F2Vector.from01(tokens[0])
        if vec.bits in seen:
            raise ParseError(line_no, "duplicate vector")
        seen.add(vec.bits)
        vectors.append(vec)
    return VectorSet.from_vectors(n, vectors)


def parse_cnf(text: str) -> CnfFormula:
    """Parse DIMACS CNF; clauses are 0-terminated and may span lines."""
    lines = _content_lines(text)
    if not lines:
        raise ParseError(1, "missing 'p cnf' header")
    line_no, tokens = lines[0]
    if len(tokens) != 4 or tokens[0] != "p" or tokens[1] != "cnf":
        raise ParseError(line_no, "header must be 'p cnf <n> <m>'")
    n = _parse_int(tokens[2], line_no, "variable count")
    m = _parse_int(tokens[3], line_no, "clause count")
    if n < 0 or m < 0:
        raise ParseError(line_no, "header counts must be non-negative")
    stream = [(no, tok) for no, toks in lines[1:] for tok in toks]
    clauses: list[tuple[int, ...]] = []
    current: list[int] = []
    clause_line = line_no
    for no, tok in stream:
        lit = _parse_int(tok, no, "literal")
        if not current:
            clause_line = no
        if lit == 0:
            if not current:
                raise ParseError(no, "empty clause")
            seen = set()
            for entry in current:
                var = abs(entry)
                if var > n:
                    raise ParseError(clause_line, f"literal {entry} exceeds variable count {n}")
                if var in seen:
                    raise ParseError(clause_line, f"clause repeats variable {var}")
                seen.add(var)
            clauses.append(tuple(current))
            current = []
        else:
            current.append(lit)
    if current:
        raise ParseError(stream[-1][0], "last clause is not terminated by 0")
    if len(clauses) != m:
        raise ParseError(stream[-1][0] if stream else line_no,
                         f"header declares {m} clauses, found {len(clauses)}")
    return CnfFormula(n, tuple(clauses))


def parse_csp(text: str) -> CspInstance:
    """Parse the CSP format: 'p csp n count', then per constraint a line
    '<arity> <i1> ... <ir> <|V|>' followed by |V| rows of +-1 tuples."""
    lines = _content_lines(text)
    n, count, rows = _parse_header(lines, "csp")
    constraints = []
    pos = 0
    for _ in range(count):
        if pos >= len(rows):
            raise ParseError(rows[-1][0] if rows else 1, f"expected {count} constraints")
        line_no, tokens = rows[pos]
        pos += 1
        if len(tokens) < 3:
            raise ParseError(line_no, "constraint lines need '<arity> <indices> <|V|>'")
        arity = _parse_int(tokens[0], line_no, "arity")
        if arity < 1:
            raise ParseError(line_no, "arity must be at least 1")
        if len(tokens) != arity + 2:
            raise ParseError(line_no, f"expected {arity} indices plus |V|")
        variables = []
        for tok in tokens[1 : 1 + arity]:
            idx = _parse_int(tok, line_no, "variable index")
            if not 1 <= idx <= n:
                raise ParseError(line_no, f"index {idx} outside 1..{n}")
            if idx - 1 in variables:
                raise ParseError(line_no, f"constraint repeats variable {idx}")
            variables.append(idx - 1)
        v_count = _parse_int(tokens[-1], line_no, "satisfying-point count")
        if not 1 <= v_count <= 2**arity:
            raise ParseError(line_no, f"|V| must be between 1 and 2^{arity}")
        points = set()
        for _ in range(v_count):
            if pos >= len(rows):
                raise ParseError(line_no, f"constraint needs {v_count} satisfying rows")
            row_no, row_tokens = rows[pos]
            pos += 1
            if len(row_tokens) != arity:
                raise ParseError(row_no, f"expected {arity} entries of -1 or 1")
            point = []
            for tok in row_tokens:
                value = _parse_int(tok.lstrip("+") if tok.startswith("+") else tok, row_no, "entry")
                if value not in (-1, 1):
                    raise ParseError(row_no, f"entries must be -1 or 1, got {tok!r}")
                point.append(value)
            point_t = tuple(point)
            if point_t in points:
                raise ParseError(row_no, "duplicate satisfying point")
            points.add(point_t)
        constraints.append(CspConstraint(tuple(variables), frozenset(points)))
    if pos != len(rows):
        raise ParseError(rows[pos][0], "trailing content after the declared constraints")
    try:
        return CspInstance(n, tuple(constraints))
    except MaxlinError as exc:
        raise ParseError(rows[0][0] if rows else 1, str(exc)) from None
