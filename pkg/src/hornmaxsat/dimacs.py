"""DIMACS CNF and classic WCNF reading and writing.

The parser works on a whitespace-delimited token stream, so a clause may span
several lines and a line may hold several clauses.  Comment lines (``c ...``)
are kept verbatim, minus the leading ``c `` marker.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Union

from .formula import CnfFormula, WcnfFormula


class DimacsError(ValueError):
    """Malformed input.  ``kind`` is one of the KIND_* constants below."""

    def __init__(self, kind: str, message: str, line: int | None = None):
        self.kind = kind
        self.line = line
        where = f"line {line}: " if line is not None else ""
        super().__init__(f"{where}{message}")


HEADER = "header"
LITERAL_RANGE = "literal-range"
MISSING_TERMINATOR = "missing-terminator"
COUNT_MISMATCH = "count-mismatch"
WEIGHT_ZERO = "weight-zero"
WEIGHT_RANGE = "weight-range"
TOKEN = "token"


@dataclass
class ParsedInstance:
    formula: Union[CnfFormula, WcnfFormula]
    comments: list[str] = field(default_factory=list)


def _scan(text: str):
    """Split into comments, header (tokens, line) and body tokens with line numbers."""
    comments = []
    header = None
    body = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line:
            continue
        if line.startswith("c"):
            if len(line) == 1 or line[1] in " \t":
                comments.append(line[2:] if len(line) > 1 else "")
                continue
        if line.startswith("p"):
            if header is not None:
                raise DimacsError(HEADER, "second problem line", lineno)
            header = (line.split(), lineno)
            continue
        if header is None:
            raise DimacsError(HEADER, "clause data before the problem line", lineno)
        # '%' terminates some benchmark files (SATLIB convention)
        if line.startswith("%"):
            break
        for tok in line.split():
            body.append((tok, lineno))
    if header is None:
        raise DimacsError(HEADER, "missing problem line")
    return comments, header, body


def _int(tok, lineno, kind=TOKEN):
    try:
        return int(tok)
    except ValueError:
        raise DimacsError(kind, f"expected an integer, got {tok!r}", lineno) from None


def parse(text: str) -> ParsedInstance:
    """Parse either format, dispatching on the problem line."""
    comments, (hdr, hline), body = _scan(text)
    if len(hdr) >= 2 and hdr[1] == "cnf":
        return ParsedInstance(_parse_cnf_body(hdr, hline, body), comments)
    if len(hdr) >= 2 and hdr[1] == "wcnf":
        return ParsedInstance(_parse_wcnf_body(hdr, hline, body), comments)
    raise DimacsError(HEADER, f"unknown problem line {' '.join(hdr)!r}", hline)


def parse_cnf(text: str) -> CnfFormula:
    inst = parse(text)
    if not isinstance(inst.formula, CnfFormula):
        raise DimacsError(HEADER, "expected 'p cnf' problem line")
    return inst.formula


def parse_wcnf(text: str) -> WcnfFormula:
    inst = parse(text)
    if not isinstance(inst.formula, WcnfFormula):
        raise DimacsError(HEADER, "expected 'p wcnf' problem line")
    return inst.formula


def _parse_cnf_body(hdr, hline, body) -> CnfFormula:
    if len(hdr) != 4:
        raise DimacsError(HEADER, "expected 'p cnf <nvars> <nclauses>'", hline)
    nvars = _int(hdr[2], hline, HEADER)
    ncls = _int(hdr[3], hline, HEADER)
    if nvars < 0 or ncls < 0:
        raise DimacsError(HEADER, "negative count in problem line", hline)
    clauses = []
    cur = []
    last = hline
    for tok, lineno in body:
        l = _int(tok, lineno)
        last = lineno
        if l == 0:
            clauses.append(tuple(cur))
            cur = []
        else:
            if abs(l) > nvars:
                raise DimacsError(LITERAL_RANGE, f"literal {l} exceeds declared {nvars} variables", lineno)
            cur.append(l)
    if cur:
        raise DimacsError(MISSING_TERMINATOR, "last clause is not terminated by 0", last)
    if len(clauses) != ncls:
        raise DimacsError(COUNT_MISMATCH, f"header declares {ncls} clauses, found {len(clauses)}", hline)
    return CnfFormula(nvars, tuple(clauses))


def _parse_wcnf_body(hdr, hline, body) -> WcnfFormula:
    if len(hdr) != 5:
        raise DimacsError(HEADER, "expected 'p wcnf <nvars> <nclauses> <top>'", hline)
    nvars = _int(hdr[2], hline, HEADER)
    ncls = _int(hdr[3], hline, HEADER)
    top = _int(hdr[4], hline, HEADER)
    if nvars < 0 or ncls < 0 or top < 1:
        raise DimacsError(HEADER, "invalid count or top in problem line", hline)
    hard, soft = [], []
    weight = None
    cur = []
    last = hline
    for tok, lineno in body:
        x = _int(tok, lineno)
        last = lineno
        if weight is None:
            if x == 0:
                raise DimacsError(WEIGHT_ZERO, "clause weight 0", lineno)
            if x < 0 or x > top:
                raise DimacsError(WEIGHT_RANGE, f"weight {x} outside 1..{top}", lineno)
            weight = x
            continue
        if x == 0:
            if weight == top:
                hard.append(tuple(cur))
            else:
                soft.append((tuple(cur), weight))
            cur, weight = [], None
        else:
            if abs(x) > nvars:
                raise DimacsError(LITERAL_RANGE, f"literal {x} exceeds declared {nvars} variables", lineno)
            cur.append(x)
    if weight is not None:
        raise DimacsError(MISSING_TERMINATOR, "last clause is not terminated by 0", last)
    if len(hard) + len(soft) != ncls:
        raise DimacsError(COUNT_MISMATCH, f"header declares {ncls} clauses, found {len(hard) + len(soft)}", hline)
    return WcnfFormula(nvars, tuple(hard), tuple(soft))


def _comment_lines(comments: Iterable[str]) -> list[str]:
    return [("c " + c) if c else "c" for c in comments]


def write_cnf(f: CnfFormula, comments: Iterable[str] = ()) -> str:
    lines = _comment_lines(comments)
    lines.append(f"p cnf {f.num_vars} {len(f.clauses)}")
    lines.extend(" ".join(map(str, c + (0,))) for c in f.clauses)
    return "\n".join(lines) + "\n"


def write_wcnf(f: WcnfFormula, comments: Iterable[str] = ()) -> str:
    top = f.top
    lines = _comment_lines(comments)
    lines.append(f"p wcnf {f.num_vars} {len(f.hard) + len(f.soft)} {top}")
    lines.extend(" ".join(map(str, (top,) + c + (0,))) for c in f.hard)
    lines.extend(" ".join(map(str, (w,) + c + (0,))) for c, w in f.soft)
    return "\n".join(lines) + "\n"
