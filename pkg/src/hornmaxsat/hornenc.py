"""Dual-rail reduction of CNF satisfiability to Horn partial MaxSAT.

Each original variable ``x_i`` gets two variables: ``p_i`` ("x_i is true")
and ``n_i`` ("x_i is false").  A literal ``x_i`` in a clause is rewritten to
``-n_i`` and ``-x_i`` to ``-p_i``, so every rewritten clause is a goal clause.
Hard clauses ``(-p_i | -n_i)`` (the P clauses) forbid both rails at once, and
the soft units ``(p_i)``, ``(n_i)`` reward setting one of them.  With N
dual-railed variables at most N soft units can hold, and exactly N can hold
iff the original formula is satisfiable.

Reduced mode keeps some variables single-rail: a variable may stay as itself
as long as no encoded clause ends up with two positive literals.  Only the
dual-railed variables contribute soft units, and the target is their count.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, replace
from typing import Iterable, Mapping, Optional

from .formula import CnfFormula, WcnfFormula, eval_clause, ClauseStatus

BASIC = "basic"
REDUCED = "reduced"


class NoWitness(ValueError):
    """The dual-rail assignment does not certify a model of the original formula."""


@dataclass(frozen=True)
class DualRailMap:
    """Original var -> (p, n).  Single-rail variables have ``n == 0`` and ``p``
    is the variable that stands for ``x`` itself."""

    rails: dict  # i -> (p, n)

    @property
    def num_orig(self) -> int:
        return len(self.rails)

    def p(self, i):
        return self.rails[i][0]

    def n(self, i):
        return self.rails[i][1]

    @property
    def exempt(self) -> frozenset:
        return frozenset(i for i, (_, n) in self.rails.items() if n == 0)

    @property
    def dual(self) -> list[int]:
        return [i for i, (_, n) in sorted(self.rails.items()) if n != 0]

    def reverse(self) -> dict:
        """Encoded var -> (original var, rail) with rail in 'p', 'n', 'x'."""
        out = {}
        for i, (p, n) in self.rails.items():
            if n:
                out[p] = (i, "p")
                out[n] = (i, "n")
            else:
                out[p] = (i, "x")
        return out

    def encode_lit(self, lit: int) -> int:
        p, n = self.rails[abs(lit)]
        if not n:
            return p if lit > 0 else -p
        return -n if lit > 0 else -p


@dataclass(frozen=True)
class HencResult:
    wcnf: WcnfFormula
    map: DualRailMap
    target: int
    p_clause_ids: tuple = ()  # positions of the P clauses in wcnf.hard
    mode: str = BASIC
    p_dropped: bool = False

    @property
    def has_p(self) -> bool:
        return bool(self.p_clause_ids)

    def p_clauses(self) -> list[tuple[int, int]]:
        """The P clauses implied by the map, whether or not they are present."""
        return [(-p, -n) for i, (p, n) in sorted(self.map.rails.items()) if n]


def _encode(f: CnfFormula, kept: set, mode: str) -> HencResult:
    rails = {}
    nxt = 1
    for i in range(1, f.num_vars + 1):
        if i in kept:
            rails[i] = (nxt, 0)
            nxt += 1
        else:
            rails[i] = (nxt, nxt + 1)
            nxt += 2
    dmap = DualRailMap(rails)
    hard = [(-p, -n) for i, (p, n) in sorted(rails.items()) if n]
    p_ids = tuple(range(len(hard)))
    hard.extend(tuple(dmap.encode_lit(l) for l in c) for c in f.clauses)
    soft = []
    for i, (p, n) in sorted(rails.items()):
        if n:
            soft.append(((p,), 1))
            soft.append(((n,), 1))
    w = WcnfFormula(nxt - 1, hard, soft)
    return HencResult(w, dmap, len(p_ids), p_ids, mode)


def henc(f: CnfFormula) -> HencResult:
    """Basic dual-rail encoding: p_i = 2i-1, n_i = 2i; soft ids 2(i-1), 2(i-1)+1."""
    return _encode(f, set(), BASIC)


def _is_nonhorn(c) -> bool:
    return sum(1 for l in set(c) if l > 0) > 1


def choose_single_rail(f: CnfFormula) -> set:
    """Variables that may stay single-rail without breaking Horn-ness.

    Every variable positive in some non-Horn clause may be kept only if no
    non-Horn clause then holds two kept variables positively.  Clauses are
    visited by descending positive count; each still-uncovered clause takes
    its candidate with the most positive occurrences (lowest index on ties)
    among those that stay feasible.  Variables never positive in a non-Horn
    clause are always kept.
    """
    nonhorn = [tuple(sorted({l for l in c if l > 0})) for c in f.clauses if _is_nonhorn(c)]
    occ = Counter(v for c in nonhorn for v in c)
    clauses_of = {}
    for k, c in enumerate(nonhorn):
        for v in c:
            clauses_of.setdefault(v, []).append(k)
    has_kept = [False] * len(nonhorn)
    kept = set()
    for k in sorted(range(len(nonhorn)), key=lambda k: (-len(nonhorn[k]), k)):
        if has_kept[k]:
            continue
        for v in sorted(nonhorn[k], key=lambda v: (-occ[v], v)):
            if all(not has_kept[q] for q in clauses_of[v]):
                kept.add(v)
                for q in clauses_of[v]:
                    has_kept[q] = True
                break
    always = set(range(1, f.num_vars + 1)) - set(occ)
    return kept | always


def henc_reduced(f: CnfFormula) -> HencResult:
    return _encode(f, choose_single_rail(f), REDUCED)


def drop_p(h: HencResult) -> HencResult:
    """Remove the P clauses; everything else, including soft ids, stays."""
    drop = set(h.p_clause_ids)
    hard = [c for k, c in enumerate(h.wcnf.hard) if k not in drop]
    w = WcnfFormula(h.wcnf.num_vars, hard, h.wcnf.soft)
    return replace(h, wcnf=w, p_clause_ids=(), p_dropped=True)


def restore_p(h: HencResult) -> HencResult:
    if h.has_p or not h.p_dropped:
        return h
    pc = h.p_clauses()
    w = WcnfFormula(h.wcnf.num_vars, pc + list(h.wcnf.hard), h.wcnf.soft)
    return replace(h, wcnf=w, p_clause_ids=tuple(range(len(pc))), p_dropped=False)


def satisfied_softs(h: HencResult, a: Mapping[int, int]) -> int:
    return sum(1 for c, _ in h.wcnf.soft if eval_clause(c, a) is ClauseStatus.SATISFIED)


def decode(h: HencResult, a: Mapping[int, int]) -> dict:
    """Original-variable model from a dual-rail assignment reaching the target.

    Also checks the P clauses, so this works on drop_p results too.
    """
    for c in h.wcnf.hard:
        if eval_clause(c, a) is not ClauseStatus.SATISFIED:
            raise NoWitness(f"hard clause {c} is not satisfied")
    sat = satisfied_softs(h, a)
    if sat < h.target:
        raise NoWitness(f"only {sat} of the {h.target} required soft clauses hold")
    x = {}
    for i, (p, n) in sorted(h.map.rails.items()):
        if not n:
            x[i] = int(bool(a.get(p, 0)))
            continue
        if a.get(p, 0) and a.get(n, 0):
            raise NoWitness(f"both rails of x{i} are set")
        x[i] = int(bool(a.get(p, 0)))
    return x


def encode_assignment(h: HencResult, x: Mapping[int, int]) -> dict:
    """Dual-rail image of an original assignment (reaches the target iff x is a model)."""
    a = {}
    for i, (p, n) in h.map.rails.items():
        v = int(bool(x[i]))
        a[p] = v
        if n:
            a[n] = 1 - v
    return a


# -- sidecar comments carried in the WCNF file ------------------------------

SIDECAR_TAG = "hornmaxsat henc"


def sidecar_comments(h: HencResult) -> list[str]:
    lines = [
        SIDECAR_TAG,
        f"target {h.target}",
        f"mode {h.mode}",
        f"p-clauses {len(h.p_clause_ids)}",
        f"p-dropped {int(h.p_dropped)}",
    ]
    lines.extend(f"map {i} {p} {n}" for i, (p, n) in sorted(h.map.rails.items()))
    return lines


def from_sidecar(w: WcnfFormula, comments: Iterable[str]) -> Optional[HencResult]:
    """Rebuild the HencResult from parsed comments, or None if the tag is absent."""
    comments = list(comments)
    if SIDECAR_TAG not in comments:
        return None
    fields = {}
    rails = {}
    for c in comments:
        parts = c.split()
        if not parts:
            continue
        if parts[0] == "map" and len(parts) == 4:
            i, p, n = map(int, parts[1:])
            rails[i] = (p, n)
        elif parts[0] in ("target", "mode", "p-clauses", "p-dropped") and len(parts) == 2:
            fields[parts[0]] = parts[1]
    try:
        target = int(fields["target"])
        k = int(fields["p-clauses"])
    except (KeyError, ValueError):
        raise ValueError("incomplete dual-rail sidecar in WCNF comments") from None
    return HencResult(w, DualRailMap(rails), target, tuple(range(k)), fields.get("mode", BASIC),
                      fields.get("p-dropped", "0") == "1")
