"""SAT checks over "hard clauses plus a chosen subset of soft clauses".

Soft clause ``i`` is switched on by an assumption literal: a unit soft
``(l)`` is assumed as ``l`` itself, any other soft ``c`` gets a fresh
selector ``s`` and the hard clause ``(-s | c)``.  The selector clause is
Horn whenever ``c`` is, so Horn instances stay on the LTUR path.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

from .formula import VarPool, WcnfFormula, is_horn
from .ltur import HornInstance
from .sat import Budget, Engine


@dataclass
class Check:
    sat: bool
    model: Optional[dict]
    core: Optional[list]  # soft ids
    extra: Optional[list]  # non-soft assumption literals in the core
    propagations: int


class SoftOracle:
    """Owns the selector encoding for one (sub)problem."""

    def __init__(self, num_vars: int, hard: Sequence[tuple], soft: Sequence[tuple[int, tuple]],
                 pool: Optional[VarPool] = None):
        self.num_vars = num_vars
        self.pool = pool if pool is not None else VarPool(num_vars)
        self.clauses = [tuple(c) for c in hard]
        self.lit_of: dict[int, int] = {}
        self.id_of: dict[int, int] = {}
        seen = set()
        for sid, c in soft:
            c = tuple(dict.fromkeys(c))
            if len(c) == 1 and c[0] not in seen:
                lit = c[0]
            else:
                lit = self.pool.new()
                self.clauses.append((-lit,) + c)
            seen.add(lit)
            self.lit_of[sid] = lit
            self.id_of[lit] = sid
        self.horn = all(is_horn(c) for c in self.clauses)
        self._horn = HornInstance(self.pool.top, self.clauses) if self.horn else None
        self._engine = None

    @property
    def soft_ids(self) -> list[int]:
        return list(self.lit_of)

    def engine(self) -> Engine:
        if self._engine is None:
            self._engine = Engine(self.pool.top, self.clauses)
        return self._engine

    def check(self, ids: Iterable[int], budget: Optional[Budget] = None) -> Check:
        assumptions = [self.lit_of[i] for i in ids]
        if self.horn:
            out = self._horn.solve(assumptions, budget)
            sat, model, core, props = out.sat, out.model, out.core, out.propagations
        else:
            out = self.engine().solve(assumptions, budget)
            sat, model, core, props = out.sat, out.model, out.core, out.propagations
        if sat:
            return Check(True, model, None, None, props)
        return Check(False, None, [self.id_of[l] for l in core], [], props)

    def relax_lit(self, sid: int) -> int:
        """Literal that is true whenever soft ``sid`` is allowed to fail."""
        return -self.lit_of[sid]


def components(f: WcnfFormula):
    """Split into variable-disjoint parts.

    Returns a list of ``(hard_indices, soft_ids)``; clauses without
    variables (empty clauses) each form their own part.
    """
    parent = list(range(f.num_vars + 1))

    def find(a):
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    def join(c):
        vs = [abs(l) for l in c]
        for v in vs[1:]:
            ra, rb = find(vs[0]), find(v)
            if ra != rb:
                parent[ra] = rb

    for c in f.hard:
        join(c)
    for c, _ in f.soft:
        join(c)
    groups: dict = {}
    order = []

    def slot(key):
        if key not in groups:
            groups[key] = ([], [])
            order.append(key)
        return groups[key]

    for k, c in enumerate(f.hard):
        slot(("h", k) if not c else find(abs(c[0])))[0].append(k)
    for i, (c, _) in enumerate(f.soft):
        slot(("s", i) if not c else find(abs(c[0])))[1].append(i)
    return [groups[k] for k in order]
