"""Small complete SAT engine: two-watched-literal unit propagation plus DPLL.

Used wherever clauses may be non-Horn (cardinality constraints, non-Horn
soft clauses).  Search is DPLL with conflict-directed backjumping: every
assigned literal carries the set of assumptions and decision levels it
depends on, computed lazily at conflicts from the reason graph.  No clause
learning.  When the conflict depends on assumptions only, that set is the
core.

Propagation is counted as one step per literal assignment, including
assumptions, decisions and flips, the same convention as :mod:`ltur`.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence

# reason markers (clause reasons are clause indices >= 0)
_DECISION = -1
_ASSUMPTION = -2
_FLIPPED = -3


class BudgetExceeded(Exception):
    """Raised from inside propagation loops when a Budget runs out."""

    def __init__(self, what, props=0):
        super().__init__(what)
        self.props = props


@dataclass
class Budget:
    """Wall-clock deadline and/or cap on total propagations."""

    seconds: Optional[float] = None
    max_props: Optional[int] = None
    used_props: int = 0
    deadline: Optional[float] = field(default=None, repr=False)

    def __post_init__(self):
        if self.seconds is not None and self.deadline is None:
            self.deadline = time.monotonic() + self.seconds

    def charge(self, props: int):
        self.used_props += props
        if self.max_props is not None and self.used_props > self.max_props:
            raise BudgetExceeded("propagation budget exhausted", self.used_props)
        if self.deadline is not None and time.monotonic() > self.deadline:
            raise BudgetExceeded("time budget exhausted", self.used_props)


@dataclass
class SatOutcome:
    sat: bool
    model: Optional[dict] = None
    core: Optional[list] = None  # assumption literals the refutation used
    propagations: int = 0


class Engine:
    """Clause store with 2WL propagation; clauses may be added between calls.

    Every call starts from the empty assignment, so watches never need
    repairing across calls.
    """

    # charge the budget every this many propagations
    CHECK_EVERY = 256

    def __init__(self, num_vars: int = 0, clauses: Iterable[Sequence[int]] = ()):
        self.num_vars = 0
        self.clauses: list[list[int]] = []
        self.units: list[int] = []  # indices of unit clauses
        self.has_empty = False
        self.watches: list[list[int]] = [[], []]
        self.val = [0]
        self.reason = [0]
        self.level = [0]
        self.ensure_vars(num_vars)
        for c in clauses:
            self.add_clause(c)

    def ensure_vars(self, n: int):
        k = n - self.num_vars
        if k <= 0:
            return
        self.num_vars = n
        self.val.extend([0] * k)
        self.reason.extend([0] * k)
        self.level.extend([0] * k)
        self.watches.extend([] for _ in range(2 * k))

    @staticmethod
    def _widx(lit):
        return 2 * lit if lit > 0 else -2 * lit + 1

    def add_clause(self, clause: Sequence[int]) -> int:
        c = list(dict.fromkeys(clause))
        idx = len(self.clauses)
        self.clauses.append(c)
        if not c:
            self.has_empty = True
            return idx
        self.ensure_vars(max(abs(l) for l in c))
        if len(c) == 1:
            self.units.append(idx)
        else:
            self.watches[self._widx(c[0])].append(idx)
            self.watches[self._widx(c[1])].append(idx)
        return idx

    def truncate(self, n: int):
        """Forget every clause with index >= n (e.g. a per-iteration cardinality block)."""
        for ci in range(len(self.clauses) - 1, n - 1, -1):
            c = self.clauses[ci]
            if len(c) >= 2:
                self.watches[self._widx(c[0])].remove(ci)
                self.watches[self._widx(c[1])].remove(ci)
        del self.clauses[n:]
        self.units = [u for u in self.units if u < n]
        self.has_empty = any(not c for c in self.clauses)

    # -- assignment primitives ------------------------------------------

    def _value(self, lit):
        v = self.val[lit if lit > 0 else -lit]
        return v if lit > 0 else -v

    def _assign(self, lit, reason, lvl):
        v = lit if lit > 0 else -lit
        self.val[v] = 1 if lit > 0 else -1
        self.reason[v] = reason
        self.level[v] = lvl
        self.trail.append(lit)
        self.props += 1
        if self.budget is not None and self.props % self.CHECK_EVERY == 0:
            self.budget.charge(self.CHECK_EVERY)

    def _propagate(self):
        """Run the queue to fixpoint; return the conflicting clause index or None."""
        clauses, watches, val = self.clauses, self.watches, self.val
        trail = self.trail
        while self.qhead < len(trail):
            t = trail[self.qhead]
            self.qhead += 1
            f = -t  # literal that just became false
            wl = watches[2 * f if f > 0 else -2 * f + 1]
            i = j = 0
            n = len(wl)
            conflict = None
            while i < n:
                ci = wl[i]
                i += 1
                c = clauses[ci]
                if c[0] == f:
                    c[0], c[1] = c[1], f
                first = c[0]
                fv = val[first] if first > 0 else -val[-first]
                if fv == 1:
                    wl[j] = ci
                    j += 1
                    continue
                for k in range(2, len(c)):
                    lk = c[k]
                    if (val[lk] if lk > 0 else -val[-lk]) != -1:
                        c[1], c[k] = lk, f
                        watches[2 * lk if lk > 0 else -2 * lk + 1].append(ci)
                        break
                else:
                    wl[j] = ci
                    j += 1
                    if fv == -1:
                        conflict = ci
                        while i < n:
                            wl[j] = wl[i]
                            j += 1
                            i += 1
                    else:
                        self._assign(first, ci, self.cur_level)
            del wl[j:]
            if conflict is not None:
                return conflict
        return None

    def _reset(self, budget):
        for lit in self.trail if hasattr(self, "trail") else ():
            self.val[abs(lit)] = 0
        self.trail: list[int] = []
        self.qhead = 0
        self.props = 0
        self.cur_level = 0
        self.budget = budget
        self.assumption_index: dict[int, int] = {}
        self.flip_deps: dict[int, frozenset] = {}

    def _settle_budget(self):
        if self.budget is not None:
            self.budget.charge(self.props % self.CHECK_EVERY)

    def _start(self, assumptions):
        """Assert units and assumptions at level 0.  Returns a conflict or None.

        A conflict is ``("clause", idx)`` or ``("lit", lit)`` for a literal
        that was asserted while its complement already held.
        """
        for ui in self.units:
            lit = self.clauses[ui][0]
            v = self._value(lit)
            if v == -1:
                return ("clause", ui)
            if v == 0:
                self._assign(lit, ui, 0)
                c = self._propagate()
                if c is not None:
                    return ("clause", c)
        for k, lit in enumerate(assumptions):
            self.ensure_vars(abs(lit))
            v = self._value(lit)
            if v == 1:
                continue
            if v == -1:
                self.assumption_index[lit] = k
                return ("lit", lit)
            self.assumption_index[lit] = k
            self._assign(lit, _ASSUMPTION, 0)
            c = self._propagate()
            if c is not None:
                return ("clause", c)
        return None

    # -- dependency bookkeeping -----------------------------------------

    def _deps_of_conflict(self, conflict):
        """Set of assumption literals (ints) and decision markers ('d', level)."""
        kind, x = conflict
        if kind == "clause":
            seeds = [abs(l) for l in self.clauses[x]]
            extra = set()
        else:  # asserted assumption x clashes with a literal already on the trail
            seeds = [abs(x)]
            extra = {x}
        seen = set()
        stack = list(seeds)
        while stack:
            v = stack.pop()
            if v in seen:
                continue
            seen.add(v)
            r = self.reason[v]
            if r >= 0:
                stack.extend(abs(l) for l in self.clauses[r] if abs(l) != v)
        deps = set(extra)
        for v in seen:
            r = self.reason[v]
            if r == _ASSUMPTION:
                deps.add(v if self.val[v] == 1 else -v)
            elif r == _DECISION:
                deps.add(("d", self.level[v]))
            elif r == _FLIPPED:
                deps |= self.flip_deps[v]
        return deps

    def ancestry(self, conflict):
        """Clause indices and assumption literals behind a level-0 conflict."""
        kind, x = conflict
        seeds = [abs(l) for l in self.clauses[x]] if kind == "clause" else [abs(x)]
        cls = {x} if kind == "clause" else set()
        seen, stack = set(), list(seeds)
        assumed = {x} if kind == "lit" else set()
        while stack:
            v = stack.pop()
            if v in seen:
                continue
            seen.add(v)
            r = self.reason[v]
            if r >= 0:
                cls.add(r)
                stack.extend(abs(l) for l in self.clauses[r] if abs(l) != v)
            elif r == _ASSUMPTION:
                assumed.add(v if self.val[v] == 1 else -v)
        return cls, assumed

    def _order_core(self, lits, assumptions):
        order = {l: i for i, l in enumerate(assumptions)}
        return sorted(lits, key=lambda l: order.get(l, len(order)))

    # -- public entry points ----------------------------------------------

    def propagate(self, assumptions: Sequence[int] = (), budget: Optional[Budget] = None):
        """Unit propagation only.  Returns (conflict or None, propagations).

        The assignment stays in place until the next call, so callers may
        inspect it or ask for :meth:`ancestry` of the conflict.
        """
        self._reset(budget)
        if self.has_empty:
            return ("empty", None), 0
        conflict = self._start(list(assumptions))
        self._settle_budget()
        return conflict, self.props

    def solve(self, assumptions: Sequence[int] = (), budget: Optional[Budget] = None) -> SatOutcome:
        assumptions = list(assumptions)
        self._reset(budget)
        if self.has_empty:
            return SatOutcome(False, core=[], propagations=0)
        conflict = self._start(assumptions)
        if conflict is not None:
            deps = self._deps_of_conflict(conflict)
            self._settle_budget()
            return SatOutcome(False, core=self._order_core(deps, assumptions), propagations=self.props)

        order = self._var_order()
        trail_lim: list[int] = []  # trail index at which each level starts
        decision_lit: list[int] = []
        pos = 0
        while True:
            if conflict is None:
                while pos < len(order) and self.val[order[pos]] != 0:
                    pos += 1
                if pos == len(order):
                    model = {v: int(self.val[v] == 1) for v in range(1, self.num_vars + 1)}
                    self._settle_budget()
                    return SatOutcome(True, model=model, propagations=self.props)
                v = order[pos]
                trail_lim.append(len(self.trail))
                self.cur_level += 1
                decision_lit.append(-v)
                self._assign(-v, _DECISION, self.cur_level)
                c = self._propagate()
                conflict = ("clause", c) if c is not None else None
                continue

            deps = self._deps_of_conflict(conflict)
            levels = [d[1] for d in deps if isinstance(d, tuple)]
            if not levels:
                self._settle_budget()
                core = [d for d in deps if not isinstance(d, tuple)]
                return SatOutcome(False, core=self._order_core(core, assumptions), propagations=self.props)
            e = max(levels)
            lit = decision_lit[e - 1]
            # undo levels >= e
            cut = trail_lim[e - 1]
            for l in self.trail[cut:]:
                self.val[abs(l)] = 0
                self.flip_deps.pop(abs(l), None)
            del self.trail[cut:]
            del trail_lim[e - 1:]
            del decision_lit[e - 1:]
            self.qhead = cut
            self.cur_level = e - 1
            pos = 0
            fv = abs(lit)
            self.flip_deps[fv] = frozenset(d for d in deps if d != ("d", e))
            self._assign(-lit, _FLIPPED, self.cur_level)
            c = self._propagate()
            conflict = ("clause", c) if c is not None else None

    def _var_order(self):
        occ = [0] * (self.num_vars + 1)
        for c in self.clauses:
            for l in c:
                occ[abs(l)] += 1
        return sorted(range(1, self.num_vars + 1), key=lambda v: (-occ[v], v))


def solve(clauses: Iterable[Sequence[int]], num_vars: int = 0, assumptions: Sequence[int] = (),
          budget: Optional[Budget] = None) -> SatOutcome:
    """One-shot convenience wrapper around :class:`Engine`."""
    return Engine(num_vars, clauses).solve(assumptions, budget)
