"""Linear-time unit resolution for Horn formulas (Minoux-style counters).

Each clause keeps a count of negative literals whose variable is not yet
true.  Setting a variable true decrements the counters of the clauses it
occurs negatively in; a counter reaching zero either derives the head or,
for a goal clause, is a conflict.  Every clause is visited at most once per
negative literal, so a run is linear in the formula size.

Assumptions may be positive (``v`` true) or negative (``v`` stays false).
The model on SAT is the least model extended by the assumptions.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

from .formula import is_horn, is_tautology
from .result import Status
from .sat import Budget

_ASSUMED = -1
_UNSET = -2


class NotHornError(ValueError):
    pass


@dataclass
class LturOutcome:
    status: Status
    model: Optional[dict] = None
    core: Optional[list] = None  # assumption literals, in assumption order
    propagations: int = 0
    conflict: Optional[int] = None  # index of the falsified clause, -1 for an assumption clash
    ancestry: Optional[set] = None  # clause indices the refutation used

    @property
    def sat(self) -> bool:
        return self.status is Status.SAT


class HornInstance:
    """Horn clause set indexed for forward chaining.

    Clause indices refer to positions in the input sequence; clauses added
    later with :meth:`add_clause` get the next index.  Tautologies are kept
    as inert slots so indices stay aligned.
    """

    def __init__(self, num_vars: int, clauses: Iterable[Sequence[int]] = (), debug: bool = False):
        self.num_vars = 0
        self.heads: list[int] = []  # head var, 0 for goal clauses, -1 for inert
        self.negs: list[tuple[int, ...]] = []
        self.occ: list[list[int]] = [[]]
        self.facts: list[int] = []
        self.empty: list[int] = []
        self.debug = debug
        self.ensure_vars(num_vars)
        for c in clauses:
            self.add_clause(c)

    def ensure_vars(self, n):
        while self.num_vars < n:
            self.num_vars += 1
            self.occ.append([])

    def add_clause(self, clause: Sequence[int]) -> int:
        idx = len(self.heads)
        c = set(clause)
        if not is_horn(c):
            raise NotHornError(f"clause {tuple(clause)} has more than one positive literal")
        if c:
            self.ensure_vars(max(abs(l) for l in c))
        if is_tautology(c):
            self.heads.append(-1)
            self.negs.append(())
            return idx
        pos = [l for l in c if l > 0]
        negs = tuple(sorted(-l for l in c if l < 0))
        self.heads.append(pos[0] if pos else 0)
        self.negs.append(negs)
        for v in negs:
            self.occ[v].append(idx)
        if not negs:
            if pos:
                self.facts.append(idx)
            else:
                self.empty.append(idx)
        return idx

    @property
    def size(self) -> int:
        """Total literal occurrences."""
        return sum(len(n) + (h > 0) for h, n in zip(self.heads, self.negs))

    def solve(self, assumptions: Sequence[int] = (), budget: Optional[Budget] = None) -> LturOutcome:
        if self.empty:
            ci = self.empty[0]
            return LturOutcome(Status.UNSAT, core=[], propagations=0, conflict=ci, ancestry={ci})
        val = [0] * (self.num_vars + 1)
        reason = [_UNSET] * (self.num_vars + 1)
        count: dict[int, int] = {}
        heads, negs, occ = self.heads, self.negs, self.occ
        queue: deque[int] = deque()
        props = charged = 0
        conflict = None  # (clause index or -1, seed vars)

        def set_true(v, why):
            nonlocal props
            val[v] = 1
            reason[v] = why
            queue.append(v)
            props += 1

        def run():
            while queue:
                v = queue.popleft()
                for ci in occ[v]:
                    k = count.get(ci)
                    if k is None:
                        k = len(negs[ci])
                    k -= 1
                    count[ci] = k
                    if k:
                        continue
                    h = heads[ci]
                    if h == 0:
                        return (ci, negs[ci])
                    if val[h] == 1:
                        continue
                    if val[h] == -1:
                        return (ci, negs[ci] + (h,))
                    set_true(h, ci)
            return None

        for ci in self.facts:
            h = self.heads[ci]
            if val[h] == 0:
                set_true(h, ci)
        conflict = run()
        if conflict is None:
            for lit in assumptions:
                v = abs(lit)
                if v > self.num_vars:
                    raise ValueError(f"assumption {lit} over undeclared variable")
                want = 1 if lit > 0 else -1
                if val[v] == want:
                    continue
                if val[v] == -want:
                    conflict = (-1, (v,), lit)
                    break
                if lit > 0:
                    set_true(v, _ASSUMED)
                    conflict = run()
                    if conflict is not None:
                        break
                else:
                    val[v] = -1
                    reason[v] = _ASSUMED
                    props += 1
                if budget is not None and props - charged > 4096:
                    budget.charge(props - charged)
                    charged = props
        if budget is not None:
            budget.charge(props - charged)

        if self.debug:
            self._check_counters(val, count, exact=conflict is None)

        if conflict is None:
            model = {v: int(val[v] == 1) for v in range(1, self.num_vars + 1)}
            return LturOutcome(Status.SAT, model=model, propagations=props)

        ci, seeds = conflict[0], conflict[1]
        anc = {ci} if ci >= 0 else set()
        core = set()
        if ci < 0:
            core.add(conflict[2])
        seen = set()
        stack = list(seeds)
        while stack:
            v = stack.pop()
            if v in seen:
                continue
            seen.add(v)
            r = reason[v]
            if r == _ASSUMED:
                core.add(v if val[v] == 1 else -v)
            elif r >= 0:
                anc.add(r)
                stack.extend(negs[r])
        order = {l: i for i, l in enumerate(assumptions)}
        core_list = sorted(core, key=lambda l: order[l])
        return LturOutcome(Status.UNSAT, core=core_list, propagations=props, conflict=ci, ancestry=anc)

    def _check_counters(self, val, count, exact):
        for ci, ns in enumerate(self.negs):
            expect = sum(1 for v in ns if val[v] != 1)
            got = count.get(ci, len(ns))
            # after a conflict, queued variables have not decremented yet
            if got < expect or (exact and got != expect):
                raise AssertionError(f"counter of clause {ci} is {got}, expected >= {expect}")


def solve(h: HornInstance, assumptions: Sequence[int] = (), budget: Optional[Budget] = None) -> LturOutcome:
    return h.solve(assumptions, budget)


def propagate_count(outcome: LturOutcome) -> int:
    return outcome.propagations
