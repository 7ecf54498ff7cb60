"""Implicit hitting set MaxSAT with an exact branch-and-bound hitting set solver.

The loop alternates between a minimum hitting set ``h`` of the cores found
so far and a SAT check of the hard clauses with every soft clause outside
``h`` assumed.  A satisfiable check ends the search with cost ``|h|``;
otherwise the check keeps peeling cores disjoint from each other (and from
``h``) until satisfiable, and all of them join the core set.
"""

from __future__ import annotations

from typing import Iterable, Optional

from .formula import WcnfFormula, cost
from .oracle import SoftOracle, components
from .result import MaxSatResult, Status, TraceRecord
from .sat import Budget, BudgetExceeded


# -- exact minimum hitting set --------------------------------------------------


def _popcount(x: int) -> int:
    return bin(x).count("1")


def _split(masks):
    """Group core masks into element-connected components."""
    groups = []
    for c in masks:
        merged = c
        rest = []
        members = [c]
        for g_mask, g_members in groups:
            if g_mask & merged:
                merged |= g_mask
                members.extend(g_members)
            else:
                rest.append((g_mask, g_members))
        # a merge may link groups seen earlier in the scan; repeat until stable
        changed = True
        while changed:
            changed = False
            keep = []
            for g_mask, g_members in rest:
                if g_mask & merged:
                    merged |= g_mask
                    members.extend(g_members)
                    changed = True
                else:
                    keep.append((g_mask, g_members))
            rest = keep
        groups = rest + [(merged, members)]
    return [m for _, m in groups]


def _reduce(cores):
    """Drop supersets and duplicates."""
    cores = sorted(set(cores), key=_popcount)
    kept = []
    for c in cores:
        if not any(k & c == k for k in kept):
            kept.append(c)
    return kept


def _packing_bound(cores) -> int:
    used = 0
    n = 0
    for c in sorted(cores, key=_popcount):
        if not c & used:
            used |= c
            n += 1
    return n


def _greedy(cores) -> int:
    chosen = 0
    left = list(cores)
    while left:
        counts = {}
        for c in left:
            x = c
            while x:
                b = x & -x
                counts[b] = counts.get(b, 0) + 1
                x ^= b
        b = max(counts, key=lambda e: (counts[e], -e))
        chosen |= b
        left = [c for c in left if not c & b]
    return chosen


def _bnb(cores):
    best = [_greedy(cores)]

    def search(chosen, cores):
        # forced elements: unit cores
        while True:
            units = 0
            for c in cores:
                if c & (c - 1) == 0:
                    units |= c
            if not units:
                break
            chosen |= units
            cores = [c for c in cores if not c & units]
        if not cores:
            if _popcount(chosen) < _popcount(best[0]):
                best[0] = chosen
            return
        cores = _reduce(cores)
        k = _popcount(chosen)
        if k + _packing_bound(cores) >= _popcount(best[0]):
            return
        occ = {}
        for idx, c in enumerate(cores):
            x = c
            while x:
                b = x & -x
                occ[b] = occ.get(b, 0) | (1 << idx)
                x ^= b
        # element dominance: a is useless if b hits every core a hits
        elems = sorted(occ, key=lambda e: (-_popcount(occ[e]), e))
        dominated = 0
        for i, a in enumerate(elems):
            for b in elems[:i]:
                if not dominated & b and occ[a] & occ[b] == occ[a]:
                    dominated |= a
                    break
        if dominated:
            cores = [c & ~dominated for c in cores]
            elems = [e for e in elems if not e & dominated]
        e = elems[0]
        search(chosen | e, [c for c in cores if not c & e])
        rest = [c & ~e for c in cores]
        if all(rest):
            search(chosen, rest)

    search(0, list(cores))
    return best[0]


def min_hitting_set(cores: Iterable[Iterable[int]]) -> set:
    """Minimum-cardinality set meeting every core (exact)."""
    cores = [frozenset(c) for c in cores]
    if any(not c for c in cores):
        raise ValueError("an empty core has no hitting set")
    elems = sorted({e for c in cores for e in c})
    bit = {e: 1 << k for k, e in enumerate(elems)}
    masks = _reduce([sum(bit[e] for e in c) for c in cores])
    chosen = 0
    for group in _split(masks):
        chosen |= _bnb(group)
    return {e for e in elems if chosen & bit[e]}


# -- MaxSAT loop ------------------------------------------------------------------


def _peel(oracle: SoftOracle, ids, budget, stats):
    """Check ``ids``; on UNSAT keep removing cores until the rest is satisfiable."""
    found = []
    active = list(ids)
    while True:
        chk = oracle.check(active, budget)
        stats["props"] += chk.propagations
        if chk.sat:
            return found, chk.model
        if not chk.core:
            return None, None
        found.append(frozenset(chk.core))
        drop = set(chk.core)
        active = [i for i in active if i not in drop]


def disjoint_cores(f: WcnfFormula, budget: Optional[Budget] = None) -> list:
    """Pairwise-disjoint cores found by repeatedly assuming all remaining softs.

    Raises ValueError when the hard clauses alone are unsatisfiable.
    """
    out = []
    stats = {"props": 0}
    for hard_ids, soft_ids in components(f):
        o = SoftOracle(f.num_vars, [f.hard[k] for k in hard_ids], [(i, f.soft[i][0]) for i in soft_ids])
        found, _ = _peel(o, soft_ids, budget, stats)
        if found is None:
            raise ValueError("hard clauses are unsatisfiable")
        out.extend(sorted(c) for c in found)
    return [set(c) for c in out]


def solve(f: WcnfFormula, budget: Optional[Budget] = None, split_components: bool = True) -> MaxSatResult:
    if not f.unit_weights():
        raise ValueError("only unit soft weights are supported")
    parts = components(f) if split_components else [(list(range(len(f.hard))), list(range(len(f.soft))))]
    stats = {"props": 0}
    start = budget.used_props if budget else 0
    trace: list[TraceRecord] = []
    all_cores = []
    model = {}
    total = 0
    lb = 0
    summary = []
    try:
        for hard_ids, soft_ids in parts:
            o = SoftOracle(f.num_vars, [f.hard[k] for k in hard_ids], [(i, f.soft[i][0]) for i in soft_ids])
            cores, m = _peel(o, soft_ids, budget, stats)
            if cores is None:
                return MaxSatResult(Status.INFEASIBLE, lb=lb, propagations=stats["props"], trace=trace)
            for c in cores:
                lb += 1
                trace.append(TraceRecord(sorted(c), 0, lb, None, "disjoint"))
            h: set = set()
            while cores:
                h = min_hitting_set(cores)
                lb_part = len(h)
                rest = [i for i in soft_ids if i not in h]
                new, m = _peel(o, rest, budget, stats)
                if new is None:  # pragma: no cover - feasibility was established above
                    return MaxSatResult(Status.INFEASIBLE, propagations=stats["props"], trace=trace)
                if not new:
                    break
                cores.extend(new)
                for c in new:
                    trace.append(TraceRecord(sorted(c), 0, total + lb_part, None, "ihs"))
            all_cores.extend(sorted(c) for c in cores)
            part_cost = len(h)
            total += part_cost
            summary.append({"softs": list(soft_ids), "cost": part_cost})
            vs = {abs(l) for k in hard_ids for l in f.hard[k]} | {abs(l) for i in soft_ids for l in f.soft[i][0]}
            model.update({v: m.get(v, 0) for v in vs})
    except BudgetExceeded as e:
        return MaxSatResult(Status.TIMEOUT, lb=lb, propagations=max(stats["props"], e.props - start), trace=trace, cores=all_cores)
    for v in range(1, f.num_vars + 1):
        model.setdefault(v, 0)
    got = cost(f, model)
    if got != total:
        raise AssertionError(f"model cost {got} differs from the hitting-set size {total}")
    return MaxSatResult(Status.OPTIMUM, total, model, total, stats["props"], trace, all_cores, summary)
