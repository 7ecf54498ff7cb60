"""Core-guided MaxSAT in the MSU3 style, plus the scripted PHP lower-bound run.

Each variable-disjoint component is solved on its own.  Within a component:

1. disjoint-core phase: assume every soft clause, take the core, drop its
   members from the assumptions and repeat until satisfiable.  On Horn
   instances every check is one LTUR run.
2. MSU3 phase: all softs seen in cores are relaxed and counted by one
   totalizer whose bound equals the lower bound.  Each UNSAT answer relaxes
   the new core members (if any) and raises the bound by one.  The first
   SAT answer is optimal.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Sequence

from .cardinality import TotalizerTree
from .formula import VarPool, WcnfFormula, cost
from .generators import PhpParams, gen_php, php_var
from .hornenc import drop_p as _drop_p
from .hornenc import henc
from .oracle import SoftOracle, components
from .result import MaxSatResult, Status, TraceRecord
from .sat import Budget, BudgetExceeded, Engine


class _Infeasible(Exception):
    pass


def _check_unit_weights(f: WcnfFormula):
    if not f.unit_weights():
        raise ValueError("only unit soft weights are supported")


def _clause_vars(f: WcnfFormula, hard_ids, soft_ids):
    vs = set()
    for k in hard_ids:
        vs.update(abs(l) for l in f.hard[k])
    for i in soft_ids:
        vs.update(abs(l) for l in f.soft[i][0])
    return vs


class _Run:
    """Per-call solver state shared across components."""

    def __init__(self, f: WcnfFormula, budget: Optional[Budget]):
        self.f = f
        self.budget = budget
        self.pool = VarPool(f.num_vars)
        self.lb = 0
        self.props = 0
        self.trace: list[TraceRecord] = []
        self.cores: list[list[int]] = []

    def record(self, core, props, bound, phase, relaxed=()):
        self.trace.append(TraceRecord(sorted(core), props, self.lb, bound, phase, sorted(relaxed)))

    def part(self, hard_ids, soft_ids):
        f = self.f
        oracle = SoftOracle(f.num_vars, [f.hard[k] for k in hard_ids],
                            [(i, f.soft[i][0]) for i in soft_ids], self.pool)
        active = list(soft_ids)
        cores = []
        while True:
            chk = oracle.check(active, self.budget)
            self.props += chk.propagations
            if chk.sat:
                model = chk.model
                break
            if not chk.core:
                raise _Infeasible()
            cores.append(chk.core)
            self.cores.append(chk.core)
            self.lb += 1
            self.record(chk.core, chk.propagations, len(cores), "disjoint")
            drop = set(chk.core)
            active = [i for i in active if i not in drop]
        if not cores:
            return 0, model

        relaxed = sorted({i for c in cores for i in c})
        bound = len(cores)
        while True:
            rel = set(relaxed)
            tot = TotalizerTree([oracle.relax_lit(i) for i in relaxed], self.pool)
            tot.enforce(bound)
            eng = Engine(self.pool.top, oracle.clauses + tot.clauses)
            while True:
                assumptions = [oracle.lit_of[i] for i in soft_ids if i not in rel]
                bl = tot.assumption
                if bl is not None:
                    assumptions.append(bl)
                out = eng.solve(assumptions, self.budget)
                self.props += out.propagations
                if out.sat:
                    return bound, out.model
                new = [oracle.id_of[l] for l in out.core if l in oracle.id_of]
                if not new and bl not in out.core:
                    raise _Infeasible()
                bound += 1
                self.lb += 1
                self.cores.append(new)
                self.record(new, out.propagations, bound, "msu3", relaxed + new)
                if new:
                    relaxed = sorted(rel | set(new))
                    break
                for c in tot.enforce(bound):
                    eng.add_clause(c)


def _solve_parts(f: WcnfFormula, parts, budget):
    run = _Run(f, budget)
    start = budget.used_props if budget else 0
    model = {}
    summary = []
    try:
        for hard_ids, soft_ids in parts:
            c, m = run.part(hard_ids, soft_ids)
            summary.append({"softs": list(soft_ids), "cost": c})
            vs = _clause_vars(f, hard_ids, soft_ids)
            model.update({v: m.get(v, 0) for v in vs})
    except _Infeasible:
        return MaxSatResult(Status.INFEASIBLE, lb=run.lb, propagations=run.props,
                            trace=run.trace, cores=run.cores)
    except BudgetExceeded as e:
        return MaxSatResult(Status.TIMEOUT, lb=run.lb, propagations=max(run.props, e.props - start),
                            trace=run.trace, cores=run.cores)
    for v in range(1, f.num_vars + 1):
        model.setdefault(v, 0)
    total = sum(p["cost"] for p in summary)
    got = cost(f, model)
    if got != total:
        raise AssertionError(f"model cost {got} differs from the computed optimum {total}")
    return MaxSatResult(Status.OPTIMUM, total, model, run.lb, run.props, run.trace, run.cores, summary)


def solve(f: WcnfFormula, split_components: bool = True, budget: Optional[Budget] = None) -> MaxSatResult:
    """Exact minimum cost of ``f`` (unit soft weights)."""
    _check_unit_weights(f)
    if split_components:
        parts = components(f)
    else:
        parts = [(list(range(len(f.hard))), list(range(len(f.soft))))]
    return _solve_parts(f, parts, budget)


def solve_partitioned(f: WcnfFormula, blocks: Sequence[Sequence[int]], budget: Optional[Budget] = None) -> MaxSatResult:
    """Solve with the soft clauses split into blocks that share no variables.

    ``result.parts`` holds one entry per block, in block order.
    """
    _check_unit_weights(f)
    block_of = {}
    for b, ids in enumerate(blocks):
        for i in ids:
            if i in block_of:
                raise ValueError(f"soft clause {i} appears in two blocks")
            block_of[i] = b
    if set(block_of) != set(range(len(f.soft))):
        raise ValueError("blocks must cover every soft clause")
    grouped = [([], []) for _ in blocks]
    loose = []
    for hard_ids, soft_ids in components(f):
        owners = {block_of[i] for i in soft_ids}
        if len(owners) > 1:
            raise ValueError(f"blocks {sorted(owners)} are linked through shared variables")
        if not owners:
            loose.append((hard_ids, soft_ids))
            continue
        b = owners.pop()
        grouped[b][0].extend(hard_ids)
        grouped[b][1].extend(soft_ids)
    res = _solve_parts(f, [(sorted(h), sorted(s)) for h, s in grouped] + loose, budget)
    if res.status is Status.OPTIMUM:
        res.parts = res.parts[: len(blocks)]
    return res


# -- scripted PHP certificate ------------------------------------------------


class CertificationError(RuntimeError):
    def __init__(self, phase, index, iteration, what):
        super().__init__(f"{phase} phase, constraint {index}, iteration {iteration}: {what}")
        self.phase, self.index, self.iteration = phase, index, iteration


@dataclass
class CgCertReport:
    m: int
    lb: int
    up_steps: int
    per_phase: dict
    l_lb: int
    m_lb: int
    p_dropped: bool
    steps: list = field(default_factory=list)  # (phase, index, iteration, propagations)
    relaxation: str = ("each soft (n_il) of L_i gets its own relaxation variable r_il, "
                       "with AtMost1 over r_i1..r_im")

    @property
    def target(self) -> int:
        return self.m * (self.m + 1)


def certify_php_cg(m: int, drop_p: bool = True, budget: Optional[Budget] = None) -> CgCertReport:
    """Replay the per-constraint core schedule on the dual-rail pigeonhole formula.

    L phase: for each pigeon i, assuming the m soft units (n_i1..n_im) falsifies
    the encoded at-least-one clause by propagation alone.  M phase: for each
    hole j, iteration 1 assumes (p_1j), (p_2j) and hits a pairwise clause;
    iteration k >= 2 assumes (p_{k+1,j}) with r_1j..r_kj relaxed through
    (r_lj | p_lj) and bounded by AtMost(k-1), and propagation again ends in a
    conflict.  Every conflict is checked to avoid the P clauses.
    """
    if m < 1:
        raise ValueError("m must be at least 1")
    h = henc(gen_php(PhpParams(m))[0])
    if drop_p:
        h = _drop_p(h)
    w = h.wcnf
    p_ids = set(h.p_clause_ids)
    pool = VarPool(w.num_vars)

    def pv(i, j):
        return h.map.p(php_var(m, i, j))

    def nv(i, j):
        return h.map.n(php_var(m, i, j))

    steps = []
    per = {"L": 0, "M": 0}
    l_lb = m_lb = 0

    def conflict_or_fail(eng, assumptions, phase, index, it, banned):
        conflict, props = eng.propagate(assumptions, budget)
        if conflict is None:
            raise CertificationError(phase, index, it, "propagation reached no conflict")
        cls, _ = eng.ancestry(conflict)
        if cls & banned:
            raise CertificationError(phase, index, it, "conflict depends on a P clause")
        steps.append((phase, index, it, props))
        per[phase] += props
        return cls

    eng = Engine(w.num_vars, w.hard)
    for i in range(1, m + 2):
        conflict_or_fail(eng, [nv(i, l) for l in range(1, m + 1)], "L", i, 1, p_ids)
        l_lb += 1
        rs = [pool.new() for _ in range(m)]
        tot = TotalizerTree(rs, pool)
        tot.enforce(1)

    for j in range(1, m + 1):
        col = {-pv(i, j) for i in range(1, m + 2)}
        eng = Engine()
        banned = set()
        if not drop_p:
            for i in range(1, m + 2):
                banned.add(eng.add_clause((-pv(i, j), -nv(i, j))))
        for c in w.hard:
            if len(c) == 2 and set(c) <= col:
                eng.add_clause(c)
        conflict_or_fail(eng, [pv(1, j), pv(2, j)], "M", j, 1, banned)
        m_lb += 1
        rs = []
        for l in (1, 2):
            rs.append(pool.new())
            eng.add_clause((rs[-1], pv(l, j)))
        for k in range(2, m + 1):
            mark, top = len(eng.clauses), pool.top
            tot = TotalizerTree(rs, pool)
            for c in tot.enforce(k - 1):
                eng.add_clause(c)
            conflict_or_fail(eng, [tot.assumption, pv(k + 1, j)], "M", j, k, banned)
            m_lb += 1
            eng.truncate(mark)
            pool.top = top  # the truncated block's auxiliaries are free again
            rs.append(pool.new())
            eng.add_clause((rs[-1], pv(k + 1, j)))

    lb = l_lb + m_lb
    if lb != m * (m + 1) + 1:
        raise CertificationError("total", 0, 0, f"lower bound {lb} differs from m(m+1)+1")
    return CgCertReport(m, lb, per["L"] + per["M"], per, l_lb, m_lb, drop_p, steps)
