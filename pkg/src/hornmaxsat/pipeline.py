"""Decide satisfiability of a CNF by solving its dual-rail Horn MaxSAT image."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from . import ihs, msu3
from .formula import CnfFormula
from .hornenc import HencResult, NoWitness, decode, henc, henc_reduced, restore_p
from .hornenc import drop_p as _drop_p
from .result import MaxSatResult, Status
from .sat import Budget

ALGOS = {"msu3": msu3.solve, "ihs": ihs.solve}

SAT = "SAT"
UNSAT = "UNSAT"
UNKNOWN = "UNKNOWN"


@dataclass
class Decision:
    answer: str  # SAT, UNSAT or UNKNOWN
    result: MaxSatResult  # MaxSAT result on the instance as given
    target: int
    model: Optional[dict] = None  # original-variable model when SAT
    restored: Optional[MaxSatResult] = None  # re-solve with P clauses put back

    @property
    def propagations(self) -> int:
        return self.result.propagations + (self.restored.propagations if self.restored else 0)


def run_algo(algo: str, h: HencResult, budget: Optional[Budget] = None) -> MaxSatResult:
    try:
        fn = ALGOS[algo]
    except KeyError:
        raise ValueError(f"unknown algorithm {algo!r}") from None
    return fn(h.wcnf, budget=budget)


def _try_decode(h, model):
    try:
        return decode(h, model)
    except NoWitness:
        return None


def decide(h: HencResult, algo: str = "msu3", budget: Optional[Budget] = None) -> Decision:
    """SAT iff the optimum equals the target.

    Without P clauses the optimum is only a lower bound: above the target it
    still proves UNSAT, and a decodable model still proves SAT.  Anything
    else is settled by solving again with the P clauses restored.
    """
    res = run_algo(algo, h, budget)
    if res.status is Status.TIMEOUT:
        return Decision(UNKNOWN, res, h.target)
    if res.status is Status.INFEASIBLE:
        return Decision(UNSAT, res, h.target)
    if res.cost > h.target:
        return Decision(UNSAT, res, h.target)
    x = _try_decode(h, res.model)
    if x is not None:
        return Decision(SAT, res, h.target, x)
    if h.has_p:  # pragma: no cover - optimum <= target with P always decodes
        raise AssertionError("optimum at the target without a decodable model")
    full = restore_p(h)
    res2 = run_algo(algo, full, budget)
    if res2.status is Status.TIMEOUT:
        return Decision(UNKNOWN, res, h.target, restored=res2)
    if res2.status is Status.INFEASIBLE or res2.cost > full.target:
        return Decision(UNSAT, res, h.target, restored=res2)
    return Decision(SAT, res, h.target, decode(full, res2.model), restored=res2)


def encode(f: CnfFormula, drop_p: bool = False, reduce_vars: bool = False) -> HencResult:
    h = henc_reduced(f) if reduce_vars else henc(f)
    return _drop_p(h) if drop_p else h


def decide_cnf(f: CnfFormula, algo: str = "msu3", drop_p: bool = False, reduce_vars: bool = False,
               budget: Optional[Budget] = None) -> Decision:
    return decide(encode(f, drop_p, reduce_vars), algo, budget)
