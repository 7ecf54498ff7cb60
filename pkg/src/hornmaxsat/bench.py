"""Batch experiments: generate instances, decide them through a solver, tabulate.

CSV columns (stable): family, instance, algo, drop_p, status, answer, cost,
target, wall_s, propagations.  ``status`` is the MaxSAT status (OPTIMUM,
INFEASIBLE or TIMEOUT); ``answer`` is SAT/UNSAT/UNKNOWN for the original CNF.
"""

from __future__ import annotations

import csv
import io
import os
import re
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field, fields
from typing import Iterable, Optional

from .formula import cost
from .generators import FAMILIES, InstanceSpec
from .pipeline import ALGOS, decide, encode
from .result import Status
from .sat import Budget

DEFAULT_BUDGET_S = 60.0
BUDGET_ENV = "HORNMAXSAT_TIME_BUDGET"


def default_budget() -> float:
    raw = os.environ.get(BUDGET_ENV)
    if raw is None:
        return DEFAULT_BUDGET_S
    try:
        return float(raw)
    except ValueError:
        raise ValueError(f"{BUDGET_ENV} must be a number of seconds, got {raw!r}") from None


@dataclass(frozen=True)
class BenchRow:
    family: str
    instance: str
    algo: str
    drop_p: bool
    status: str
    answer: str
    cost: Optional[int]
    target: int
    wall_s: float
    propagations: int

    @property
    def key(self):
        natural = tuple(int(t) if t.isdigit() else t for t in re.split(r"(\d+)", self.instance))
        return (self.family, natural, self.algo, self.drop_p)


COLUMNS = [f.name for f in fields(BenchRow)]


@dataclass
class BenchReport:
    rows: list = field(default_factory=list)

    def solved(self) -> dict:
        """(family, algo) -> number of instances decided within budget."""
        out: dict = {}
        for r in self.rows:
            k = (r.family, r.algo)
            out[k] = out.get(k, 0) + (r.answer != "UNKNOWN")
        return out

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.DictWriter(buf, fieldnames=COLUMNS, lineterminator="\n")
        w.writeheader()
        for r in self.rows:
            d = asdict(r)
            d["drop_p"] = int(r.drop_p)
            d["cost"] = "" if r.cost is None else r.cost
            d["wall_s"] = f"{r.wall_s:.6f}"
            w.writerow(d)
        return buf.getvalue()

    @classmethod
    def from_csv(cls, text: str) -> "BenchReport":
        rows = []
        for d in csv.DictReader(io.StringIO(text)):
            rows.append(BenchRow(d["family"], d["instance"], d["algo"], d["drop_p"] == "1", d["status"],
                                 d["answer"], int(d["cost"]) if d["cost"] else None, int(d["target"]),
                                 float(d["wall_s"]), int(d["propagations"])))
        return cls(rows)


def gnuplot_script(csv_name: str, algos=("msu3", "ihs")) -> str:
    """Instances decided vs. wall time, one curve per algorithm, read from the CSV."""
    base = os.path.splitext(os.path.basename(csv_name))[0]
    names = " ".join(algos)
    return "\n".join([
        "set datafile separator ','",
        "set key left top",
        "set xlabel 'wall time (s)'",
        "set ylabel 'instances decided'",
        "set logscale x",
        "set terminal pngcairo size 800,600",
        f"set output '{base}.png'",
        f"plot for [a in '{names}'] '{csv_name}' skip 1 \\",
        "  using (strcol(3) eq a && strcol(6) ne 'UNKNOWN' ? $9 : NaN):(1) \\",
        "  smooth cumulative with steps title a",
        "",
    ])


def run_one(spec: InstanceSpec, algo: str, drop_p: bool, seconds: Optional[float]) -> BenchRow:
    cnf, _ = spec.generate()
    h = encode(cnf, drop_p=drop_p)
    t0 = time.perf_counter()
    d = decide(h, algo, Budget(seconds=seconds) if seconds is not None else None)
    wall = round(time.perf_counter() - t0, 6)  # matches the CSV precision
    res = d.result
    if res.status is Status.OPTIMUM and cost(h.wcnf, res.model) != res.cost:
        raise AssertionError(f"{spec.name}/{algo}: model cost does not match the reported optimum")
    return BenchRow(spec.family, spec.name, algo, drop_p, res.status.value, d.answer, res.cost, h.target,
                    wall, d.propagations)


def _run_tuple(args):
    return run_one(*args)


def bench(specs: Iterable[InstanceSpec], algos: Iterable[str], drop_p: bool = False,
          seconds: Optional[float] = None, jobs: int = 1) -> BenchReport:
    algos = list(algos)
    for a in algos:
        if a not in ALGOS:
            raise ValueError(f"unknown algorithm {a!r}")
    work = [(s, a, drop_p, seconds) for s in specs for a in algos]
    for s, *_ in work:
        if s.family not in FAMILIES:
            raise ValueError(f"unknown family {s.family!r}")
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as ex:
            rows = list(ex.map(_run_tuple, work))
    else:
        rows = [run_one(*w) for w in work]
    rows.sort(key=lambda r: r.key)
    return BenchReport(rows)


def suite_specs(family: str, m_range=None, n_range=None, indices=(1,), seed: int = 1,
                comb_m=(7, 9, 11, 13)) -> list[InstanceSpec]:
    """Specs for a desk-scale slice of one family."""
    if family in ("php-pw", "php-sc"):
        lo, hi = m_range or (1, 6)
        return [InstanceSpec(family, m=m) for m in range(lo, hi + 1)]
    if family == "urq":
        lo, hi = n_range or (3, 4)
        return [InstanceSpec("urq", n=n, seed=seed, index=i) for n in range(lo, hi + 1) for i in indices]
    if family == "comb":
        lo, hi = n_range or (3, 3)
        ms = range(m_range[0], m_range[1] + 1) if m_range else comb_m
        return [InstanceSpec("comb", m=m, n=n, seed=seed, index=i) for m in ms for n in range(lo, hi + 1)
                for i in indices]
    raise ValueError(f"unknown family {family!r}")
