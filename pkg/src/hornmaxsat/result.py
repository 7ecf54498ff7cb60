"""Result types shared by the solvers."""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Optional


class Status(enum.Enum):
    SAT = "SAT"
    UNSAT = "UNSAT"
    OPTIMUM = "OPTIMUM"
    INFEASIBLE = "INFEASIBLE"  # hard clauses alone are unsatisfiable
    TIMEOUT = "TIMEOUT"


@dataclass
class TraceRecord:
    """One core-extraction step of a MaxSAT run."""

    core: list  # soft ids
    propagations: int
    lb: int
    bound: Optional[int]
    phase: str = "disjoint"
    relaxed: list = field(default_factory=list)

    def as_dict(self):
        return {
            "phase": self.phase,
            "core": list(self.core),
            "propagations": self.propagations,
            "lb": self.lb,
            "bound": self.bound,
            "relaxed": list(self.relaxed),
        }


@dataclass
class MaxSatResult:
    status: Status
    cost: Optional[int] = None
    model: Optional[dict] = None
    lb: int = 0
    propagations: int = 0
    trace: list = field(default_factory=list)
    cores: list = field(default_factory=list)
    parts: list = field(default_factory=list)  # per-component {'softs', 'cost'}

    @property
    def solved(self) -> bool:
        return self.status in (Status.OPTIMUM, Status.INFEASIBLE)
