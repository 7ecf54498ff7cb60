"""Propositional data model.

Literals are non-zero Python ints in DIMACS convention: ``v`` is the
positive literal of variable ``v`` and ``-v`` its complement.  Clauses are
tuples of literals.  Formulas are frozen dataclasses holding tuples, so they
can be shared freely; solvers copy what they need to mutate.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence, Union

Lit = int
Clause = tuple[int, ...]
Assignment = Mapping[int, int]


class _Top:
    """Weight of hard clauses.  Never compared numerically against ints."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "TOP"

    def __reduce__(self):
        return (_Top, ())


TOP = _Top()
Weight = Union[int, _Top]


class _HardViolation:
    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "HARD_VIOLATION"

    def __reduce__(self):
        return (_HardViolation, ())


HARD_VIOLATION = _HardViolation()


class ClauseStatus(enum.Enum):
    SATISFIED = "satisfied"
    FALSIFIED = "falsified"
    UNDETERMINED = "undetermined"


def var(lit: Lit) -> int:
    return lit if lit > 0 else -lit


def neg(lit: Lit) -> Lit:
    return -lit


def lit_value(lit: Lit, a: Assignment):
    """Value of ``lit`` under ``a`` (1, 0) or None when unassigned."""
    v = a.get(lit if lit > 0 else -lit)
    if v is None:
        return None
    return v if lit > 0 else 1 - v


def normalize(clause: Iterable[Lit]) -> Clause:
    """Sort by (variable, polarity) with the negative literal first; drop repeats."""
    return tuple(sorted(set(clause), key=lambda l: (abs(l), l > 0)))


def is_tautology(clause: Iterable[Lit]) -> bool:
    s = set(clause)
    return any(-l in s for l in s)


def is_horn(clause: Iterable[Lit]) -> bool:
    return sum(1 for l in set(clause) if l > 0) <= 1


def eval_clause(clause: Sequence[Lit], a: Assignment) -> ClauseStatus:
    undetermined = False
    for l in clause:
        v = lit_value(l, a)
        if v == 1:
            return ClauseStatus.SATISFIED
        if v is None:
            undetermined = True
    return ClauseStatus.UNDETERMINED if undetermined else ClauseStatus.FALSIFIED


def _check_vars(clauses, num_vars, what):
    for c in clauses:
        for l in c:
            if l == 0 or abs(l) > num_vars:
                raise ValueError(f"{what}: literal {l} outside 1..{num_vars}")


@dataclass(frozen=True)
class CnfFormula:
    num_vars: int
    clauses: tuple[Clause, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "clauses", tuple(tuple(c) for c in self.clauses))
        if self.num_vars < 0:
            raise ValueError("num_vars must be non-negative")
        _check_vars(self.clauses, self.num_vars, "clause")

    def is_horn(self) -> bool:
        return all(is_horn(c) for c in self.clauses)

    def evaluate(self, a: Assignment) -> bool:
        """True iff every clause is satisfied by the (total) assignment ``a``."""
        return all(eval_clause(c, a) is ClauseStatus.SATISFIED for c in self.clauses)


@dataclass(frozen=True)
class WcnfFormula:
    """Partial MaxSAT instance.  Soft clause ``i`` is ``soft[i]``; ids never move."""

    num_vars: int
    hard: tuple[Clause, ...] = ()
    soft: tuple[tuple[Clause, int], ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "hard", tuple(tuple(c) for c in self.hard))
        object.__setattr__(self, "soft", tuple((tuple(c), w) for c, w in self.soft))
        _check_vars(self.hard, self.num_vars, "hard clause")
        _check_vars((c for c, _ in self.soft), self.num_vars, "soft clause")
        for c, w in self.soft:
            if w is TOP or not isinstance(w, int) or w < 1:
                raise ValueError(f"soft clause {c} has invalid weight {w!r}")

    @property
    def top(self) -> int:
        return 1 + sum(w for _, w in self.soft)

    @property
    def soft_clauses(self) -> tuple[Clause, ...]:
        return tuple(c for c, _ in self.soft)

    def weighted(self) -> list[tuple[Clause, Weight]]:
        return [(c, TOP) for c in self.hard] + list(self.soft)

    def is_horn(self) -> bool:
        return all(is_horn(c) for c in self.hard) and all(is_horn(c) for c, _ in self.soft)

    def unit_weights(self) -> bool:
        return all(w == 1 for _, w in self.soft)


def is_horn_formula(f) -> bool:
    """Horn check for a CnfFormula, WcnfFormula or a plain clause list."""
    if isinstance(f, (CnfFormula, WcnfFormula)):
        return f.is_horn()
    return all(is_horn(c) for c in f)


def cost(f: WcnfFormula, a: Assignment):
    """Falsified soft weight under a total assignment, or HARD_VIOLATION."""
    missing = [v for v in range(1, f.num_vars + 1) if v not in a]
    if missing:
        raise ValueError(f"assignment is partial: {len(missing)} variable(s) unassigned, first {missing[0]}")
    for c in f.hard:
        if eval_clause(c, a) is not ClauseStatus.SATISFIED:
            return HARD_VIOLATION
    return sum(w for c, w in f.soft if eval_clause(c, a) is not ClauseStatus.SATISFIED)


def model_to_lits(model: Assignment, num_vars: int) -> list[int]:
    return [v if model.get(v, 0) else -v for v in range(1, num_vars + 1)]


@dataclass
class VarPool:
    """Monotone allocator of fresh variable indices."""

    top: int = 0

    def new(self) -> int:
        self.top += 1
        return self.top
