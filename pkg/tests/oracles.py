"""Reference oracles, independent of the package's solvers.

Brute force enumerates every total assignment with numpy; ``rc2_optimum``
and ``glucose_sat`` defer to PySAT for instances too large to enumerate.
"""

from __future__ import annotations

import numpy as np
from pysat.examples.rc2 import RC2
from pysat.formula import WCNF
from pysat.solvers import Glucose4

MAX_BRUTE_VARS = 20


def assignments(n: int) -> np.ndarray:
    """Boolean matrix with one row per assignment of n variables (row k = bits of k)."""
    if n > MAX_BRUTE_VARS:
        raise ValueError("too many variables to enumerate")
    rows = np.arange(1 << n, dtype=np.int64)
    return ((rows[:, None] >> np.arange(n)) & 1).astype(bool)


def falsified(clause, X: np.ndarray) -> np.ndarray:
    out = np.ones(X.shape[0], dtype=bool)
    for l in clause:
        col = X[:, abs(l) - 1]
        out &= ~col if l > 0 else col
    return out


def brute_sat(num_vars, clauses):
    """A satisfying assignment as {var: 0/1}, or None."""
    X = assignments(num_vars)
    ok = np.ones(X.shape[0], dtype=bool)
    for c in clauses:
        ok &= ~falsified(c, X)
    idx = np.flatnonzero(ok)
    if idx.size == 0:
        return None
    row = X[idx[0]]
    return {v + 1: int(row[v]) for v in range(num_vars)}


def brute_cost_vector(num_vars, hard, soft):
    """Cost of every assignment; hard violations are inf.  ``soft`` holds (clause, weight)."""
    X = assignments(num_vars)
    cost = np.zeros(X.shape[0])
    for c in hard:
        cost[falsified(c, X)] = np.inf
    for c, w in soft:
        cost += falsified(c, X) * w
    return cost


def brute_maxsat(num_vars, hard, soft):
    """Minimum cost, or None when the hard clauses are unsatisfiable."""
    best = brute_cost_vector(num_vars, hard, soft).min()
    return None if np.isinf(best) else int(best)


def rc2_optimum(num_vars, hard, soft):
    """Minimum cost via PySAT's RC2, or None when the hard part is infeasible."""
    w = WCNF()
    for c in hard:
        w.append(list(c))
    for c, wt in soft:
        w.append(list(c), weight=wt)
    if num_vars:
        w.nv = max(w.nv, num_vars)
    if not glucose_sat(hard):
        return None
    with RC2(w) as rc2:
        rc2.compute()
        return rc2.cost


def glucose_sat(clauses) -> bool:
    with Glucose4(bootstrap_with=[list(c) for c in clauses]) as s:
        return s.solve()


def random_cnf(rng: np.random.Generator, max_vars=10, max_clauses=30, max_width=4):
    n = int(rng.integers(1, max_vars + 1))
    m = int(rng.integers(1, max_clauses + 1))
    clauses = []
    for _ in range(m):
        k = int(rng.integers(1, min(max_width, n) + 1))
        vs = rng.choice(np.arange(1, n + 1), size=k, replace=False)
        signs = rng.integers(0, 2, size=k) * 2 - 1
        clauses.append(tuple(int(v * s) for v, s in zip(vs, signs)))
    return n, clauses


def random_horn(rng: np.random.Generator, max_vars=12, max_clauses=30, max_width=4):
    """Random Horn clauses: at most one positive literal each, some facts and goals."""
    n = int(rng.integers(1, max_vars + 1))
    m = int(rng.integers(0, max_clauses + 1))
    clauses = []
    for _ in range(m):
        k = int(rng.integers(1, min(max_width, n) + 1))
        vs = [int(v) for v in rng.choice(np.arange(1, n + 1), size=k, replace=False)]
        lits = [-v for v in vs]
        if rng.random() < 0.7:
            lits[0] = vs[0]
        clauses.append(tuple(lits))
    return n, clauses


def is_model(clauses, model) -> bool:
    return all(any((model[abs(l)] == 1) == (l > 0) for l in c) for c in clauses)

