"""MaxSAT resolution on weighted clauses and the scripted PHP refutation.

One step on ``(x | A, u)`` and ``(-x | B, w)`` with ``k = min(u, w)`` yields

    (A | B, k), (x | A, u - k), (-x | B, w - k), (x | A | -B, k), (-x | -A | B, k)

where ``TOP - k`` stays ``TOP``.  The last two results are not clauses in
general: ``-B`` is the negation of the clause ``B``.  A stored record is
``lits | -(neg)``, i.e. a clause ``lits`` plus an optional negated clause
``neg``; it is falsified when every literal of ``lits`` is false and some
literal of ``neg`` is true.  In clausal mode such records are expanded into
``(x|A|-b1), (x|A|b1|-b2), ...``, exactly one of which fails whenever the
record does.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence

import numpy as np

from .formula import TOP, normalize
from .generators import PhpParams, gen_php, php_var
from .hornenc import drop_p as _drop_p
from .hornenc import henc


class MxresError(ValueError):
    pass


class ReuseError(MxresError):
    """A consumed record was offered as a premise."""


class PivotError(MxresError):
    pass


def wmin(u, w):
    if u is TOP:
        return w
    if w is TOP:
        return u
    return min(u, w)


def ominus(u, w):
    """``u - w`` with TOP absorbing on the left."""
    return TOP if u is TOP else u - w


@dataclass
class Rec:
    lits: tuple
    neg: Optional[tuple]  # None for plain clauses
    weight: object
    consumed: bool = False

    @property
    def clausal(self) -> bool:
        return self.neg is None

    @property
    def empty(self) -> bool:
        return self.neg is None and not self.lits

    def size(self) -> int:
        return len(self.lits) + (len(self.neg) if self.neg else 0)

    def __str__(self):
        body = " | ".join(map(str, self.lits))
        if self.neg:
            body = (body + " | " if body else "") + "-(" + " | ".join(map(str, self.neg)) + ")"
        w = "T" if self.weight is TOP else self.weight
        return f"({body or 'empty'}, {w})"


def canonical(lits: Iterable[int], neg: Optional[Iterable[int]] = None):
    """Normal form of ``lits | -(neg)``; returns None for tautologies.

    Literals of ``neg`` that also sit in ``lits`` cannot make the record fail
    and are removed; a complement of one of them in ``lits``, or a
    complementary pair inside ``neg``, makes ``-(neg)`` irrelevant.  A
    single-literal ``neg`` folds into the clause.
    """
    c = set(lits)
    if any(-l in c for l in c):
        return None
    if neg is None:
        return normalize(c), None
    d = set(neg) - c
    if not d:
        return None
    if any(-l in c for l in d) or any(-l in d for l in d):
        return normalize(c), None
    if len(d) == 1:
        (b,) = d
        if b in c:  # pragma: no cover - removed above
            return None
        c2 = c | {-b}
        if any(-l in c2 for l in c2):
            return None
        return normalize(c2), None
    return normalize(c), normalize(d)


def expand(lits, neg):
    """Clausal expansion of ``lits | -(neg)`` (neg has two or more literals)."""
    out = []
    prefix = []
    for b in neg:
        out.append(tuple(lits) + tuple(prefix) + (-b,))
        prefix.append(b)
    return out


class WStore:
    """Weighted records with stable ids and consumed flags."""

    def __init__(self, num_vars: int, clausal: bool = False):
        self.num_vars = num_vars
        self.clausal = clausal
        self.recs: dict[int, Rec] = {}
        self.next_id = 0
        self.log: list[tuple] = []  # (id1, id2, pivot, new ids)
        self._index: dict[tuple, list[int]] = {}
        self._empties = 0

    def copy(self) -> "WStore":
        s = WStore(self.num_vars, self.clausal)
        s.recs = {i: Rec(r.lits, r.neg, r.weight, r.consumed) for i, r in self.recs.items()}
        s.next_id = self.next_id
        s.log = list(self.log)
        s._index = {k: list(v) for k, v in self._index.items()}
        s._empties = self._empties
        return s

    def _put(self, lits, neg, weight):
        i = self.next_id
        self.next_id += 1
        self.recs[i] = Rec(lits, neg, weight)
        if neg is None and not lits and weight is not TOP:
            self._empties += weight
        if neg is None:
            self._index.setdefault((lits, weight is TOP), []).append(i)
        return i

    def add(self, lits: Iterable[int], weight, neg: Optional[Iterable[int]] = None) -> list[int]:
        """Insert after normalization; weight-0 and tautological records vanish."""
        if weight is not TOP and weight <= 0:
            return []
        can = canonical(lits, neg)
        if can is None:
            return []
        c, d = can
        if d is not None and self.clausal:
            ids = []
            for cl in expand(c, d):
                ids.extend(self.add(cl, weight))
            return ids
        return [self._put(c, d, weight)]

    def live(self):
        return [(i, r) for i, r in self.recs.items() if not r.consumed]

    def find(self, lits: Iterable[int], hard: bool) -> Optional[int]:
        """Lowest live id holding the clause ``lits`` with the given hardness."""
        for i in self._index.get((normalize(lits), hard), ()):
            if not self.recs[i].consumed:
                return i
        return None

    def consume(self, i: int):
        r = self.recs[i]
        r.consumed = True
        if r.empty and r.weight is not TOP:
            self._empties -= r.weight

    @property
    def empties(self) -> int:
        """Total weight of live empty soft records."""
        return self._empties

    @property
    def hard_empty(self) -> bool:
        return any(r.empty and r.weight is TOP for _, r in self.live())

    def consumed_ids(self):
        return {i for i, r in self.recs.items() if r.consumed}

    def cost_vector(self, nvars: Optional[int] = None) -> np.ndarray:
        """Cost of every total assignment (row k = bits of k); inf marks a hard violation."""
        n = self.num_vars if nvars is None else nvars
        if n > 20:
            raise ValueError("exhaustive cost check limited to 20 variables")
        rows = np.arange(1 << n, dtype=np.int64)
        X = ((rows[:, None] >> np.arange(n)) & 1).astype(bool)
        total = np.zeros(1 << n)
        for _, r in self.live():
            fails = np.ones(1 << n, dtype=bool)
            for l in r.lits:
                col = X[:, abs(l) - 1]
                fails &= ~col if l > 0 else col
            if r.neg:
                some = np.zeros(1 << n, dtype=bool)
                for l in r.neg:
                    col = X[:, abs(l) - 1]
                    some |= col if l > 0 else ~col
                fails &= some
            total[fails] += np.inf if r.weight is TOP else r.weight
        return total


def mxres_step(store: WStore, id1: int, id2: int, pivot: int) -> list[int]:
    """Resolve record ``id1`` (holding ``pivot``) with ``id2`` (holding ``-pivot``)."""
    for i in (id1, id2):
        if i not in store.recs:
            raise MxresError(f"no record {i}")
        if store.recs[i].consumed:
            raise ReuseError(f"record {i} was already consumed")
        if not store.recs[i].clausal:
            raise MxresError(f"record {i} is not a clause")
    r1, r2 = store.recs[id1], store.recs[id2]
    if pivot not in r1.lits or -pivot not in r2.lits:
        raise PivotError(f"pivot {pivot} must occur in record {id1} and its complement in record {id2}")
    x = pivot
    A = [l for l in r1.lits if l != x]
    B = [l for l in r2.lits if l != -x]
    u, w = r1.weight, r2.weight
    k = wmin(u, w)
    store.consume(id1)
    store.consume(id2)
    new = []
    new += store.add(A + B, k)
    new += store.add([x] + A, ominus(u, k))
    new += store.add([-x] + B, ominus(w, k))
    new += store.add([x] + A, k, neg=B) if B else []
    new += store.add([-x] + B, k, neg=A) if A else []
    store.log.append((id1, id2, x, tuple(new)))
    return new


def check_cost_preservation(before: WStore, after: WStore, nvars: Optional[int] = None) -> bool:
    n = nvars if nvars is not None else max(before.num_vars, after.num_vars)
    if n > 12:
        raise ValueError("exhaustive check is limited to 12 variables")
    a, b = before.cost_vector(n), after.cost_vector(n)
    return bool(np.array_equal(a, b))


def drive(store: WStore, steps: Sequence[tuple[int, int, int]], check: bool = False) -> list[list[int]]:
    """Apply ``(id1, id2, pivot)`` steps in order, optionally re-checking cost each time."""
    out = []
    for id1, id2, pivot in steps:
        before = store.copy() if check else None
        out.append(mxres_step(store, id1, id2, pivot))
        if check and not check_cost_preservation(before, store):
            raise MxresError(f"step ({id1}, {id2}, {pivot}) changed the cost function")
    return out


# -- scripted PHP derivation ---------------------------------------------------


class ScriptMismatch(RuntimeError):
    def __init__(self, phase, index, step, what):
        super().__init__(f"{phase} constraint {index}, step {step}: {what}")
        self.phase, self.index, self.step = phase, index, step


@dataclass
class MrCertReport:
    m: int
    empties: int
    steps: int
    literal_work: int
    l_empties: int
    m_empties: int
    clausal: bool
    p_dropped: bool
    script: list = field(default_factory=list)  # (id1, id2, pivot)
    reuse_violations: int = 0

    def script_json(self) -> str:
        return json.dumps({"m": self.m, "clausal": self.clausal, "p_dropped": self.p_dropped,
                           "steps": [list(s) for s in self.script]})


def php_store(m: int, clausal: bool = False, drop_p: bool = True) -> tuple[WStore, object]:
    h = henc(gen_php(PhpParams(m))[0])
    if drop_p:
        h = _drop_p(h)
    st = WStore(h.wcnf.num_vars, clausal)
    for c in h.wcnf.hard:
        st.add(c, TOP)
    for c, w in h.wcnf.soft:
        st.add(c, w)
    return st, h


def _script(m, pv, nv):
    """Steps as (phase, index, clause1, hard1, clause2, hard2, pivot) by content."""
    out = []
    for i in range(1, m + 2):
        for k in range(1, m + 1):
            rest = tuple(-nv(i, l) for l in range(k, m + 1))
            out.append(("L", i, (nv(i, k),), False, rest, k == 1, nv(i, k)))
    for j in range(1, m + 1):
        p = lambda a: pv(a, j)  # noqa: E731
        out.append(("M", j, (p(1),), False, (-p(1), -p(2)), True, p(1)))
        out.append(("M", j, (p(2),), False, (-p(2),), False, p(2)))
        for l in range(2, m + 1):
            carried = tuple(p(a) for a in range(1, l + 1))
            out.append(("M", j, carried, False, (-p(1), -p(l + 1)), True, p(1)))
            for k in range(2, l + 1):
                cur = tuple(p(a) for a in range(k, l + 1)) + (-p(l + 1),)
                out.append(("M", j, cur, False, (-p(k), -p(l + 1)), True, p(k)))
            out.append(("M", j, (p(l + 1),), False, (-p(l + 1),), False, p(l + 1)))
    return out


def certify_php_mr(m: int, clausal: bool = False, drop_p: bool = True, check: bool = False) -> MrCertReport:
    """Run the per-constraint resolution script on the dual-rail PHP instance.

    ``check`` re-verifies cost preservation after every step (small m only).
    """
    if m < 1:
        raise ValueError("m must be at least 1")
    st, h = php_store(m, clausal, drop_p)

    def pv(i, j):
        return h.map.p(php_var(m, i, j))

    def nv(i, j):
        return h.map.n(php_var(m, i, j))

    script = []
    work = 0
    per = {"L": 0, "M": 0}
    pos = {}
    for phase, index, c1, h1, c2, h2, pivot in _script(m, pv, nv):
        pos[(phase, index)] = pos.get((phase, index), 0) + 1
        step = pos[(phase, index)]
        id1, id2 = st.find(c1, h1), st.find(c2, h2)
        if id1 is None or id2 is None:
            missing = c1 if id1 is None else c2
            raise ScriptMismatch(phase, index, step, f"expected clause {missing} is not in the store")
        before_empty = st.empties
        before = st.copy() if check else None
        new = mxres_step(st, id1, id2, pivot)
        if check and not check_cost_preservation(before, st):
            raise ScriptMismatch(phase, index, step, "cost function changed")
        work += len(st.recs[id1].lits) + len(st.recs[id2].lits) + sum(st.recs[i].size() for i in new)
        per[phase] += st.empties - before_empty
        script.append((id1, id2, pivot))

    if st.empties != m * (m + 1) + 1:
        raise ScriptMismatch("total", 0, len(script), f"{st.empties} empty clauses instead of m(m+1)+1")
    return MrCertReport(m, st.empties, len(script), work, per["L"], per["M"], clausal, drop_p, script,
                        _reuse_violations(st))


def _reuse_violations(st: WStore) -> int:
    used = [i for id1, id2, _, _ in st.log for i in (id1, id2)]
    return len(used) - len(set(used))


def replay(m: int, script: Sequence[Sequence[int]], clausal: bool = False, drop_p: bool = True) -> WStore:
    """Re-apply a recorded id script to a fresh store."""
    st, _ = php_store(m, clausal, drop_p)
    drive(st, [tuple(s) for s in script])
    return st
