"""AtMostK encodings: Sinz sequential counter and an incremental totalizer."""

from __future__ import annotations

from typing import Sequence

from .formula import VarPool


def encode_seqcounter(lits: Sequence[int], k: int, pool: VarPool):
    """Sequential counter for ``sum(lits) <= k``.

    Register ``s[i][j]`` (0-based ``i`` over the first ``n-1`` inputs, ``j < k``)
    reads "at least j+1 of lits[0..i] are true".  Returns ``(clauses, aux)``.
    """
    n = len(lits)
    if k < 0:
        raise ValueError("k must be non-negative")
    if n == 0 or k >= n:
        return [], []
    if k == 0:
        return [(-l,) for l in lits], []
    s = [[pool.new() for _ in range(k)] for _ in range(n - 1)]
    aux = [v for row in s for v in row]
    cls = [(-lits[0], s[0][0])]
    cls.extend((-s[0][j],) for j in range(1, k))
    for i in range(1, n - 1):
        x = lits[i]
        cls.append((-x, s[i][0]))
        cls.append((-s[i - 1][0], s[i][0]))
        for j in range(1, k):
            cls.append((-x, -s[i - 1][j - 1], s[i][j]))
            cls.append((-s[i - 1][j], s[i][j]))
        cls.append((-x, -s[i - 1][k - 1]))
    cls.append((-lits[n - 1], -s[n - 2][k - 1]))
    return cls, aux


class _Node:
    __slots__ = ("size", "left", "right", "outs")

    def __init__(self, size, left=None, right=None, outs=None):
        self.size = size
        self.left = left
        self.right = right
        self.outs = outs if outs is not None else []


class TotalizerTree:
    """Totalizer whose counting outputs are grown on demand.

    Only the "inputs imply outputs" half is encoded, which is all an AtMostK
    needs.  ``outs[i]`` of a node is true whenever at least ``i+1`` of its
    inputs are.  Output variables are materialised up to ``bound + 1`` only,
    so raising the bound emits new clauses and never touches old ones.

    The bound itself is carried by :attr:`assumption` (the negated root output
    ``>= bound+1``), because a permanent unit would block later increases.
    """

    def __init__(self, lits: Sequence[int], pool: VarPool):
        if not lits:
            raise ValueError("totalizer needs at least one input")
        self.lits = list(lits)
        self.pool = pool
        self.bound = None
        self.clauses: list[tuple[int, ...]] = []
        self.root = self._build(self.lits)

    def _build(self, lits):
        if len(lits) == 1:
            return _Node(1, outs=[lits[0]])
        mid = len(lits) // 2
        left, right = self._build(lits[:mid]), self._build(lits[mid:])
        return _Node(len(lits), left, right)

    def _grow(self, node, cap, new):
        if node.left is None:
            return
        want = min(node.size, cap)
        have = len(node.outs)
        if want <= have:
            return
        self._grow(node.left, cap, new)
        self._grow(node.right, cap, new)
        node.outs.extend(self.pool.new() for _ in range(want - have))
        a, b, o = node.left.outs, node.right.outs, node.outs
        for i in range(len(a) + 1):
            for j in range(len(b) + 1):
                s = i + j
                if s <= have or s > want:
                    continue
                cl = []
                if i:
                    cl.append(-a[i - 1])
                if j:
                    cl.append(-b[j - 1])
                cl.append(o[s - 1])
                new.append(tuple(cl))

    def enforce(self, k: int) -> list[tuple[int, ...]]:
        """Move the bound to ``k`` (non-decreasing); return the new clauses."""
        if k < 0:
            raise ValueError("bound must be non-negative")
        if self.bound is not None and k < self.bound:
            raise ValueError(f"totalizer bound may not decrease ({self.bound} -> {k})")
        self.bound = k
        new = []
        self._grow(self.root, k + 1, new)
        self.clauses.extend(new)
        return new

    @property
    def outputs(self) -> list[int]:
        return list(self.root.outs)

    @property
    def assumption(self):
        """Literal that holds the current bound, or None when it is vacuous."""
        if self.bound is None or self.bound >= len(self.lits):
            return None
        return -self.root.outs[self.bound]

    def bound_clauses(self) -> list[tuple[int, ...]]:
        """All emitted clauses plus the unit for the current bound."""
        a = self.assumption
        return self.clauses + ([(a,)] if a is not None else [])


def totalizer_new(lits: Sequence[int], pool: VarPool) -> TotalizerTree:
    return TotalizerTree(lits, pool)


def totalizer_enforce(t: TotalizerTree, k: int) -> list[tuple[int, ...]]:
    return t.enforce(k)
