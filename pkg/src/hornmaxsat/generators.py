"""Benchmark families: pigeonhole (two AtMost1 encodings), Urquhart-style
Tseitin parity formulas, and their disjunctive combination."""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product
from typing import Iterator

import numpy as np

from .cardinality import encode_seqcounter
from .formula import CnfFormula, VarPool

PAIRWISE = "pairwise"
SEQCOUNTER = "seqcounter"
URQ_DEGREE = 5


@dataclass(frozen=True)
class PhpParams:
    m: int  # holes; pigeons = m + 1
    atmost1: str = PAIRWISE

    def __post_init__(self):
        if self.m < 1:
            raise ValueError("PHP needs at least one hole")
        if self.atmost1 not in (PAIRWISE, SEQCOUNTER):
            raise ValueError(f"unknown AtMost1 encoding {self.atmost1!r}")

    @property
    def family(self) -> str:
        return "php-pw" if self.atmost1 == PAIRWISE else "php-sc"

    def provenance(self) -> str:
        return f"generator: {self.family} m={self.m}"


@dataclass(frozen=True)
class UrqParams:
    n: int
    seed: int = 1
    index: int = 1

    def __post_init__(self):
        if self.n < 3:
            raise ValueError("URQ needs n >= 3")

    def provenance(self) -> str:
        return f"generator: urq n={self.n} seed={self.seed} index={self.index}"


@dataclass
class VarLayout:
    """Names such as ``x[2,3]`` mapped to DIMACS indices."""

    index: dict = field(default_factory=dict)

    def add(self, name: str, v: int):
        if name in self.index:
            raise ValueError(f"duplicate variable name {name}")
        self.index[name] = v

    def __getitem__(self, name):
        return self.index[name]

    def name_of(self, v: int) -> str:
        for k, x in self.index.items():
            if x == v:
                return k
        raise KeyError(v)

    def __len__(self):
        return len(self.index)


def php_var(m: int, i: int, j: int) -> int:
    """Index of x_{ij}: pigeon i in 1..m+1, hole j in 1..m."""
    return (i - 1) * m + j


def gen_php(p: PhpParams) -> tuple[CnfFormula, VarLayout]:
    m = p.m
    layout = VarLayout()
    for i in range(1, m + 2):
        for j in range(1, m + 1):
            layout.add(f"x[{i},{j}]", php_var(m, i, j))
    clauses = [tuple(php_var(m, i, j) for j in range(1, m + 1)) for i in range(1, m + 2)]
    pool = VarPool(m * (m + 1))
    for j in range(1, m + 1):
        col = [php_var(m, i, j) for i in range(1, m + 2)]
        if p.atmost1 == PAIRWISE:
            for r in range(1, m + 1):
                clauses.extend((-col[r], -col[s]) for s in range(r))
        else:
            start = pool.top
            cls, _ = encode_seqcounter(col, 1, pool)
            clauses.extend(cls)
            for k, v in enumerate(range(start + 1, pool.top + 1), start=1):
                layout.add(f"s[{j},{k}]", v)
    return CnfFormula(pool.top, clauses), layout


def _rng(p: UrqParams):
    return np.random.default_rng(np.random.SeedSequence([p.seed, p.n, p.index]))


def _connected(num_nodes, edges):
    parent = list(range(num_nodes))

    def find(a):
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    for u, v in edges:
        parent[find(u)] = find(v)
    root = find(0)
    return all(find(a) == root for a in range(num_nodes))


def urq_graph(p: UrqParams):
    """Random 5-regular bipartite multigraph on 2n^2 nodes plus node charges.

    Nodes ``0..n^2-1`` form one side.  Edges are drawn by the configuration
    model (random matching of edge stubs), redrawn until connected.  Charges
    are random bits with node 0 flipped if needed so the total is odd.
    """
    rng = _rng(p)
    side = p.n * p.n
    left = np.repeat(np.arange(side), URQ_DEGREE)
    while True:
        right = side + rng.permutation(np.repeat(np.arange(side), URQ_DEGREE))
        edges = list(zip(left.tolist(), right.tolist()))
        if _connected(2 * side, edges):
            break
    charges = rng.integers(0, 2, size=2 * side)
    if charges.sum() % 2 == 0:
        charges[0] ^= 1
    return edges, charges.tolist()


def xor_clauses(lits, parity):
    """CNF of ``XOR(lits) == parity``: one clause per forbidden assignment."""
    out = []
    for bits in product((0, 1), repeat=len(lits)):
        if sum(bits) % 2 != parity:
            out.append(tuple(-l if b else l for l, b in zip(lits, bits)))
    return out


def gen_urq(p: UrqParams, flip_node: int | None = None) -> CnfFormula:
    """Tseitin parity contradiction; ``flip_node`` toggles one charge (-> SAT)."""
    edges, charges = urq_graph(p)
    if flip_node is not None:
        charges[flip_node] ^= 1
    incident = [[] for _ in charges]
    for e, (u, v) in enumerate(edges, start=1):
        incident[u].append(e)
        incident[v].append(e)
    clauses = []
    for node, es in enumerate(incident):
        clauses.extend(xor_clauses(es, charges[node]))
    return CnfFormula(len(edges), clauses)


def combine(php: CnfFormula, urq: CnfFormula) -> CnfFormula:
    """Disjunction of two CNFs through one selector ``s`` (the last variable).

    PHP clauses get ``s`` and the shifted URQ clauses get ``-s``, so ``s=1``
    needs a URQ model and ``s=0`` needs a PHP model.
    """
    shift = php.num_vars
    s = php.num_vars + urq.num_vars + 1
    clauses = [c + (s,) for c in php.clauses]
    for c in urq.clauses:
        clauses.append(tuple(l + shift if l > 0 else l - shift for l in c) + (-s,))
    return CnfFormula(s, clauses)


def gen_comb(php: PhpParams, urq: UrqParams) -> CnfFormula:
    return combine(gen_php(php)[0], gen_urq(urq))


def comb_provenance(php: PhpParams, urq: UrqParams) -> str:
    return f"generator: comb m={php.m} n={urq.n} seed={urq.seed} index={urq.index}"


# -- benchmark suites at their standard family sizes ----------------------

def php_pigeon_counts() -> list[int]:
    """46 pigeon counts spread evenly over 5..100."""
    return [5 + round(95 * k / 45) for k in range(46)]


@dataclass(frozen=True)
class InstanceSpec:
    family: str  # php-pw, php-sc, urq, comb
    m: int | None = None
    n: int | None = None
    seed: int = 1
    index: int = 1

    @property
    def name(self) -> str:
        if self.family in ("php-pw", "php-sc"):
            return f"{self.family}-m{self.m}"
        if self.family == "urq":
            return f"urq-n{self.n}-s{self.seed}-i{self.index}"
        return f"comb-m{self.m}-n{self.n}-s{self.seed}-i{self.index}"

    def generate(self) -> tuple[CnfFormula, str]:
        """The formula plus its provenance comment."""
        if self.family in ("php-pw", "php-sc"):
            p = PhpParams(self.m, PAIRWISE if self.family == "php-pw" else SEQCOUNTER)
            return gen_php(p)[0], p.provenance()
        u = UrqParams(self.n, self.seed, self.index)
        if self.family == "urq":
            return gen_urq(u), u.provenance()
        p = PhpParams(self.m, PAIRWISE)
        return gen_comb(p, u), comb_provenance(p, u)


FAMILIES = ("php-pw", "php-sc", "urq", "comb")


def suite(family: str, seed: int = 1) -> Iterator[InstanceSpec]:
    """Instance specs for one family over the benchmark parameter ranges."""
    if family in ("php-pw", "php-sc"):
        for pigeons in php_pigeon_counts():
            yield InstanceSpec(family, m=pigeons - 1)
    elif family == "urq":
        for n in range(3, 31):
            for i in (1, 2, 3):
                yield InstanceSpec("urq", n=n, seed=seed, index=i)
    elif family == "comb":
        for m in (7, 9, 11, 13):
            for n in range(3, 11):
                for i in (1, 2, 3):
                    yield InstanceSpec("comb", m=m, n=n, seed=seed, index=i)
    else:
        raise ValueError(f"unknown family {family!r}")
