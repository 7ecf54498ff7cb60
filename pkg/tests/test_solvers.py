import pytest
from hypothesis import given, settings

from hornmaxsat import ihs, msu3
from hornmaxsat.formula import WcnfFormula, cost
from hornmaxsat.generators import PhpParams, gen_php
from hornmaxsat.hornenc import drop_p, henc
from hornmaxsat.ihs import disjoint_cores, min_hitting_set
from hornmaxsat.oracle import components
from hornmaxsat.result import Status
from hornmaxsat.sat import Budget
from oracles import brute_maxsat
from strategies import wcnfs
from hypothesis import strategies as st


def _check(res, w):
    ref = brute_maxsat(w.num_vars, w.hard, w.soft)
    if ref is None:
        assert res.status is Status.INFEASIBLE
    else:
        assert res.status is Status.OPTIMUM and res.cost == ref
        assert cost(w, res.model) == ref
        assert res.lb == ref


@given(wcnfs())
@settings(max_examples=150, deadline=None)
def test_msu3_optimum(inst):
    n, hard, soft = inst
    w = WcnfFormula(n, hard, [(c, 1) for c in soft])
    _check(msu3.solve(w), w)
    _check(msu3.solve(w, split_components=False), w)


@given(wcnfs())
@settings(max_examples=150, deadline=None)
def test_ihs_optimum(inst):
    n, hard, soft = inst
    w = WcnfFormula(n, hard, [(c, 1) for c in soft])
    _check(ihs.solve(w), w)


@given(st.lists(st.frozensets(st.integers(0, 7), min_size=1, max_size=4), min_size=1, max_size=8))
def test_hitting_set_is_minimum(cores):
    h = min_hitting_set(cores)
    assert all(h & c for c in cores)
    elems = sorted(set().union(*cores))
    best = min(bin(mask).count("1") for mask in range(1 << len(elems))
               if all(any(mask >> elems.index(e) & 1 for e in c) for c in cores))
    assert len(h) == best


def test_hitting_set_rejects_empty_core():
    with pytest.raises(ValueError):
        min_hitting_set([{1}, set()])


def test_php_dual_rail_optimum_and_trace():
    for m in (1, 2):
        h = henc(gen_php(PhpParams(m))[0])
        for w in (h.wcnf, drop_p(h).wcnf):
            for solve in (msu3.solve, ihs.solve):
                r = solve(w)
                assert r.cost == m * (m + 1) + 1
                assert r.lb == r.cost and r.trace
                assert [t.lb for t in r.trace] == sorted(t.lb for t in r.trace)


def test_disjoint_cores_on_php_without_p():
    w = drop_p(henc(gen_php(PhpParams(2))[0])).wcnf
    cores = disjoint_cores(w)
    # one per pigeon, one per hole; a third pigeon alone never conflicts.
    # 12 soft units and no single-soft core cap the count at 6 anyway.
    assert len(cores) == 5
    assert all(len(c) >= 2 for c in cores)
    for a in range(len(cores)):
        for b in range(a):
            assert not cores[a] & cores[b]


def test_components_split_variable_disjoint_parts():
    w = WcnfFormula(4, [(1, 2), (3, 4)], [((-1,), 1), ((-2,), 1), ((-3,), 1)])
    parts = components(w)
    assert sorted(sorted(s) for _, s in parts) == [[0, 1], [2]]


def test_partitioned_solve_reports_per_block_cost():
    w = WcnfFormula(4, [(1, 2), (3, 4)], [((-1,), 1), ((-2,), 1), ((-3,), 1), ((-4,), 1)])
    r = msu3.solve_partitioned(w, [[0, 1], [2, 3]])
    assert r.cost == 2 and [p["cost"] for p in r.parts] == [1, 1]
    with pytest.raises(ValueError):
        msu3.solve_partitioned(w, [[0, 2], [1, 3]])


def test_weighted_input_rejected():
    w = WcnfFormula(1, [], [((1,), 2)])
    with pytest.raises(ValueError):
        msu3.solve(w)
    with pytest.raises(ValueError):
        ihs.solve(w)


def test_timeout_reports_lower_bound():
    h = henc(gen_php(PhpParams(3))[0])
    r = msu3.solve(h.wcnf, budget=Budget(max_props=200))
    assert r.status is Status.TIMEOUT and r.propagations > 200 and r.cost is None


@given(wcnfs())
@settings(max_examples=80, deadline=None)
def test_disjoint_core_count_bounds_optimum(inst):
    n, hard, soft = inst
    w = WcnfFormula(n, hard, [(c, 1) for c in soft])
    ref = brute_maxsat(n, hard, w.soft)
    if ref is None:
        with pytest.raises(ValueError):
            disjoint_cores(w)
    else:
        assert len(disjoint_cores(w)) <= ref
