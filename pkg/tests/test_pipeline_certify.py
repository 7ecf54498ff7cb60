import pytest
from hypothesis import given, settings

from hornmaxsat.formula import CnfFormula
from hornmaxsat.generators import PhpParams, gen_php
from hornmaxsat.msu3 import certify_php_cg
from hornmaxsat.pipeline import decide_cnf, encode
from hornmaxsat.sat import Budget
from oracles import brute_sat
from strategies import cnfs


@given(cnfs(max_vars=6, max_clauses=14))
@settings(max_examples=80, deadline=None)
def test_decide_matches_brute_force(inst):
    n, cls = inst
    f = CnfFormula(n, cls)
    truth = brute_sat(n, cls) is not None
    for algo in ("msu3", "ihs"):
        for drop in (False, True):
            for reduce in (False, True):
                d = decide_cnf(f, algo, drop_p=drop, reduce_vars=reduce)
                assert d.answer == ("SAT" if truth else "UNSAT")
                if truth:
                    assert f.evaluate(d.model)


def test_dropped_p_restores_when_inconclusive():
    # x1 alone: without P the solver may light both rails; the answer must still be SAT
    d = decide_cnf(CnfFormula(2, [(1, 2), (-1, -2)]), "msu3", drop_p=True)
    assert d.answer == "SAT"


def test_timeout_is_unknown():
    f, _ = gen_php(PhpParams(4))
    d = decide_cnf(f, "msu3", budget=Budget(max_props=50))
    assert d.answer == "UNKNOWN"


def test_unknown_algorithm():
    with pytest.raises(ValueError):
        decide_cnf(CnfFormula(1, [(1,)]), "maxhs")


@pytest.mark.parametrize("drop", [True, False])
def test_core_guided_certificate_small(drop):
    expected_steps = {1: 6, 2: 26, 3: 81}
    for m in (1, 2, 3):
        r = certify_php_cg(m, drop_p=drop)
        assert r.lb == m * (m + 1) + 1
        assert r.l_lb == m + 1 and r.m_lb == m * m
        if drop:
            assert r.up_steps == expected_steps[m]
        else:  # P clauses add propagations (p -> not n) but never enter a conflict
            assert r.up_steps >= expected_steps[m]
        assert [s[:3] for s in r.steps if s[0] == "M"] == [("M", j, k) for j in range(1, m + 1)
                                                         for k in range(1, m + 1)]


def test_certificate_needs_positive_m():
    with pytest.raises(ValueError):
        certify_php_cg(0)


def test_encode_flags():
    f, _ = gen_php(PhpParams(2))
    assert encode(f).has_p
    assert not encode(f, drop_p=True).has_p
    assert encode(f, reduce_vars=True).mode == "reduced"
