"""One test per acceptance criterion; each emits a single PASS/FAIL line."""

import subprocess
import sys

import numpy as np
import pytest
from scipy.stats import linregress

from conftest import record_verdict
from oracles import (brute_cost_vector, brute_maxsat, brute_sat, glucose_sat, is_model, random_cnf,
                     random_horn, rc2_optimum)

from hornmaxsat import dimacs, ihs, msu3
from hornmaxsat.formula import CnfFormula, TOP, WcnfFormula
from hornmaxsat.generators import (PhpParams, UrqParams, combine, gen_php, gen_urq, suite)
from hornmaxsat.hornenc import drop_p, henc
from hornmaxsat.ltur import HornInstance
from hornmaxsat.msu3 import certify_php_cg
from hornmaxsat.mxres import WStore, certify_php_mr, check_cost_preservation, mxres_step
from hornmaxsat.pipeline import decide
from hornmaxsat.result import Status
from hornmaxsat.sat import Budget

CG_RANGE = range(1, 33)
MR_RANGE = range(1, 25)
FIT_FROM = 4
SLOPE_MAX = 3.2


def verdict(n, ok, detail):
    record_verdict(f"criterion {n:>2}: {'PASS' if ok else 'FAIL'}  {detail}")
    assert ok, detail


def php_bound(m):
    return m * (m + 1) + 1


def loglog_slope(ms, ys):
    return linregress(np.log(ms), np.log(ys)).slope


@pytest.fixture(scope="module")
def cg_reports():
    return {dp: {m: certify_php_cg(m, drop_p=dp) for m in CG_RANGE} for dp in (False, True)}


@pytest.fixture(scope="module")
def mr_reports():
    return {dp: {m: certify_php_mr(m, drop_p=dp) for m in MR_RANGE} for dp in (False, True)}


def henc_opt(f: CnfFormula, keep_p=True):
    h = henc(f) if keep_p else drop_p(henc(f))
    w = h.wcnf
    if w.num_vars <= 14:
        opt = brute_maxsat(w.num_vars, w.hard, list(w.soft))
    else:
        opt = rc2_optimum(w.num_vars, w.hard, list(w.soft))
    return h, opt


# 1 ---------------------------------------------------------------------------------


def test_c01_sat_iff_optimum_equals_var_count():
    rng = np.random.default_rng(20260101)
    bad = []
    n_sat = n_unsat = 0
    cases = [random_cnf(rng) for _ in range(500)]
    cases += [(f.num_vars, f.clauses) for f in (gen_php(PhpParams(m))[0] for m in (1, 2))]
    for n, clauses in cases:
        f = CnfFormula(n, clauses)
        sat = brute_sat(n, clauses) is not None
        h, opt = henc_opt(f)
        n_sat += sat
        n_unsat += not sat
        if sat != (opt == h.target) or opt < h.target:
            bad.append((n, clauses, opt))
        d = decide(h, "msu3")
        if d.answer != ("SAT" if sat else "UNSAT") or (sat and not f.evaluate(d.model)):
            bad.append((n, clauses, "decide"))
    verdict(1, not bad, f"{len(cases)} CNFs ({n_sat} SAT, {n_unsat} UNSAT), {len(bad)} disagreements")


# 2 ---------------------------------------------------------------------------------


def test_c02_php_core_guided_lower_bound(cg_reports):
    reps = cg_reports[False]
    wrong = [m for m, r in reps.items() if r.lb != php_bound(m)]
    cross = {}
    for m in (1, 2):
        _, opt = henc_opt(gen_php(PhpParams(m))[0])
        cross[m] = opt
        if opt != reps[m].lb:
            wrong.append(m)
    verdict(2, not wrong, f"lb = m(m+1)+1 for m=1..{max(CG_RANGE)}; brute-force optimum m=1,2: {cross}; "
                          f"mismatches {wrong}")


# 3 ---------------------------------------------------------------------------------


def test_c03_core_guided_growth_exponent(cg_reports):
    ms = [m for m in CG_RANGE if m >= FIT_FROM]
    slope = loglog_slope(ms, [cg_reports[False][m].up_steps for m in ms])
    verdict(3, slope <= SLOPE_MAX, f"log-log slope of propagation steps over m={ms[0]}..{ms[-1]}: "
                                   f"{slope:.3f} (limit {SLOPE_MAX})")


# 4 ---------------------------------------------------------------------------------


def test_c04_mxres_certificate(mr_reports):
    reps = mr_reports[False]
    wrong = [m for m, r in reps.items() if r.empties != php_bound(m) or r.reuse_violations]
    ms = [m for m in MR_RANGE if m >= FIT_FROM]
    slope = loglog_slope(ms, [reps[m].steps for m in ms])
    ok = not wrong and slope <= SLOPE_MAX
    verdict(4, ok, f"empties = m(m+1)+1 and no premise reuse for m=1..{max(MR_RANGE)} (bad {wrong}); "
                   f"step slope m={ms[0]}..{ms[-1]}: {slope:.3f} (limit {SLOPE_MAX})")


# 5 ---------------------------------------------------------------------------------


def _random_store(rng, weights_top):
    n = int(rng.integers(2, 11))
    st = WStore(n, clausal=bool(rng.random() < 0.3))
    for _ in range(int(rng.integers(3, 9))):
        k = int(rng.integers(1, min(4, n) + 1))
        vs = rng.choice(np.arange(1, n + 1), size=k, replace=False)
        lits = [int(v) * (1 if rng.random() < 0.5 else -1) for v in vs]
        w = TOP if weights_top and rng.random() < 0.25 else int(rng.integers(1, 6))
        st.add(lits, w)
    return st


def _pick_step(rng, st):
    live = [(i, r) for i, r in st.live() if r.clausal]
    pairs = [(i, j, l) for i, a in live for j, b in live if i != j for l in a.lits if -l in b.lits]
    if not pairs:
        return None
    return pairs[int(rng.integers(len(pairs)))]


def test_c05_mxres_rule_soundness():
    rng = np.random.default_rng(5)
    steps = unsound = undetected = mutations = top_steps = 0
    while steps < 1000:
        with_top = steps >= 700  # the last 300 steps also draw hard premises
        st = _random_store(rng, with_top)
        for _ in range(4):
            pick = _pick_step(rng, st)
            if pick is None or steps >= 1000:
                break
            before = st.copy()
            new = mxres_step(st, *pick)
            steps += 1
            top_steps += with_top
            if not check_cost_preservation(before, st, st.num_vars):
                unsound += 1
            if with_top:
                continue
            for rid in new:
                mutated = st.copy()
                mutated.consume(rid)
                mutations += 1
                if check_cost_preservation(before, mutated, st.num_vars):
                    undetected += 1
    ok = unsound == 0 and undetected == 0
    verdict(5, ok, f"{steps} steps ({top_steps} with hard records): {unsound} changed the cost; "
                   f"{mutations} single-record deletions on finite stores, {undetected} undetected")


# 6 ---------------------------------------------------------------------------------


def _random_wcnf(rng):
    n = int(rng.integers(1, 13))
    pick = lambda: random_cnf(rng, max_vars=n, max_clauses=1, max_width=3)[1][0]
    hard = [tuple(l for l in pick() if abs(l) <= n) for _ in range(int(rng.integers(0, 7)))]
    soft = [(tuple(l for l in pick() if abs(l) <= n), 1) for _ in range(int(rng.integers(1, 16)))]
    hard = [c for c in hard if c]
    soft = [s for s in soft if s[0]]
    return WcnfFormula(n, hard, soft)


def test_c06_solver_agreement():
    rng = np.random.default_rng(6)
    corpus = [_random_wcnf(rng) for _ in range(300)]
    for fam in ("pairwise", "seqcounter"):
        for m in (1, 2):
            h = henc(gen_php(PhpParams(m, fam))[0])
            corpus += [h.wcnf, drop_p(h).wcnf]
    bad = []
    infeasible = 0
    for w in corpus:
        ref = (brute_maxsat(w.num_vars, w.hard, list(w.soft)) if w.num_vars <= 20
               else rc2_optimum(w.num_vars, w.hard, list(w.soft)))
        got = []
        for solve in (msu3.solve, ihs.solve):
            r = solve(w)
            got.append(None if r.status is Status.INFEASIBLE else r.cost)
        infeasible += ref is None
        if got != [ref, ref]:
            bad.append((w, ref, got))
    verdict(6, not bad, f"{len(corpus)} instances ({infeasible} infeasible): msu3, ihs and brute force "
                        f"disagree on {len(bad)}")


# 7 ---------------------------------------------------------------------------------


def test_c07_dropping_p_clauses(cg_reports, mr_reports):
    cg, mr = cg_reports[True], mr_reports[True]
    wrong = [m for m, r in cg.items() if r.lb != php_bound(m) or r.lb != cg_reports[False][m].lb]
    wrong += [m for m, r in mr.items() if r.empties != php_bound(m) or r.reuse_violations]
    for m in (1, 2):
        _, opt = henc_opt(gen_php(PhpParams(m))[0], keep_p=False)
        if opt != php_bound(m):
            wrong.append(("brute", m))
    ms = [m for m in MR_RANGE if m >= FIT_FROM]
    slope = loglog_slope(ms, [mr[m].steps for m in ms])
    h = henc(gen_php(PhpParams(8))[0])
    no_p = msu3.solve(drop_p(h).wcnf)
    with_p = msu3.solve(h.wcnf, budget=Budget(max_props=no_p.propagations + 1))
    directional = no_p.status is Status.OPTIMUM and (
        with_p.status is Status.TIMEOUT or with_p.propagations >= no_p.propagations)
    ok = not wrong and slope <= SLOPE_MAX and directional
    cmp = "exceeded" if with_p.status is Status.TIMEOUT else f"used {with_p.propagations}"
    verdict(7, ok, f"without P: bounds hold (bad {wrong}), mxres slope {slope:.3f}; msu3 on PHP m=8 "
                   f"needs {no_p.propagations} propagations without P, with P it {cmp} that budget")


# 8 ---------------------------------------------------------------------------------


def test_c08_ltur_against_brute_force():
    rng = np.random.default_rng(8)
    disagree = over = n_sat = 0
    for _ in range(500):
        n, clauses = random_horn(rng)
        k = int(rng.integers(0, min(4, n) + 1))
        vs = rng.choice(np.arange(1, n + 1), size=k, replace=False)
        assumptions = [int(v) * (1 if rng.random() < 0.7 else -1) for v in vs]
        out = HornInstance(n, clauses).solve(assumptions)
        truth = brute_sat(n, clauses + [(a,) for a in assumptions])
        n_sat += truth is not None
        if out.sat != (truth is not None):
            disagree += 1
        elif out.sat and not (is_model(clauses, out.model) and all(is_model([(a,)], out.model)
                                                                    for a in assumptions)):
            disagree += 1
        elif not out.sat and (not set(out.core) <= set(assumptions)
                              or brute_sat(n, clauses + [(a,) for a in out.core]) is not None):
            disagree += 1
        if out.propagations > sum(len(c) for c in clauses) + len(assumptions):
            over += 1
    verdict(8, disagree == 0 and over == 0, f"500 Horn instances ({n_sat} SAT): {disagree} disagreements, "
                                            f"{over} runs over the linear propagation bound")


# 9 ---------------------------------------------------------------------------------


def _drop_first_pigeon(f: CnfFormula, m: int) -> CnfFormula:
    """PHP with pigeon 1's at-least-one clause removed: m pigeons fit, so satisfiable."""
    return CnfFormula(f.num_vars, f.clauses[1:])


def test_c09_generator_counts_and_determinism():
    wrong = []
    for m in range(1, 101):
        f, _ = gen_php(PhpParams(m))
        if f.num_vars != m * (m + 1) or len(f.clauses) != (m + 1) + m * m * (m + 1) // 2:
            wrong.append(m)
    drift = []
    for n, seed, idx in [(3, 1, 1), (4, 7, 2), (6, 3, 3)]:
        u = UrqParams(n, seed, idx)
        a = dimacs.write_cnf(gen_urq(u), [u.provenance()])
        b = dimacs.write_cnf(gen_urq(UrqParams(n, seed, idx)), [u.provenance()])
        cli = subprocess.run([sys.executable, "-m", "hornmaxsat", "gen", "urq", "--n", str(n), "--seed",
                              str(seed), "--index", str(idx)], capture_output=True, check=True).stdout
        if not (a == b and a.encode() == cli):
            drift.append((n, seed, idx))
    comb_bad = []
    for m in (1, 2):
        php = gen_php(PhpParams(m))[0]
        for php_f, php_unsat in ((php, True), (_drop_first_pigeon(php, m), False)):
            for flip in (None, 0):
                urq = gen_urq(UrqParams(3, 1, 1), flip_node=flip)
                urq_unsat = not glucose_sat(urq.clauses)
                if urq_unsat != (flip is None):
                    comb_bad.append(("urq", m, flip))
                if php_unsat != (not glucose_sat(php_f.clauses)):
                    comb_bad.append(("php", m, php_unsat))
                comb_unsat = not glucose_sat(combine(php_f, urq).clauses)
                if comb_unsat != (php_unsat and urq_unsat):
                    comb_bad.append(("comb", m, php_unsat, flip))
    ok = not wrong and not drift and not comb_bad
    verdict(9, ok, f"PHP-pw counts m=1..100 (bad {wrong}); URQ regeneration byte-identical "
                   f"(drift {drift}); COMB UNSAT iff both parts UNSAT at n=3, m<=2 (bad {comb_bad})")


# 10 --------------------------------------------------------------------------------


def test_c10_benchmark_family_sizes():
    want = {"php-pw": 46, "php-sc": 46, "urq": 84, "comb": 96}
    got = {}
    dupes = []
    for fam in want:
        specs = list(suite(fam))
        names = [s.name for s in specs]
        if len(set(names)) != len(names):
            dupes.append(fam)
        for s in specs:
            s.generate()
        got[fam] = len(specs)
    verdict(10, got == want and not dupes, f"generated family sizes {got} (expected {want})")
