"""Command line: gen / encode / solve / certify / bench.

Exit codes: 0 success, 10 original CNF satisfiable, 20 original CNF
unsatisfiable, 1 usage error, 2 I/O or input format error, 3 certification
failure.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

import numpy as np

from . import dimacs
from .bench import BUDGET_ENV, bench, default_budget, gnuplot_script, suite_specs
from .formula import CnfFormula, WcnfFormula, model_to_lits
from .generators import (FAMILIES, PAIRWISE, SEQCOUNTER, PhpParams, UrqParams, comb_provenance, gen_comb,
                         gen_php, gen_urq, suite)
from .hornenc import drop_p, from_sidecar, sidecar_comments
from .mxres import ScriptMismatch, certify_php_mr
from .msu3 import CertificationError, certify_php_cg
from .pipeline import ALGOS, SAT, UNSAT, decide, encode
from .result import Status
from .sat import Budget

EXIT_OK, EXIT_SAT, EXIT_UNSAT, EXIT_USAGE, EXIT_IO, EXIT_CERT = 0, 10, 20, 1, 2, 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_USAGE)


def _read(path):
    if path in (None, "-"):
        return sys.stdin.read()
    with open(path, encoding="utf-8") as fh:
        return fh.read()


def _write(path, text):
    if path in (None, "-"):
        sys.stdout.write(text)
        return
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)


# -- gen ------------------------------------------------------------------------


def cmd_gen(args):
    if args.family == "php":
        p = PhpParams(args.holes, args.enc)
        _write(args.out, dimacs.write_cnf(gen_php(p)[0], [p.provenance()]))
    elif args.family == "urq":
        u = UrqParams(args.n, args.seed, args.index)
        f = gen_urq(u, flip_node=args.flip_node)
        note = [u.provenance()] + ([f"flipped charge of node {args.flip_node}"] if args.flip_node is not None else [])
        _write(args.out, dimacs.write_cnf(f, note))
    elif args.family == "comb":
        p, u = PhpParams(args.holes, PAIRWISE), UrqParams(args.n, args.seed, args.index)
        _write(args.out, dimacs.write_cnf(gen_comb(p, u), [comb_provenance(p, u)]))
    else:  # suite
        os.makedirs(args.dir, exist_ok=True)
        n = 0
        for spec in suite(args.suite_family, args.seed):
            f, note = spec.generate()
            _write(os.path.join(args.dir, spec.name + ".cnf"), dimacs.write_cnf(f, [note]))
            n += 1
        print(f"c wrote {n} instances to {args.dir}")
    return EXIT_OK


# -- encode / solve -------------------------------------------------------------


def cmd_encode(args):
    f = dimacs.parse_cnf(_read(args.inp))
    h = encode(f, drop_p=args.drop_p, reduce_vars=args.reduce_vars)
    _write(args.out, dimacs.write_wcnf(h.wcnf, sidecar_comments(h)))
    return EXIT_OK


def _budget(args):
    secs = args.time_budget
    if secs is None and os.environ.get(BUDGET_ENV):
        secs = default_budget()
    return Budget(seconds=secs) if secs is not None else None


def _write_trace(path, result):
    if not path:
        return
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        for rec in result.trace:
            fh.write(json.dumps(rec.as_dict()) + "\n")


def cmd_solve(args):
    inst = dimacs.parse(_read(args.inp))
    f = inst.formula
    budget = _budget(args)
    if isinstance(f, CnfFormula):
        h = encode(f, drop_p=args.drop_p, reduce_vars=args.reduce_vars)
    else:
        h = from_sidecar(f, inst.comments)
        if h is not None and args.drop_p and h.has_p:
            h = drop_p(h)
    if h is None:
        return _solve_plain(f, args, budget)
    d = decide(h, args.algo, budget)
    _write_trace(args.trace, d.result)
    res = d.result
    print(f"c algorithm {args.algo}, target {h.target}, P clauses {'kept' if h.has_p else 'dropped'}")
    print(f"c propagations {d.propagations}")
    if d.restored is not None:
        print(f"c P clauses restored after an inconclusive relaxed optimum; optimum with P {d.restored.cost}")
    if res.status is Status.TIMEOUT:
        print(f"c lower bound {res.lb}")
        print("s UNKNOWN")
        return EXIT_OK
    if res.status is Status.OPTIMUM:
        print(f"o {res.cost}")
    if d.answer == SAT:
        print("s SATISFIABLE(original)")
        lits = model_to_lits(d.model, len(d.model))
        print("v " + " ".join(map(str, lits)) + " 0")
        return EXIT_SAT
    if d.answer == UNSAT:
        print("s UNSATISFIABLE(original)")
        return EXIT_UNSAT
    print("s UNKNOWN")
    return EXIT_OK


def _solve_plain(f: WcnfFormula, args, budget):
    """WCNF without a dual-rail sidecar: report the MaxSAT optimum only."""
    from .ihs import solve as ihs_solve
    from .msu3 import solve as msu3_solve
    res = (msu3_solve if args.algo == "msu3" else ihs_solve)(f, budget=budget)
    _write_trace(args.trace, res)
    if res.status is Status.OPTIMUM:
        print(f"o {res.cost}")
        print("s OPTIMUM FOUND")
        print("v " + " ".join(map(str, model_to_lits(res.model, f.num_vars))) + " 0")
    elif res.status is Status.INFEASIBLE:
        print("s UNSATISFIABLE")
    else:
        print(f"c lower bound {res.lb}")
        print("s UNKNOWN")
    return EXIT_OK


# -- certify ----------------------------------------------------------------------


def _fit(ms, ys):
    if len(ms) < 2:
        return None
    return float(np.polyfit(np.log(ms), np.log(ys), 1)[0])


def cmd_certify(args):
    lo = args.holes
    hi = args.max_holes if args.max_holes is not None else lo
    if hi < lo:
        raise UsageError("--max-holes must not be smaller than --holes")
    ms, ys = [], []
    drop = not args.keep_p
    try:
        if args.mode == "core-guided":
            print("c m lb target up_steps L_steps M_steps")
            for m in range(lo, hi + 1):
                r = certify_php_cg(m, drop_p=drop)
                print(f"{m} {r.lb} {r.target} {r.up_steps} {r.per_phase['L']} {r.per_phase['M']}")
                ms.append(m)
                ys.append(r.up_steps)
            print(f"c relaxation reading: {r.relaxation}")
        else:
            print("c m empties target steps literal_work")
            scripts = []
            for m in range(lo, hi + 1):
                r = certify_php_mr(m, clausal=args.clausal, drop_p=drop)
                print(f"{m} {r.empties} {m * (m + 1)} {r.steps} {r.literal_work}")
                ms.append(m)
                ys.append(r.steps)
                scripts.append(json.loads(r.script_json()))
            if args.script:
                _write(args.script, json.dumps(scripts if len(scripts) > 1 else scripts[0]) + "\n")
    except (CertificationError, ScriptMismatch) as e:
        print(f"c certification failed: {e}", file=sys.stderr)
        return EXIT_CERT
    slope = _fit(ms, ys)
    if slope is not None:
        print(f"c fitted exponent {slope:.3f}")
    return EXIT_OK


# -- bench ------------------------------------------------------------------------


def _range(text, what):
    try:
        if "-" in text:
            a, b = text.split("-", 1)
            return int(a), int(b)
        v = int(text)
        return v, v
    except ValueError:
        raise UsageError(f"{what} must look like 3 or 3-8, got {text!r}") from None


def cmd_bench(args):
    fams = [x for x in args.families.split(",") if x]
    algos = [x for x in args.algos.split(",") if x]
    for fam in fams:
        if fam not in FAMILIES:
            raise UsageError(f"unknown family {fam!r} (choose from {', '.join(FAMILIES)})")
    for a in algos:
        if a not in ALGOS:
            raise UsageError(f"unknown algorithm {a!r} (choose from {', '.join(ALGOS)})")
    m_range = _range(args.m, "--m") if args.m else None
    n_range = _range(args.n, "--n") if args.n else None
    indices = tuple(range(1, args.indices + 1))
    specs = []
    for fam in fams:
        specs.extend(suite_specs(fam, m_range, n_range, indices, args.seed))
    secs = args.time_budget if args.time_budget is not None else default_budget()
    report = bench(specs, algos, drop_p=args.drop_p, seconds=secs, jobs=args.jobs)
    text = report.to_csv()
    if args.csv:
        _write(args.csv, text)
        if args.gnuplot:
            _write(args.gnuplot, gnuplot_script(args.csv, algos))
    else:
        sys.stdout.write(text)
    for (fam, algo), k in sorted(report.solved().items()):
        total = sum(1 for r in report.rows if r.family == fam and r.algo == algo)
        print(f"c solved {fam} {algo} {k}/{total}", file=sys.stderr)
    return EXIT_OK


# -- parser -------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="hornmaxsat", description="Dual-rail Horn MaxSAT toolkit")
    sub = p.add_subparsers(dest="cmd", required=True, parser_class=_Parser)

    g = sub.add_parser("gen", help="generate benchmark CNFs")
    gs = g.add_subparsers(dest="family", required=True, parser_class=_Parser)
    php = gs.add_parser("php", help="pigeonhole, m+1 pigeons into m holes")
    php.add_argument("--holes", type=int, required=True)
    php.add_argument("--enc", choices=[PAIRWISE, SEQCOUNTER], default=PAIRWISE)
    urq = gs.add_parser("urq", help="Tseitin parity formula on a random bipartite graph")
    urq.add_argument("--n", type=int, required=True)
    urq.add_argument("--seed", type=int, default=1)
    urq.add_argument("--index", type=int, default=1)
    urq.add_argument("--flip-node", type=int, default=None, help="toggle one charge (gives a satisfiable formula)")
    comb = gs.add_parser("comb", help="pairwise PHP or URQ, joined by a selector variable")
    comb.add_argument("--holes", type=int, required=True)
    comb.add_argument("--n", type=int, required=True)
    comb.add_argument("--seed", type=int, default=1)
    comb.add_argument("--index", type=int, default=1)
    st = gs.add_parser("suite", help="write a whole benchmark family")
    st.add_argument("--family", dest="suite_family", choices=FAMILIES, required=True)
    st.add_argument("--dir", required=True)
    st.add_argument("--seed", type=int, default=1)
    for q in (php, urq, comb):
        q.add_argument("--out", default=None)

    e = sub.add_parser("encode", help="CNF -> Horn WCNF via the dual-rail encoding")
    e.add_argument("--in", dest="inp", default=None)
    e.add_argument("--out", default=None)
    e.add_argument("--drop-p", action="store_true")
    e.add_argument("--reduce-vars", action="store_true")

    s = sub.add_parser("solve", help="solve a CNF (via encoding) or a WCNF")
    s.add_argument("--algo", choices=sorted(ALGOS), default="msu3")
    s.add_argument("--in", dest="inp", default=None)
    s.add_argument("--drop-p", action="store_true")
    s.add_argument("--reduce-vars", action="store_true", help="for CNF input")
    s.add_argument("--trace", default=None, help="write core records as JSON lines")
    s.add_argument("--time-budget", type=float, default=None, help=f"seconds (default: ${BUDGET_ENV} or none)")

    c = sub.add_parser("certify", help="scripted lower-bound runs on pigeonhole formulas")
    c.add_argument("--mode", choices=["core-guided", "mxres"], required=True)
    c.add_argument("--holes", type=int, required=True)
    c.add_argument("--max-holes", type=int, default=None)
    c.add_argument("--clausal", action="store_true", help="mxres: expand non-clausal records")
    c.add_argument("--script", default=None, help="mxres: write the step script as JSON")
    c.add_argument("--keep-p", action="store_true", help="keep the P clauses in the instance")

    b = sub.add_parser("bench", help="run solvers over generated families")
    b.add_argument("--families", default="php-pw")
    b.add_argument("--algos", default="msu3,ihs")
    b.add_argument("--m", default=None, help="PHP/COMB hole range, e.g. 1-6")
    b.add_argument("--n", default=None, help="URQ/COMB size range, e.g. 3-4")
    b.add_argument("--indices", type=int, default=1)
    b.add_argument("--seed", type=int, default=1)
    b.add_argument("--drop-p", action="store_true")
    b.add_argument("--time-budget", type=float, default=None, help=f"seconds per run (default ${BUDGET_ENV} or 60)")
    b.add_argument("--jobs", type=int, default=1)
    b.add_argument("--csv", default=None)
    b.add_argument("--gnuplot", default=None, help="write a gnuplot script next to the CSV")
    return p


COMMANDS = {"gen": cmd_gen, "encode": cmd_encode, "solve": cmd_solve, "certify": cmd_certify, "bench": cmd_bench}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return COMMANDS[args.cmd](args)
    except UsageError as e:
        print(f"hornmaxsat: error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except ValueError as e:
        if isinstance(e, dimacs.DimacsError):
            print(f"hornmaxsat: input error: {e}", file=sys.stderr)
            return EXIT_IO
        print(f"hornmaxsat: error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as e:
        print(f"hornmaxsat: I/O error: {e}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
