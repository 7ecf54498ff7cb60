"""Dual-rail Horn MaxSAT: encodings, solvers and lower-bound certification on PHP."""

from .dimacs import DimacsError, parse, parse_cnf, parse_wcnf, write_cnf, write_wcnf
from .formula import CnfFormula, WcnfFormula, cost, is_horn
from .hornenc import HencResult, decode, drop_p, henc, henc_reduced, restore_p
from .pipeline import decide, decide_cnf, encode
from .result import MaxSatResult, Status

__version__ = "0.1.0"

__all__ = [
    "CnfFormula", "WcnfFormula", "cost", "is_horn",
    "DimacsError", "parse", "parse_cnf", "parse_wcnf", "write_cnf", "write_wcnf",
    "HencResult", "henc", "henc_reduced", "drop_p", "restore_p", "decode",
    "decide", "decide_cnf", "encode", "MaxSatResult", "Status",
]
