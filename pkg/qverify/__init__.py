# qverify/__init__.py
"""qverify: deductive verification of quantitative properties of probabilistic programs."""
from .errors import QVerifyError
from .heylo import simplify, subst, typecheck
from .heyvl import Procedure, Program, Vc, encode_call, inline_call, vcgen, vp
from .encodings import translate
from .oracle import exact_loopfree, iterate_phi
from .parser import load_file, parse_formula, parse_heyvl, parse_pgcl
from .smt import lower_vc
from .solver import CheckResult, Refuted, Unknown, Verified, check

__version__ = "0.1.0"

__all__ = [
    "CheckResult",
    "Procedure",
    "Program",
    "QVerifyError",
    "Refuted",
    "Unknown",
    "Vc",
    "Verified",
    "check",
    "encode_call",
    "exact_loopfree",
    "inline_call",
    "iterate_phi",
    "load_file",
    "lower_vc",
    "parse_formula",
    "parse_heyvl",
    "parse_pgcl",
    "simplify",
    "subst",
    "translate",
    "typecheck",
    "vcgen",
    "vp",
]
