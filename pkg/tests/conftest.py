# tests/conftest.py
import os
from fractions import Fraction
from pathlib import Path

import pytest
from hypothesis import settings

from qverify.config import load_settings
from qverify.domains import Interp
from qverify.heylo import free_vars
from qverify.oracle import FiniteDomainSpec
from qverify.solver import solver_available

settings.register_profile("default", database=None, max_examples=50, deadline=None)
settings.register_profile("ci", database=None, max_examples=300, deadline=None)
settings.load_profile(os.getenv("HYPOTHESIS_PROFILE", "default"))

BENCHMARKS = Path(__file__).resolve().parent.parent / "benchmarks"

# Values tried per type when checking a Vc by enumeration
SAMPLE_VALUES = {
    "Bool": [False, True],
    "UReal": [Fraction(0), Fraction(1, 2), Fraction(1), Fraction(2)],
    "Real": [Fraction(-1), Fraction(0), Fraction(1, 2), Fraction(2)],
}


def pytest_configure(config):
    config.addinivalue_line("markers", "solver: needs an SMT solver executable (QV_SOLVER, default z3)")


def pytest_collection_modifyitems(config, items):
    if not any("solver" in item.keywords for item in items):
        return
    if solver_available(load_settings().solver):
        return
    skip = pytest.mark.skip(reason="no SMT solver available")
    for item in items:
        if "solver" in item.keywords:
            item.add_marker(skip)


@pytest.fixture
def benchmarks() -> Path:
    return BENCHMARKS


# exp_half(n) = 2^-n; lists are modelled by their length
LIST_FUNCS = {
    "exp_half": lambda n: Fraction(1, 2**n),
    "len": lambda l: l,
    "tail": lambda l: max(l - 1, 0),
}


def interp(upto: int = 4) -> Interp:
    return Interp.with_naturals(upto, funcs=dict(LIST_FUNCS), ranges={"List": list(range(upto + 1))})


def vc_space(vc, upto: int = 4) -> FiniteDomainSpec:
    """All assignments to the Vc's free variables, naturals up to `upto`."""
    names = sorted(free_vars(vc.lhs) | free_vars(vc.rhs))
    ranges = {}
    for name in names:
        ty = vc.ctx.var_type(name)
        ranges[name] = SAMPLE_VALUES.get(ty.name, list(range(upto + 1)))
    return FiniteDomainSpec(ranges)


@pytest.fixture
def finite():
    """finite(vc, upto) -> (spec, interp) for checking a Vc on small states."""
    return lambda vc, upto=4: (vc_space(vc, upto), interp(upto))
