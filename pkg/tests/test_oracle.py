from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from qverify.ereal import INF, ONE, ZERO, EReal
from qverify.errors import EvaluationError, LoopFound, StateSpaceTooLarge
from qverify.oracle import (
    CharFunctional,
    FiniteDomainSpec,
    constant,
    exact_loopfree,
    expectation,
    from_term,
    iterate_phi,
)
from qverify.parser import load_file, parse_pgcl
from qverify.pgcl import CalcKind, Diverge, commands
from qverify.terms import Var


def test_die_expectations(benchmarks):
    die = load_file(benchmarks / "die.pgcl")
    assert expectation(die.body, from_term(Var("r")), CalcKind.WP, {}) == EReal(Fraction(21, 8))
    assert expectation(die.body, constant(1), CalcKind.WLP, {}) == EReal(Fraction(3, 4))
    assert expectation(die.body, constant(1), CalcKind.WP, {}) == EReal(Fraction(3, 4))


@pytest.mark.parametrize(
    "calc, expected",
    [(CalcKind.WP, ZERO), (CalcKind.WLP, ONE), (CalcKind.ERT, INF)],
)
def test_divergence(calc, expected):
    assert expectation(Diverge(), constant(5), calc, {}) == expected


def test_nondeterminism_is_demonic():
    prog = parse_pgcl("var x: UInt\n{ x := 1 } [] { x := 4 }")
    assert expectation(prog.body, from_term(Var("x")), CalcKind.WP, {"x": 0}) == EReal(1)


def test_runtime_counts_steps():
    prog = parse_pgcl("var x: UInt\nskip\nx := 2\ntick(3)")
    assert expectation(prog.body, constant(0), CalcKind.ERT, {"x": 0}) == EReal(5)
    assert expectation(prog.body, constant(0), CalcKind.WP, {"x": 0}) == ZERO


def test_probability_out_of_range():
    prog = parse_pgcl("var x: UInt\n{ skip } [x] { skip }")
    with pytest.raises(EvaluationError):
        expectation(prog.body, constant(1), CalcKind.WP, {"x": 2})


def test_exact_loopfree_with_table_post():
    prog = parse_pgcl("var x: UInt\nx := x + 1")
    spec = FiniteDomainSpec({"x": range(3)})
    out = exact_loopfree(prog.body, {(0,): EReal(0), (1,): EReal(5), (2,): EReal(7)}, CalcKind.WP, spec)
    # x = 2 steps outside the space and reads the default
    assert out == {(0,): EReal(5), (1,): EReal(7), (2,): ZERO}


def test_exact_loopfree_rejects_loops(benchmarks):
    geo = load_file(benchmarks / "geometric.pgcl")
    with pytest.raises(LoopFound):
        exact_loopfree(geo.body, constant(1), CalcKind.WP, FiniteDomainSpec({"c": range(2)}))


def test_state_space_bound():
    with pytest.raises(StateSpaceTooLarge):
        FiniteDomainSpec({"x": range(1000), "y": range(1000)})
    assert FiniteDomainSpec({"x": range(10)}, bound=10).size == 10


@given(st.integers(1, 8))
def test_geometric_iterates(n):
    geo = parse_pgcl("var c: UInt\n@park(1)\nwhile (c == 1) {\n    { c := 0 } [0.5] { skip }\n}")
    loop = commands(geo.body)[0]
    spec = FiniteDomainSpec({"c": range(3)})
    table = iterate_phi(CharFunctional.of_loop(loop, constant(1), CalcKind.WP), n, spec)
    assert table[(1,)] == EReal(1 - Fraction(1, 2 ** (n - 1)))
    assert table[(0,)] == ONE


def test_iterates_start_from_bottom_or_top(benchmarks):
    loop = commands(load_file(benchmarks / "kind2.pgcl").body)[0]
    spec = FiniteDomainSpec({"x": range(3)})
    assert set(iterate_phi(CharFunctional.of_loop(loop, constant(1), CalcKind.WP), 0, spec).values()) == {ZERO}
    assert set(iterate_phi(CharFunctional.of_loop(loop, constant(1), CalcKind.WLP), 0, spec).values()) == {ONE}
    with pytest.raises(ValueError):
        iterate_phi(CharFunctional.of_loop(loop, constant(1), CalcKind.WP), -1, spec)


def test_unrolled_runtime_approaches_bound(benchmarks):
    loop = commands(load_file(benchmarks / "ert_geo.pgcl").body)[0]
    value = expectation(loop, constant(0), CalcKind.ERT, {"c": 1}, iterations=40)
    assert EReal(Fraction(699, 100)) < value <= EReal(7)
