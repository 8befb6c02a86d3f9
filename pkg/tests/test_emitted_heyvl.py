from textwrap import dedent

import pytest

from qverify.encodings import translate
from qverify.parser import load_file, parse_heyvl, parse_pgcl
from qverify.printer import show_procedure, show_program

KIND2_K2 = r"""
coproc kind2(x_init: UInt) -> ()
    pre 1 + 4 * [x_init == 1]
    post 1
{
    var x: UInt = x_init
    coassert 1 + 4 * [x == 1]
    cohavoc x
    covalidate
    coassume 1 + 4 * [x == 1]
    if (x > 0) {
        x = x .- 1
        assert 1 + 4 * [x == 1]
        if (x > 0) {
            x = x .- 1
            coassert 1 + 4 * [x == 1]
            coassume ?(true)
        }
    }
}
"""

KIND2_K3 = r"""
coproc kind2(x_init: UInt) -> ()
    pre 1 + 4 * [x_init == 1]
    post 1
{
    var x: UInt = x_init
    coassert 1 + 4 * [x == 1]
    cohavoc x
    covalidate
    coassume 1 + 4 * [x == 1]
    if (x > 0) {
        x = x .- 1
        assert 1 + 4 * [x == 1]
        if (x > 0) {
            x = x .- 1
            assert 1 + 4 * [x == 1]
            if (x > 0) {
                x = x .- 1
                coassert 1 + 4 * [x == 1]
                coassume ?(true)
            }
        }
    }
}
"""

OST = {
    "ost": r"""
        proc ost(x_init: UInt, y_init: UInt) -> (y: UInt)
            pre [x_init != 0] * (y_init + 1) + [x_init == 0] * y_init
            post y
        {
            var x: UInt = x_init
            y = y_init
            var n: UInt = 0
            havoc n
            assert [x != 0] * (y + 1) + [x == 0] * y
            assume ?(false)
        }
    """,
    "ost_ost_subinvariant": r"""
        proc ost_ost_subinvariant(x_init: UInt, y_init: UInt, n_init: UInt) -> (x: UInt, y: UInt, n: UInt)
            pre [x_init != 0] * (y_init + 1) + [x_init == 0] * y_init
            post y
        {
            x = x_init
            y = y_init
            n = n_init
            if (x != 0) {
                var choice$1: Bool = flip(1/2)
                if (choice$1) {
                    x = 0
                } else {
                    y = y + 1
                }
                n = n + 1
                assert [x != 0] * (y + 1) + [x == 0] * y
                assume ?(false)
            }
        }
    """,
    "ost_ost_harmonizes_lower": r"""
        proc ost_ost_harmonizes_lower(x: UInt, y: UInt, n: UInt) -> ()
            pre [x != 0] * (y + 1) + [x == 0] * y
            post ?(!x != 0) ==> y
        {
        }
    """,
    "ost_ost_harmonizes_upper": r"""
        coproc ost_ost_harmonizes_upper(x: UInt, y: UInt, n: UInt) -> ()
            pre [x != 0] * (y + 1) + [x == 0] * y
            post !?(!x != 0) <~~ y
        {
        }
    """,
    "ost_ost_phi_finite": r"""
        coproc ost_ost_phi_finite(x_init: UInt, y_init: UInt, n_init: UInt) -> (x: UInt, y: UInt, n: UInt)
            pre 0
            post y
        {
            validate
            assume \infty
            x = x_init
            y = y_init
            n = n_init
            if (x != 0) {
                var choice$2: Bool = flip(1/2)
                if (choice$2) {
                    x = 0
                } else {
                    y = y + 1
                }
                n = n + 1
                assert [x != 0] * (y + 1) + [x == 0] * y
                assume ?(false)
            }
        }
    """,
}

AST = r"""
proc ast_ast_p_antitone(a: UReal, b: UReal) -> ()
    pre ?(a <= b)
    post ?(1/2 >= 1/2)
{
}

proc ast_ast_d_antitone(a: UReal, b: UReal) -> ()
    pre ?(a <= b)
    post ?(1 >= 1)
{
}

proc ast_ast_I_wp_subinvariant(x_init: UInt) -> (x: UInt)
    pre [true]
    post [true]
{
    x = x_init
    if (x > 0) {
        var choice$1: Bool = flip(1/2)
        if (choice$1) {
            x = x .- 1
        } else {
            x = x + 1
        }
    }
}

proc ast_ast_termination_condition(x: UInt) -> ()
{
    assert ?(!(x > 0 && true) || x > 0)
}

coproc ast_ast_V_wp_superinvariant(x_init: UInt) -> (x: UInt)
    pre x_init
    post x
{
    x = x_init
    if (x > 0) {
        var choice$2: Bool = flip(1/2)
        if (choice$2) {
            x = x .- 1
        } else {
            x = x + 1
        }
    }
}

proc ast_ast_progress(x_init: UInt) -> (x: UInt)
    pre [true] * [x_init > 0] * (1/2)
    post [x <= x_init - 1]
{
    x = x_init
    var choice$3: Bool = flip(1/2)
    if (choice$3) {
        x = x .- 1
    } else {
        x = x + 1
    }
}
"""

PAST = r"""
proc past_past_condition_1(x: UInt) -> ()
{
    assert ?([!x > 0] * (2 * x) <= 2)
}

proc past_past_condition_2(x: UInt) -> ()
{
    assert ?([x > 0] * 2 <= [x > 0] * (2 * x) + [!x > 0])
}

coproc past_past_condition_3(x_init: UInt) -> (x: UInt)
    pre [x_init > 0] * (2 * x_init .- 1)
    post 0
{
    x = x_init
    if (x > 0) {
        var choice$1: Bool = flip(1/2)
        if (choice$1) {
            x = x .- 1
        }
        coassert 2 * x
        coassume ?(true)
    }
}
"""


def expected(text: str) -> str:
    return dedent(text).strip("\n")


@pytest.mark.parametrize("k, golden", [(2, KIND2_K2), (3, KIND2_K3)])
def test_k_induction_unrolling(benchmarks, k, golden):
    text = (benchmarks / "kind2.pgcl").read_text(encoding="utf-8").replace("@k_induction(2,", f"@k_induction({k},")
    program = translate(parse_pgcl(text, name="kind2")).program
    assert list(program.procs) == ["kind2"]
    assert show_procedure(program.procs["kind2"]) == expected(golden)


@pytest.mark.parametrize("name", sorted(OST))
def test_optional_stopping_procedures(benchmarks, name):
    program = translate(load_file(benchmarks / "ost.pgcl")).program
    assert show_procedure(program.procs[name]) == expected(OST[name])


@pytest.mark.parametrize("name, golden", [("ast.pgcl", AST), ("past.pgcl", PAST)])
def test_termination_rule_programs(benchmarks, name, golden):
    program = translate(load_file(benchmarks / name)).program
    assert show_program(program) == expected(golden) + "\n"


@pytest.mark.parametrize("golden", [KIND2_K2, AST, PAST])
def test_emitted_text_reparses(golden):
    text = expected(golden) + "\n"
    assert show_program(parse_heyvl(text)) == text


@pytest.mark.parametrize("name", ["die.pgcl", "ost.pgcl", "rabin.pgcl", "geometric.pgcl", "past.pgcl"])
def test_translation_is_deterministic(benchmarks, name):
    first = show_program(translate(load_file(benchmarks / name)).program)
    second = show_program(translate(load_file(benchmarks / name)).program)
    assert first == second
