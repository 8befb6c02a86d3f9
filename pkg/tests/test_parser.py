from fractions import Fraction

import pytest

from qverify.encodings import translate
from qverify.errors import ParseError, TypeCheckError, WrongAnnotation
from qverify.heylo import Atom, Embed, Impl, Inf, Min, const
from qverify.heyvl import Call, Dist, Flip, ProcKind, VarAssign
from qverify.parser import load_file, parse_formula, parse_heyvl, parse_pgcl, parse_term
from qverify.pgcl import CalcKind, KInduction, OmegaInvariant, Ost, While, commands
from qverify.printer import show, show_program
from qverify.terms import UINT, App, Var, num


def test_formula_precedence():
    f = parse_formula("x + 1 /\\ 2 ==> y")
    assert f == Impl(Min(Atom(App("+", (Var("x"), num(1)))), const(2)), Atom(Var("y")))


def test_quantifier_and_embedding():
    f = parse_formula("inf y: UInt. ?(x < y) ==> y")
    assert isinstance(f, Inf)
    assert f.var == "y" and f.ty == UINT
    assert f.body == Impl(Embed(App("<", (Var("x"), Var("y")))), Atom(Var("y")))


def test_literal_fractions_fold():
    assert parse_term("1/2") == num(Fraction(1, 2))
    assert parse_term("0.75") == num(Fraction(3, 4))
    assert parse_term("-3") == num(-3)


def test_term_required_where_formula_given():
    with pytest.raises(ParseError):
        parse_term("?(true)")


@pytest.mark.parametrize("text", ["x + 1 /\\ 2 ==> y", "sup n: UInt. [x == n] * 1/2", "\\validate(x <~~ 3) \\/ 0"])
def test_formula_print_parse(text):
    f = parse_formula(text)
    assert parse_formula(show(f)) == f


def test_heyvl_program_shape(benchmarks):
    program = load_file(benchmarks / "foo_bar.heyvl")
    foo, bar = program.procs["foo"], program.procs["bar"]
    assert foo.kind is ProcKind.PROC
    assert foo.inputs == (("x", UINT),) and foo.outputs == ()
    assign = foo.body.stmts[0]
    assert isinstance(assign, VarAssign) and isinstance(assign.rhs, Dist)
    call = bar.body.stmts[0]
    assert isinstance(call, Call) and call.proc == "foo" and call.outs == ()


def test_flip_and_coproc(benchmarks):
    program = load_file(benchmarks / "lossy.heyvl")
    lossy = program.procs["lossy"]
    assert lossy.kind is ProcKind.COPROC
    assert [d.name for d in program.domains] == ["Exponentials", "List"]
    shown = show_program(program)
    assert "flip(1/2)" in shown


def test_assignment_from_procedure_becomes_call():
    program = parse_heyvl(
        """
        proc id(a: UInt) -> (r: UInt) pre a post r { r = a }
        proc user(a: UInt) -> (s: UInt) pre a post s { s = id(a) }
        """
    )
    call = program.procs["user"].body.stmts[0]
    assert call == Call(("s",), "id", (Var("a"),))


@pytest.mark.parametrize("name", ["ex.heyvl", "foo_bar.heyvl", "lossy.heyvl"])
def test_heyvl_print_parse_fixpoint(benchmarks, name):
    program = load_file(benchmarks / name)
    text = show_program(program)
    assert parse_heyvl(text) == program
    assert show_program(parse_heyvl(text)) == text


@pytest.mark.parametrize(
    "name",
    ["die.pgcl", "geometric.pgcl", "kind2.pgcl", "ost.pgcl", "ast.pgcl", "past.pgcl", "rabin.pgcl", "ert_geo.pgcl"],
)
def test_translated_programs_reparse(benchmarks, name):
    text = show_program(translate(load_file(benchmarks / name)).program)
    assert show_program(parse_heyvl(text)) == text


def test_pgcl_annotations(benchmarks):
    prog = load_file(benchmarks / "kind2.pgcl")
    assert prog.name == "kind2"
    assert prog.calculus.kind is CalcKind.WP
    loop = commands(prog.body)[0]
    assert isinstance(loop, While)
    assert isinstance(loop.annotation, KInduction) and loop.annotation.k == 2

    geo = load_file(benchmarks / "geometric.pgcl")
    assert isinstance(commands(geo.body)[0].annotation, OmegaInvariant)

    ost = load_file(benchmarks / "ost.pgcl")
    ann = commands(ost.body)[0].annotation
    assert isinstance(ann, Ost) and ann.c == 1 and ann.past is not None


@pytest.mark.parametrize("keyword", ["pre", "post"])
def test_keyword_named_annotations(keyword):
    prog = parse_pgcl(f"var x: UInt\n@calculus(wp, upper)\n@{keyword}(x + 1)\nx := 1\n")
    expected = Atom(App("+", (Var("x"), num(1))))
    if keyword == "pre":
        assert prog.pres == [expected] and prog.post is None
    else:
        assert prog.post == expected and prog.pres == []


def test_pre_and_post_annotations_together():
    prog = parse_pgcl("var x: UInt\n@pre(x)\n@post([x == 1] * 2)\n@calculus(wp, lower)\nx := 1\n")
    assert prog.pres == [Atom(Var("x"))]
    assert prog.post is not None and prog.calculus.kind is CalcKind.WP


@pytest.mark.parametrize(
    "name",
    ["die.pgcl", "rabin.pgcl", "ost.pgcl", "geometric.pgcl", "kind2.pgcl", "ert_geo.pgcl", "lossy_iter.pgcl"],
)
def test_benchmark_posts_parse(benchmarks, name):
    assert load_file(benchmarks / name).post is not None


def test_cwp_annotation(benchmarks):
    die = load_file(benchmarks / "die.pgcl")
    assert die.cwp.wp_bound == Fraction(21, 8)
    assert die.cwp.norm_bound == Fraction(3, 4)
    assert die.cwp.bound == Fraction(7, 2)
    assert die.cwp.normalizer is CalcKind.WLP


def test_parse_error_has_position():
    text = "proc f(x: UInt) -> ()\n    pre x\n{\n    assert ) x\n}\n"
    with pytest.raises(ParseError) as info:
        parse_heyvl(text)
    assert info.value.span is not None
    assert info.value.span.line == 4


def test_unknown_type_rejected():
    with pytest.raises(TypeCheckError):
        parse_heyvl("proc f(x: Foo) -> () { }")


def test_duplicate_variable_rejected():
    with pytest.raises(ParseError):
        parse_pgcl("var x: UInt\nvar x: UInt\nskip")


@pytest.mark.parametrize(
    "text",
    [
        "var x: UInt\nwhile (x > 0) { x := x .- 1 }",
        "var x: UInt\n@k_induction(0, 1)\nwhile (x > 0) { x := x .- 1 }",
        "var x: UInt\n@park(1)\nx := 1",
        "var x: UInt\n@ost(x, 1, 2, 3)\nwhile (x > 0) { x := x .- 1 }",
        "var x: UInt\n@post(x)\n@post(x)\nskip",
        "var x: UInt\n@calculus(wp, sideways)\nskip",
        "var x: UInt\n@frobnicate(x)\nskip",
        "var x: UInt\n@cwp(1, 1, ert)\nskip",
    ],
)
def test_bad_annotations(text):
    with pytest.raises(WrongAnnotation):
        parse_pgcl(text)


def test_flip_rhs_is_parsed():
    program = parse_heyvl("proc f() -> (b: Bool) pre 0 post [b] { b = flip(1/3) }")
    assign = program.procs["f"].body.stmts[0]
    assert assign.rhs == Flip(num(Fraction(1, 3)))
