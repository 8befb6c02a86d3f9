from fractions import Fraction

import pytest
from hypothesis import HealthCheck, given, settings
from hypothesis import strategies as st

from qverify.domains import Interp
from qverify.encodings import make_encoder, translate
from qverify.errors import ObserveOutsideCwp, WrongAnnotation
from qverify.heylo import eval_formula
from qverify.heyvl import Direction, ProcKind, vcgen
from qverify.oracle import FiniteDomainSpec, exact_loopfree, expectation, from_formula, vc_holds_on
from qverify.parser import load_file, parse_formula, parse_pgcl
from qverify.pgcl import Calculus, CalcKind, PgclProgram
from qverify.printer import show_program
from qverify.terms import UINT

from strategies import formulas, pgcl_commands

LOOP_FREE = """
var x: UInt
var y: UInt

{ x := x + 1 } [1/3] { y := 2 }
if (x < 3) { y := y + 1 } else { tick(2) }
{ skip } [] { x := y }
{ diverge } [1/4] { skip }
"""

STATES = FiniteDomainSpec({"x": range(4), "y": range(4)})


def vcs_of(prog) -> dict:
    return {vc.name: vc for vc in vcgen(translate(prog).program)}


def vc_ok(vc, finite, upto: int = 4) -> bool:
    return vc_holds_on(vc, *finite(vc, upto))


# -----------------------------
# Loop-free constructs are exact
# -----------------------------
@pytest.mark.parametrize("kind", list(CalcKind))
@pytest.mark.parametrize("direction", list(Direction))
def test_loop_free_encoding_matches_semantics(kind, direction):
    prog = parse_pgcl(LOOP_FREE)
    enc = make_encoder(prog, Calculus(kind, direction))
    post = parse_formula("x + [y == 2]")
    encoded = enc.vp(enc.encode(prog.body), post)
    naturals = Interp.with_naturals(6)
    for state in STATES.states():
        want = expectation(prog.body, from_formula(post), kind, state)
        assert eval_formula(encoded, state, naturals) == want, state


@pytest.mark.parametrize("kind", list(CalcKind))
@settings(max_examples=200, suppress_health_check=[HealthCheck.too_slow])
@given(pgcl_commands(), formulas(quantified=False, max_leaves=4), st.sampled_from(list(Direction)))
def test_random_loop_free_programs_match_exact_semantics(kind, body, post, direction):
    prog = PgclProgram(variables={"x": UINT, "y": UINT}, body=body)
    enc = make_encoder(prog, Calculus(kind, direction))
    encoded = enc.vp(enc.encode(body), post)
    exact = exact_loopfree(body, from_formula(post), kind, STATES)
    for st_ in STATES.states():
        assert eval_formula(encoded, st_) == exact[STATES.key(st_)], st_


def test_observe_needs_cwp():
    prog = parse_pgcl("var x: UInt\n@calculus(wp, lower)\n@post(x)\nobserve(x > 0)")
    with pytest.raises(ObserveOutsideCwp):
        translate(prog)


@pytest.mark.parametrize(
    "header",
    [
        "@post(1)",
        "@calculus(wp, upper)",
        "@calculus(wp, lower)\n@post(1)",
    ],
)
def test_missing_or_mismatched_annotations(benchmarks, header):
    body = (benchmarks / "kind2.pgcl").read_text().split("@k_induction", 1)[1]
    prog = parse_pgcl(f"var x: UInt\n{header}\n@k_induction{body}", name="kind2")
    with pytest.raises(WrongAnnotation):
        translate(prog)


# -----------------------------
# Procedure wrapper
# -----------------------------
def test_modified_inputs_are_snapshotted(benchmarks):
    program = translate(load_file(benchmarks / "kind2.pgcl")).program
    main = program.procs["kind2"]
    assert main.kind is ProcKind.COPROC
    assert main.inputs == (("x_init", UINT),)
    assert main.outputs == ()


def test_havoc_modified_only():
    prog = parse_pgcl(
        """
        var x: UInt
        var y: UInt
        @calculus(wp, upper)
        @pre(x + y)
        @post(x + y)
        @park(x + y)
        while (x > 0) { x := x .- 1 }
        """,
        name="count",
    )
    wide = show_program(translate(prog).program)
    narrow = show_program(translate(prog, havoc_modified_only=True).program)
    assert "cohavoc x, y" in wide
    assert "cohavoc x, y" not in narrow and "cohavoc x" in narrow
    for text_prog in (translate(prog), translate(prog, havoc_modified_only=True)):
        (vc,) = vcgen(text_prog.program)
        assert vc.name == "count"


def test_wlp_side_procedures_are_named_after_the_file(benchmarks):
    program = translate(load_file(benchmarks / "rabin.pgcl")).program
    assert list(program.procs) == [
        "rabin",
        "rabin_wlp_post_bounded",
        "rabin_park_invariant_bounded",
        "rabin_park_invariant_bounded_2",
    ]


# -----------------------------
# Park induction and k-induction
# -----------------------------
def test_expected_runtime_park(benchmarks, finite):
    vcs = vcs_of(load_file(benchmarks / "ert_geo.pgcl"))
    assert vcs["ert_geo"].direction is Direction.UPPER
    assert vc_ok(vcs["ert_geo"], finite)


def test_expected_runtime_bound_too_small_is_refuted(benchmarks, finite):
    text = (benchmarks / "ert_geo.pgcl").read_text().replace("6 * [c == 1]", "5 * [c == 1]")
    vcs = vcs_of(parse_pgcl(text, name="ert_geo"))
    assert not vc_ok(vcs["ert_geo"], finite)


def test_iterative_lossy_traversal(benchmarks, finite):
    vcs = vcs_of(load_file(benchmarks / "lossy_iter.pgcl"))
    assert vc_ok(vcs["lossy_iter"], finite)


def test_two_inductive_invariant(benchmarks, finite):
    vcs = vcs_of(load_file(benchmarks / "kind2.pgcl"))
    assert vc_ok(vcs["kind2"], finite)


def test_park_is_one_induction_and_fails_here(benchmarks, finite):
    text = (benchmarks / "kind2.pgcl").read_text().replace("@k_induction(2,", "@k_induction(1,")
    vcs = vcs_of(parse_pgcl(text, name="kind2"))
    assert not vc_ok(vcs["kind2"], finite)


def test_rabin_lower_bound(benchmarks, finite):
    for vc in vcgen(translate(load_file(benchmarks / "rabin.pgcl")).program):
        assert vc_ok(vc, finite, upto=3), vc.name


# -----------------------------
# Conditional expectations
# -----------------------------
def test_cwp_bounds(benchmarks, finite):
    translation = translate(load_file(benchmarks / "die.pgcl"))
    assert translation.cwp_bound == Fraction(7, 2)
    vcs = {vc.name: vc for vc in vcgen(translation.program)}
    assert set(vcs) == {"die_wp", "die_wlp"}
    assert vcs["die_wp"].direction is Direction.UPPER
    assert vcs["die_wlp"].direction is Direction.LOWER
    for vc in vcs.values():
        assert vc_ok(vc, finite, upto=1)


@pytest.mark.parametrize("old, new, name", [("2.625", "2.5", "die_wp"), ("0.75", "0.8", "die_wlp")])
def test_cwp_tight_bounds(benchmarks, finite, old, new, name):
    cwp = "@cwp(2.625, 0.75)"
    text = (benchmarks / "die.pgcl").read_text().replace(cwp, cwp.replace(old, new))
    vcs = {vc.name: vc for vc in vcgen(translate(parse_pgcl(text, name="die")).program)}
    assert not vc_ok(vcs[name], finite, upto=1)
