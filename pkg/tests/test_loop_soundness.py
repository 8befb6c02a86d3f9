"""Loop rules against unrolling: a verified invariant must bound every iterate of the loop functional."""
import pytest
from hypothesis import HealthCheck, given, settings
from hypothesis import strategies as st

from qverify.encodings import translate
from qverify.heylo import Atom, eval_formula
from qverify.heyvl import Direction, vcgen
from qverify.oracle import CharFunctional, FiniteDomainSpec, from_formula, iterate_phi, vc_holds_on
from qverify.parser import parse_formula, parse_pgcl
from qverify.pgcl import Calculus, CalcKind, Park, PgclProgram, While, commands
from qverify.terms import UINT, app, num

from strategies import conditions, numeric_terms, pgcl_commands

SPACE = FiniteDomainSpec({"x": range(5)})
ITERATIONS = (1, 2, 4, 8, 16, 32, 64)

# calculus, direction, post, rule, invariant, loop
LOOPS = [
    ("wp", "upper", "1", "park", "1", "while (x > 0) { x := x .- 1 }"),
    ("wp", "upper", "1", "park", "1", "while (x > 0) { { x := 0 } [1/2] { skip } }"),
    ("wp", "upper", "1", "park", "1", "while (x > 0) { { x := x .- 1 } [1/2] { x := x + 1 } }"),
    ("wp", "upper", "x + 1", "park", "1", "while (x > 0) { { x := x .- 1 } [1/3] { skip } }"),
    ("wp", "upper", "x", "park", "[x <= 3] * 3 + [x > 3] * x", "while (x < 3) { x := x + 1 }"),
    ("wp", "upper", "x", "park", "[x == 1] + [x != 1] * x", "while (x == 1) { { x := 0 } [1/2] { x := 2 } }"),
    ("wp", "upper", "x", "park", "1", "while (x > 1) { x := x .- 2 }"),
    ("wp", "upper", "[x == 0] * 2", "park", "2", "while (x > 0) { { x := x .- 1 } [] { x := 0 } }"),
    ("wp", "upper", "1", "k_induction(2,", "1 + 4 * [x == 1]", "while (x > 0) { x := x .- 1 }"),
    ("wp", "upper", "1", "k_induction(3,", "1 + 4 * [x == 1]", "while (x > 0) { x := x .- 1 }"),
    ("ert", "upper", "0", "park", "1 + 2 * x", "while (x > 0) { x := x .- 1 }"),
    ("ert", "upper", "0", "park", "1 + 6 * [x > 0]", "while (x > 0) { { x := 0 } [1/2] { skip } }"),
    ("ert", "upper", "0", "park", "1 + 2 * (x .- 2)", "while (x > 2) { x := x .- 1 }"),
    ("ert", "upper", "0", "park", "1 + 3 * x", "while (x > 0) { if (x == 1) { x := 0 } else { x := x .- 1 } }"),
    ("wlp", "lower", "1", "park", "1", "while (x > 0) { { x := x .- 1 } [1/2] { diverge } }"),
    ("wlp", "lower", "1", "park", "1", "while (x > 0) { { x := 0 } [1/2] { skip } }"),
    ("wlp", "lower", "1", "park", "1", "while (x > 0) { { x := x .- 1 } [] { diverge } }"),
    ("wlp", "lower", "[x == 0]", "park", "1", "while (x > 0) { x := x .- 1 }"),
    ("wlp", "lower", "[x == 4]", "park", "[x == 4]", "while (x < 4) { { x := x + 1 } [1/2] { x := 0 } }"),
]


def loop_program(calc, direction, post, rule, inv, loop):
    annotation = f"@{rule}({inv})" if rule == "park" else f"@{rule} {inv})"
    text = f"var x: UInt\n@calculus({calc}, {direction})\n@pre({inv})\n@post({post})\n{annotation}\n{loop}\n"
    return parse_pgcl(text, name="loop")


def verified(prog, finite) -> bool:
    return all(vc_holds_on(vc, *finite(vc, 4)) for vc in vcgen(translate(prog).program))


def first_escape(loop, post, inv, kind, upper):
    """First (iteration, state) where an iterate leaves the invariant's side on SPACE, or None."""
    functional = CharFunctional.of_loop(loop, from_formula(post), kind)
    for n in ITERATIONS:
        table = iterate_phi(functional, n, SPACE)
        for state in SPACE.states():
            approx, bound = table[SPACE.key(state)], eval_formula(inv, state)
            if not (approx <= bound if upper else bound <= approx):
                return n, state
    return None


@pytest.mark.parametrize("calc, direction, post, rule, inv, loop", LOOPS)
def test_verified_invariant_bounds_iterates(finite, calc, direction, post, rule, inv, loop):
    prog = loop_program(calc, direction, post, rule, inv, loop)
    assert verified(prog, finite)
    kind = CalcKind[calc.upper()]
    assert first_escape(commands(prog.body)[0], prog.post, parse_formula(inv), kind, direction == "upper") is None


@pytest.mark.parametrize(
    "calc, post, inv, loop",
    [
        ("ert", "0", "2 * x", "while (x > 0) { x := x .- 1 }"),
        ("wp", "x", "2", "while (x < 3) { x := x + 1 }"),
    ],
)
def test_too_small_invariant_is_refuted(finite, calc, post, inv, loop):
    prog = loop_program(calc, "upper", post, "park", inv, loop)
    assert not verified(prog, finite)
    assert first_escape(commands(prog.body)[0], prog.post, parse_formula(inv), CalcKind[calc.upper()], True) is not None


@settings(max_examples=100, suppress_health_check=[HealthCheck.too_slow, HealthCheck.function_scoped_fixture])
@given(
    conditions(("x",)),
    pgcl_commands(("x",)),
    numeric_terms(("x",)),
    st.integers(0, 12),
    numeric_terms(("x",)),
    st.sampled_from([CalcKind.WP, CalcKind.ERT]),
)
def test_random_park_loops_are_sound(finite, guard, body, shape, slack, post_term, kind):
    inv = Atom(app("+", shape, num(slack)))
    loop = While(guard, body, Park(inv))
    prog = PgclProgram({"x": UINT}, loop, Calculus(kind, Direction.UPPER), pres=[inv], post=Atom(post_term), name="loop")
    if verified(prog, finite):
        assert first_escape(loop, prog.post, inv, kind, upper=True) is None
