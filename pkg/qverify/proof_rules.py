# qverify/proof_rules.py
"""
Loop rules that produce separate (co)procedures: omega-invariants, the optional
stopping theorem, the AST and PAST rules, and conditional expectations.

Each side procedure reads the loop state through `x_init` snapshot inputs and
writes the program variables as outputs.
"""
from __future__ import annotations

import logging
from dataclasses import replace

from .errors import (
    AnnotationConstraintError,
    MissingPastWitness,
    WrongAnnotation,
    ZeroNormalizer,
)
from .heylo import (
    Atom,
    CoEmbed,
    CoImpl,
    Embed,
    INFTY,
    Formula,
    Impl,
    const,
    subst,
)
from .heyvl import (
    SKIP,
    Assert,
    Assume,
    CoAssert,
    CoAssume,
    CoHavoc,
    Declare,
    Direction,
    Havoc,
    IfBool,
    Procedure,
    ProcKind,
    Program,
    Stmt,
    ValidateStmt,
    VarAssign,
    seq,
)
from .encodings import (
    OMEGA,
    OST_PAIRS,
    Encoder,
    Translation,
    _cut,
    _iter,
    encode_park,
    encode_proc,
    initial_name,
    loop_side_conditions,
    make_encoder,
    proc_kind,
    snapshot,
)
from .pgcl import (
    AstRule,
    Calculus,
    CalcKind,
    Ost,
    OmegaInvariant,
    Park,
    PastRule,
    PgclProgram,
    While,
    commands,
)
from .terms import FALSE, UINT, UREAL, Term, Var, app, iverson, negate, num, subst_term

logger = logging.getLogger(__name__)

# parameter of the AST rule's probability and decrease functions
AST_PARAM = "v"


# -----------------------------
# Shared pieces
# -----------------------------
def _snapshot_params(enc: Encoder):
    inputs = tuple((initial_name(x), ty) for x, ty in enc.variables.items())
    outputs = tuple(enc.variables.items())
    return inputs, outputs


def _init(enc: Encoder) -> list[Stmt]:
    return [VarAssign(x, Var(initial_name(x))) for x in enc.variables]


def _all_inputs(enc: Encoder) -> tuple:
    return tuple(enc.variables.items())


def _step_proc(
    enc: Encoder,
    suffix: str,
    kind: ProcKind,
    pre: Formula,
    post: Formula,
    body: Stmt,
    extra_inputs: tuple = (),
) -> Procedure:
    inputs, outputs = _snapshot_params(enc)
    return Procedure(
        enc.proc_name(suffix), kind, inputs + extra_inputs, outputs, (pre,), (post,), seq(_init(enc), [body])
    )


def _check_pair(enc: Encoder, loop: While, allowed: set, what: str) -> None:
    if (enc.calc.kind, enc.calc.direction) not in allowed:
        raise WrongAnnotation(f"{what} cannot prove a {enc.calc} bound", loop.annotation.span)


# -----------------------------
# omega-invariants
# -----------------------------
def encode_omega(enc: Encoder, loop: While, post: Formula) -> Stmt:
    """
    Lower bounds (wp, ert): I_0 <= Phi(0) and I_(n+1) <= Phi(I_n), then sup_n I_n.
    Upper bounds (wlp):     I_0 >= Phi(1) and I_(n+1) >= Phi(I_n), then inf_n I_n.
    """
    ann: OmegaInvariant = loop.annotation
    _check_pair(enc, loop, OMEGA, "@omega")
    if ann.n in enc.variables:
        raise WrongAnnotation(f"omega index {ann.n} clashes with a program variable", ann.span)
    n, inv = ann.n, ann.inv
    kind = proc_kind(enc.calc.direction)
    start = const(1) if enc.upper else const(0)
    i0 = subst(inv, n, num(0))
    i_next = subst(inv, n, app("+", Var(n), num(1)))

    enc.add(_step_proc(enc, "omega_condition_1", kind, snapshot(i0, enc.variables), post,
                       _iter(enc, loop, _cut(enc, start))))
    enc.add(_step_proc(enc, "omega_condition_2", kind, snapshot(i_next, enc.variables), post,
                       _iter(enc, loop, _cut(enc, inv)), extra_inputs=((n, UINT),)))

    index = enc.fresh(n)
    at_index = subst(inv, n, Var(index))
    if enc.upper:
        return seq([Declare(index, UINT), Havoc((index,)), CoAssert(at_index), CoAssume(CoEmbed(FALSE))])
    return seq([Declare(index, UINT), CoHavoc((index,)), Assert(at_index), Assume(Embed(FALSE))])


# -----------------------------
# Optional stopping theorem
# -----------------------------
def encode_ost(enc: Encoder, loop: While, post: Formula) -> Stmt:
    ann: Ost = loop.annotation
    _check_pair(enc, loop, OST_PAIRS, "@ost")
    if ann.c < 0:
        raise AnnotationConstraintError(f"the difference bound c must be non-negative, got {ann.c}", ann.span)
    if ann.past is None:
        raise MissingPastWitness(
            "@ost needs a third argument: an expected-runtime upper bound proving positive almost-sure termination",
            ann.span,
        )
    inv = Atom(ann.inv)
    not_b = negate(loop.cond)
    inv0 = subst_term(ann.inv, {x: Var(initial_name(x)) for x in enc.variables})
    inputs = _all_inputs(enc)

    enc.add(_step_proc(enc, "ost_subinvariant", ProcKind.PROC, snapshot(inv, enc.variables), post,
                       _iter(enc, loop, _cut(enc, inv))))
    enc.add(Procedure(enc.proc_name("ost_harmonizes_lower"), ProcKind.PROC, inputs, (), (inv,),
                      (Impl(Embed(not_b), post),), SKIP))
    enc.add(Procedure(enc.proc_name("ost_harmonizes_upper"), ProcKind.COPROC, inputs, (), (inv,),
                      (CoImpl(CoEmbed(not_b), post),), SKIP))

    inputs_s, outputs_s = _snapshot_params(enc)
    finite = seq([ValidateStmt(), Assume(INFTY)], _init(enc), [_iter(enc, loop, _cut(enc, inv))])
    enc.add(Procedure(enc.proc_name("ost_phi_finite"), ProcKind.COPROC, inputs_s, outputs_s,
                      (const(0),), (post,), finite))

    diff = app("ite", app("<=", inv0, ann.inv), app(".-", ann.inv, inv0), app(".-", inv0, ann.inv))
    enc.add(_step_proc(enc, "ost_conditional_difference_bounded", ProcKind.COPROC, const(ann.c), Atom(diff),
                       IfBool(loop.cond, enc.encode(loop.body), SKIP)))

    ert = enc.with_calc(Calculus(CalcKind.ERT, Direction.UPPER))
    witness = While(loop.cond, loop.body, Park(Atom(ann.past), ann.span), loop.span)
    enc.add(_step_proc(ert, "ost_past_witness", ProcKind.COPROC, snapshot(Atom(ann.past), enc.variables),
                       const(0), encode_park(ert, witness)))

    return seq([Assert(inv), Assume(Embed(FALSE))])


def top_level_rule(enc: Encoder, loop: While, suffix: list[Stmt], post: Formula) -> Stmt:
    """Replace a procedure-generating loop; its side procedures continue with vp(suffix, post)."""
    ann = loop.annotation
    if isinstance(ann, (AstRule, PastRule)):
        raise WrongAnnotation(f"@{ann.rule} proves termination of a loop that forms the whole program", ann.span)
    continuation = enc.vp(seq(suffix), post) if suffix else post
    if isinstance(ann, OmegaInvariant):
        return encode_omega(enc, loop, continuation)
    if isinstance(ann, Ost):
        return encode_ost(enc, loop, continuation)
    raise WrongAnnotation(f"unsupported loop annotation @{ann.rule}", ann.span)


# -----------------------------
# AST / PAST
# -----------------------------
def encode_ast_rule(enc: Encoder, loop: While) -> list[Procedure]:
    """Almost-sure termination from a Boolean invariant, a variant and antitone p, d."""
    ann: AstRule = loop.annotation
    lower = enc.with_calc(Calculus(CalcKind.WP, Direction.LOWER))
    upper = enc.with_calc(Calculus(CalcKind.WP, Direction.UPPER))
    b, inv, variant = loop.cond, ann.inv, ann.variant
    to_init = {x: Var(initial_name(x)) for x in enc.variables}
    inv0, b0, v0 = (subst_term(t, to_init) for t in (inv, b, variant))

    def antitone(f: Term, name: str) -> Procedure:
        a, bb = Var("a"), Var("b")
        return Procedure(
            enc.proc_name(name), ProcKind.PROC, (("a", UREAL), ("b", UREAL)), (),
            (Embed(app("<=", a, bb)),),
            (Embed(app(">=", subst_term(f, {AST_PARAM: a}), subst_term(f, {AST_PARAM: bb}))),),
            SKIP,
        )

    enc.add(antitone(ann.prob, "ast_p_antitone"))
    enc.add(antitone(ann.dec, "ast_d_antitone"))
    enc.add(_step_proc(lower, "ast_I_wp_subinvariant", ProcKind.PROC, Atom(iverson(inv0)), Atom(iverson(inv)),
                       IfBool(b, lower.encode(loop.body), SKIP)))
    cond = app("||", negate(app("&&", b, inv)), app(">", variant, num(0)))
    enc.add(Procedure(enc.proc_name("ast_termination_condition"), ProcKind.PROC, _all_inputs(enc), (), (), (),
                      Assert(Embed(cond))))
    enc.add(_step_proc(upper, "ast_V_wp_superinvariant", ProcKind.COPROC, Atom(v0), Atom(variant),
                       IfBool(b, upper.encode(loop.body), SKIP)))
    progress_pre = app("*", app("*", iverson(inv0), iverson(b0)), subst_term(ann.prob, {AST_PARAM: v0}))
    progress_post = iverson(app("<=", variant, app("-", v0, subst_term(ann.dec, {AST_PARAM: v0}))))
    enc.add(_step_proc(lower, "ast_progress", ProcKind.PROC, Atom(progress_pre), Atom(progress_post),
                       lower.encode(loop.body)))
    return enc.procedures[-6:]


def encode_past_rule(enc: Encoder, loop: While) -> list[Procedure]:
    """Positive almost-sure termination from a ranking supermartingale I with 0 < eps < K."""
    ann: PastRule = loop.annotation
    if not 0 < ann.eps < ann.bound:
        raise AnnotationConstraintError(f"@past needs 0 < eps < K, got eps={ann.eps}, K={ann.bound}", ann.span)
    b, inv = loop.cond, ann.inv
    k, eps = num(ann.bound), num(ann.eps)
    inputs = _all_inputs(enc)

    cond1 = app("<=", app("*", iverson(negate(b)), inv), k)
    cond2 = app("<=", app("*", iverson(b), k), app("+", app("*", iverson(b), inv), iverson(negate(b))))
    first = Procedure(enc.proc_name("past_condition_1"), ProcKind.PROC, inputs, (), (), (), Assert(Embed(cond1)))
    enc.add(first)
    second = Procedure(enc.proc_name("past_condition_2"), ProcKind.PROC, inputs, (), (), (), Assert(Embed(cond2)))
    enc.add(second)

    upper = enc.with_calc(Calculus(CalcKind.WP, Direction.UPPER))
    decrease = Atom(app("*", iverson(b), app(".-", inv, eps)))
    third = _step_proc(upper, "past_condition_3", ProcKind.COPROC, snapshot(decrease, enc.variables), const(0),
                       _iter(upper, loop, _cut(upper, Atom(inv))))
    enc.add(third)
    return [first, second, third]


def rule_only_loop(prog: PgclProgram) -> Translation | None:
    """AST/PAST programs are a single annotated loop and produce rule procedures only."""
    cmds = commands(prog.body)
    loops = [c for c in cmds if isinstance(c, While) and isinstance(c.annotation, (AstRule, PastRule))]
    if not loops:
        return None
    loop = loops[0]
    if len(cmds) != 1:
        raise WrongAnnotation(f"@{loop.annotation.rule} requires the annotated loop to be the whole program",
                              loop.annotation.span)
    calc = Calculus(CalcKind.WP, Direction.LOWER)
    enc = make_encoder(prog, calc)
    if isinstance(loop.annotation, AstRule):
        encode_ast_rule(enc, loop)
    else:
        encode_past_rule(enc, loop)
    program = Program(domains=list(prog.domains))
    for p in enc.procedures:
        program.add(p)
    logger.info("translated %s with @%s: %d procedures", prog.name, loop.annotation.rule, len(program.procs))
    return Translation(program)


# -----------------------------
# Conditional expectations
# -----------------------------
def encode_cwp(prog: PgclProgram, havoc_modified_only: bool = False) -> Translation:
    """
    cwp(C)(post) <= wp_bound / norm_bound from an upper wp bound and a lower
    bound on the probability of passing every observe (wlp(C)(1), or wp(C)(1)).
    """
    spec = prog.cwp
    if spec.norm_bound <= 0:
        raise ZeroNormalizer(f"the normalising bound must be positive, got {spec.norm_bound}")
    if prog.post is None:
        raise WrongAnnotation("missing @post")

    enc = make_encoder(prog, Calculus(CalcKind.WP, Direction.UPPER), havoc_modified_only)
    enc.allow_observe = True
    main = encode_proc(enc, prog.body, [const(spec.wp_bound)], prog.post, name=f"{prog.name}_wp")

    norm_calc = Calculus(spec.normalizer, Direction.LOWER)
    norm = replace(enc, calc=norm_calc)
    suffix = "wlp" if spec.normalizer is CalcKind.WLP else "wp_norm"
    normalizer = encode_proc(norm, prog.body, [const(spec.norm_bound)], const(1), name=f"{prog.name}_{suffix}")
    loop_side_conditions(norm, prog.body)

    program = Program(domains=list(prog.domains))
    program.add(main)
    program.add(normalizer)
    for p in enc.procedures:
        program.add(p)
    return Translation(program, cwp_bound=spec.bound)
