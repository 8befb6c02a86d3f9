# qverify/encodings.py
"""
pGCL -> HeyVL for the three calculi.

Loop-free constructs are encoded exactly, so both bound directions share them.
Loops go through the rule named by their annotation; rules that only yield
procedures (omega, OST, AST, PAST, cwp) live in proof_rules.py.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, field, replace
from typing import Callable

from .domains import TypeContext, check_domains
from .errors import ObserveOutsideCwp, UnboundVariable, WrongAnnotation
from .heylo import Embed, Formula, const, free_vars, subst
from .heyvl import (
    SKIP,
    Assert,
    Assume,
    CoAssert,
    CoAssume,
    CoHavoc,
    CoValidateStmt,
    Demonic,
    Direction,
    Flip,
    FreshNames,
    Havoc,
    IfBool,
    Procedure,
    ProcKind,
    Program,
    Reward,
    Stmt,
    ValidateStmt,
    VarAssign,
    VpEnv,
    seq,
    vp,
)
from .pgcl import (
    Assign,
    Block,
    Calculus,
    CalcKind,
    Cmd,
    Diverge,
    Ite,
    KInduction,
    NdChoice,
    Observe,
    Park,
    PChoice,
    PgclProgram,
    Skip,
    Tick,
    While,
    commands,
    modified_vars,
    subcommands,
)
from .terms import BOOL, FALSE, TRUE, Ty, Var, num

logger = logging.getLogger(__name__)

# (calculus, direction) pairs each loop rule can prove
PARK_LIKE = {
    (CalcKind.WLP, Direction.LOWER),
    (CalcKind.WP, Direction.UPPER),
    (CalcKind.ERT, Direction.UPPER),
}
OMEGA = {
    (CalcKind.WLP, Direction.UPPER),
    (CalcKind.WP, Direction.LOWER),
    (CalcKind.ERT, Direction.LOWER),
}
OST_PAIRS = {(CalcKind.WP, Direction.LOWER)}


def proc_kind(direction: Direction) -> ProcKind:
    return ProcKind.PROC if direction is Direction.LOWER else ProcKind.COPROC


@dataclass
class Encoder:
    """Translation state for one pGCL file."""

    variables: dict[str, Ty]
    calc: Calculus
    ctx: TypeContext
    fresh: FreshNames = field(default_factory=FreshNames)
    allow_observe: bool = False
    havoc_modified_only: bool = False
    procedures: list[Procedure] = field(default_factory=list)
    stem: str = "main"
    # hook for rules that only work at the top level of a procedure body
    top_level_rule: Callable[["Encoder", While, list[Stmt], Formula], Stmt] | None = None

    @property
    def ert(self) -> bool:
        return self.calc.kind is CalcKind.ERT

    @property
    def upper(self) -> bool:
        return self.calc.direction is Direction.UPPER

    def with_calc(self, calc: Calculus) -> "Encoder":
        return replace(self, calc=calc, top_level_rule=None)

    def proc_name(self, suffix: str) -> str:
        base = f"{self.stem}_{suffix}"
        taken = {p.name for p in self.procedures}
        if base not in taken:
            return base
        k = 2
        while f"{base}_{k}" in taken:
            k += 1
        return f"{base}_{k}"

    def add(self, proc: Procedure) -> None:
        self.procedures.append(proc)

    def vp(self, s: Stmt, post: Formula) -> Formula:
        env = VpEnv({p.name: p for p in self.procedures}, self.ctx.extend(self.variables),
                    proc_kind(self.calc.direction), self.fresh)
        return vp(s, post, env)

    # -----------------------------
    # Loop-free constructs
    # -----------------------------
    def tick(self) -> list[Stmt]:
        return [Reward(num(1))] if self.ert else []

    def encode(self, c: Cmd) -> Stmt:
        """Encoding of a command nested anywhere (no procedure-generating rules)."""
        if isinstance(c, Block):
            return seq(self.encode(x) for x in c.cmds) if c.cmds else SKIP
        if isinstance(c, Skip):
            return seq(self.tick()) if self.ert else SKIP
        if isinstance(c, Assign):
            return seq(self.tick(), [VarAssign(c.name, c.value)])
        if isinstance(c, Ite):
            return seq(self.tick(), [IfBool(c.cond, self.encode(c.then), self.encode(c.orelse))])
        if isinstance(c, PChoice):
            tmp = self.fresh("choice")
            return seq(
                [VarAssign(tmp, Flip(c.prob), BOOL)],
                self.tick(),
                [IfBool(Var(tmp), self.encode(c.left), self.encode(c.right))],
            )
        if isinstance(c, NdChoice):
            return Demonic(self.encode(c.left), self.encode(c.right))
        if isinstance(c, Diverge):
            return self.encode_diverge()
        if isinstance(c, Observe):
            if not self.allow_observe:
                raise ObserveOutsideCwp("observe is only meaningful under conditional expectations (@cwp)")
            return Assert(Embed(c.cond))
        if isinstance(c, Tick):
            return Reward(c.amount) if self.ert else SKIP
        if isinstance(c, While):
            return self.encode_loop(c)
        raise TypeError(f"not a command: {c!r}")

    def encode_diverge(self) -> Stmt:
        if self.calc.kind is CalcKind.WP:
            return Assert(const(0))
        if self.calc.kind is CalcKind.WLP:
            return seq([Assert(const(1)), Assume(Embed(FALSE))])
        return Assume(Embed(FALSE))

    def encode_body(self, c: Cmd, post: Formula) -> Stmt:
        """Top-level encoding: procedure-generating loop rules may appear, continuing with post."""
        if self.top_level_rule is None:
            return self.encode(c)
        parts: list[Stmt] = []
        for cmd in reversed(commands(c)):
            if isinstance(cmd, While) and _generates_procedures(cmd):
                parts.insert(0, self.top_level_rule(self, cmd, list(parts), post))
            else:
                parts.insert(0, self.encode(cmd))
        return seq(parts) if parts else SKIP

    # -----------------------------
    # Loops
    # -----------------------------
    def encode_loop(self, loop: While) -> Stmt:
        ann = loop.annotation
        pair = (self.calc.kind, self.calc.direction)
        if isinstance(ann, (Park, KInduction)):
            if pair not in PARK_LIKE:
                raise WrongAnnotation(f"@{ann.rule} cannot prove a {self.calc} bound", ann.span)
            if isinstance(ann, Park):
                return encode_park(self, loop)
            return encode_kinduction(self, loop)
        rule = ann.rule if ann is not None else "(none)"
        raise WrongAnnotation(
            f"@{rule} produces separate procedures and is only allowed at the top level", getattr(ann, "span", None)
        )

    def havoc_scope(self, loop: While) -> tuple[str, ...]:
        if self.havoc_modified_only:
            modified = modified_vars(loop.body)
            return tuple(v for v in self.variables if v in modified)
        return tuple(self.variables)


def _generates_procedures(loop: While) -> bool:
    return loop.annotation is not None and not isinstance(loop.annotation, (Park, KInduction))


# -----------------------------
# Park induction
# -----------------------------
def _havoc(enc: Encoder, names: tuple[str, ...]) -> list[Stmt]:
    if not names:
        return []
    return [CoHavoc(names) if enc.upper else Havoc(names)]


def _loop_prefix(enc: Encoder, loop: While, inv: Formula) -> list[Stmt]:
    """assert I; havoc; validate; assume I (and the co-forms for upper bounds)."""
    scope = enc.havoc_scope(loop)
    if enc.upper:
        return [CoAssert(inv), *_havoc(enc, scope), CoValidateStmt(), CoAssume(inv)]
    return [Assert(inv), *_havoc(enc, scope), ValidateStmt(), Assume(inv)]


def _cut(enc: Encoder, inv: Formula) -> list[Stmt]:
    """Ends a path with I: `assert I; assume ?(false)` or `coassert I; coassume ?(true)`."""
    if enc.upper:
        return [CoAssert(inv), CoAssume(Embed(TRUE))]
    return [Assert(inv), Assume(Embed(FALSE))]


def _iter(enc: Encoder, loop: While, then: list[Stmt]) -> Stmt:
    return seq(enc.tick(), [IfBool(loop.cond, seq(enc.encode(loop.body), then), SKIP)])


def encode_park(enc: Encoder, loop: While) -> Stmt:
    inv = loop.annotation.inv
    return seq(_loop_prefix(enc, loop, inv), [_iter(enc, loop, _cut(enc, inv))])


# -----------------------------
# Latticed k-induction
# -----------------------------
def encode_kinduction(enc: Encoder, loop: While) -> Stmt:
    """
    The Park prefix, then k nested unrollings. Each inner level re-asserts I
    (assert for upper bounds, coassert for lower) and the innermost ends in a cut.
    k = 1 is Park induction.
    """
    ann = loop.annotation
    if ann.k < 1:
        raise WrongAnnotation(f"k-induction needs k >= 1, got {ann.k}", ann.span)
    inv = ann.inv
    inner: list[Stmt] = _cut(enc, inv)
    for _ in range(ann.k - 1):
        extend = CoAssert(inv) if not enc.upper else Assert(inv)
        inner = [extend, _iter(enc, loop, inner)]
    return seq(_loop_prefix(enc, loop, inv), [_iter(enc, loop, inner)])


# -----------------------------
# Procedure wrapper
# -----------------------------
def ordered(names, variables: dict[str, Ty]) -> list[str]:
    return [v for v in variables if v in names]


def initial_name(x: str) -> str:
    return f"{x}_init"


def snapshot(f: Formula, variables) -> Formula:
    return subst(f, {x: Var(initial_name(x)) for x in variables})


def encode_proc(
    enc: Encoder,
    c: Cmd,
    pres: list[Formula],
    post: Formula,
    name: str | None = None,
) -> Procedure:
    """
    Wrap an encoded program into a (co)procedure: inputs are the variables of
    pre, outputs the remaining variables of post, all other variables locals.
    A modified input is read through an `x_init` snapshot.
    """
    variables = enc.variables
    pre_vars: set[str] = set()
    for f in pres:
        pre_vars |= free_vars(f)
    post_vars = free_vars(post)
    unknown = (pre_vars | post_vars) - set(variables)
    if unknown:
        raise UnboundVariable(f"undeclared variable {sorted(unknown)[0]} in @pre/@post")

    modified = modified_vars(c)
    inputs_src = ordered(pre_vars, variables)
    snap = [x for x in inputs_src if x in modified]
    inputs = [(initial_name(x) if x in snap else x, variables[x]) for x in inputs_src]
    pres = [subst(f, {x: Var(initial_name(x)) for x in snap}) for f in pres]
    outputs = [(x, variables[x]) for x in ordered(post_vars, variables) if x not in pre_vars or x in snap]
    out_names = {x for x, _ in outputs}

    init: list[Stmt] = []
    for x in variables:
        ty = variables[x]
        if x in snap:
            init.append(VarAssign(x, Var(initial_name(x)), None if x in out_names else ty))
        elif x in pre_vars or x in out_names:
            continue
        else:
            init.append(VarAssign(x, enc.ctx.default_value(ty), ty))
            init.append(CoHavoc((x,)) if enc.upper else Havoc((x,)))

    body = enc.encode_body(c, post)
    kind = proc_kind(enc.calc.direction)
    return Procedure(
        name or enc.stem,
        kind,
        tuple(inputs),
        tuple(outputs),
        tuple(pres),
        (post,),
        seq(init, [body]),
    )


# -----------------------------
# Whole-program translation
# -----------------------------
@dataclass
class Translation:
    program: Program
    cwp_bound: object = None
    notes: list[str] = field(default_factory=list)


def make_encoder(prog: PgclProgram, calc: Calculus, havoc_modified_only: bool = False) -> Encoder:
    ctx = check_domains(prog.domains)
    return Encoder(
        variables=dict(prog.variables),
        calc=calc,
        ctx=ctx,
        fresh=FreshNames(prog.variables),
        havoc_modified_only=havoc_modified_only,
        stem=prog.name,
    )


def bounded_by_one(enc: Encoder, f: Formula, suffix: str) -> Procedure:
    """Coprocedure checking f <= 1 (wlp posts and invariants must be one-bounded)."""
    inputs = tuple((x, enc.variables[x]) for x in ordered(free_vars(f), enc.variables))
    return Procedure(enc.proc_name(suffix), ProcKind.COPROC, inputs, (), (const(1),), (f,), SKIP)


def loop_side_conditions(enc: Encoder, c: Cmd) -> None:
    if enc.calc.kind is not CalcKind.WLP:
        return
    for x in subcommands(c):
        if isinstance(x, While) and isinstance(x.annotation, (Park, KInduction)):
            enc.add(bounded_by_one(enc, x.annotation.inv, "park_invariant_bounded"))


def translate(prog: PgclProgram, havoc_modified_only: bool = False) -> Translation:
    """Translate an annotated pGCL program into a HeyVL program."""
    from . import proof_rules

    if prog.cwp is not None:
        return proof_rules.encode_cwp(prog, havoc_modified_only)
    rule_only = proof_rules.rule_only_loop(prog)
    if rule_only is not None:
        return rule_only
    if prog.calculus is None:
        raise WrongAnnotation("missing @calculus(wp|wlp|ert, lower|upper)")
    if prog.post is None:
        raise WrongAnnotation("missing @post")

    enc = make_encoder(prog, prog.calculus, havoc_modified_only)
    enc.top_level_rule = proof_rules.top_level_rule
    main = encode_proc(enc, prog.body, prog.pres, prog.post)
    if enc.calc.kind is CalcKind.WLP:
        enc.add(bounded_by_one(enc, prog.post, "wlp_post_bounded"))
    loop_side_conditions(enc, prog.body)

    program = Program(domains=list(prog.domains))
    program.add(main)
    for p in enc.procedures:
        program.add(p)
    logger.info("translated %s (%s): %d procedures", prog.name, prog.calculus, len(program.procs))
    return Translation(program)
