# qverify/heyvl.py
"""
HeyVL: verification statements, (co)procedures and the vp transformer.

vp runs backwards over a statement with a post formula. Calls never inline the
callee body; they expand to the modular assert/havoc/validate/assume chain.
"""
from __future__ import annotations

import logging
import re
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import Iterable, Iterator, Mapping, Sequence

from .domains import DomainDecl, TypeContext, check_domains
from .errors import (
    ArityMismatch,
    DirectionMismatch,
    RecursionDetected,
    Span,
    TypeCheckError,
    UnknownProcedure,
    WellFormednessError,
)
from .heylo import (
    INFTY,
    Add,
    Atom,
    CoImpl,
    CoValidate,
    Embed,
    Formula,
    Impl,
    Inf,
    Max,
    Min,
    Mul,
    Sup,
    Validate,
    const,
    max_all,
    min_all,
    subst,
    typecheck,
)
from .terms import (
    BOOL,
    FALSE,
    TRUE,
    UREAL,
    Const,
    Term,
    Ty,
    Var,
    app,
    conj,
    is_subtype,
    negate,
    num,
    subst_term,
    term_vars,
    type_of,
)

logger = logging.getLogger(__name__)


class ProcKind(Enum):
    PROC = "proc"
    COPROC = "coproc"


class Direction(Enum):
    LOWER = "lower"
    UPPER = "upper"


# -----------------------------
# Distributions
# -----------------------------
@dataclass(frozen=True)
class Dist:
    """p1 * <t1> + ... + pn * <tn>"""

    branches: tuple[tuple[Term, Term], ...]


@dataclass(frozen=True)
class Flip:
    p: Term


Rhs = Term | Dist | Flip


# -----------------------------
# Statements
# -----------------------------
class Stmt:
    __slots__ = ()


@dataclass(frozen=True)
class Declare(Stmt):
    name: str
    ty: Ty
    span: Span | None = field(default=None, compare=False, repr=False)


@dataclass(frozen=True)
class VarAssign(Stmt):
    """`var x: T = rhs` when ty is set, `x = rhs` otherwise."""

    name: str
    rhs: Rhs
    ty: Ty | None = None
    span: Span | None = field(default=None, compare=False, repr=False)


@dataclass(frozen=True)
class Call(Stmt):
    outs: tuple[str, ...]
    proc: str
    args: tuple[Term, ...]
    span: Span | None = field(default=None, compare=False, repr=False)


@dataclass(frozen=True)
class Reward(Stmt):
    amount: Term


@dataclass(frozen=True)
class Seq(Stmt):
    stmts: tuple[Stmt, ...]


@dataclass(frozen=True)
class Demonic(Stmt):
    left: Stmt
    right: Stmt


@dataclass(frozen=True)
class Angelic(Stmt):
    left: Stmt
    right: Stmt


@dataclass(frozen=True)
class Assert(Stmt):
    formula: Formula


@dataclass(frozen=True)
class CoAssert(Stmt):
    formula: Formula


@dataclass(frozen=True)
class Assume(Stmt):
    formula: Formula


@dataclass(frozen=True)
class CoAssume(Stmt):
    formula: Formula


@dataclass(frozen=True)
class Havoc(Stmt):
    names: tuple[str, ...]


@dataclass(frozen=True)
class CoHavoc(Stmt):
    names: tuple[str, ...]


@dataclass(frozen=True)
class ValidateStmt(Stmt):
    pass


@dataclass(frozen=True)
class CoValidateStmt(Stmt):
    pass


@dataclass(frozen=True)
class IfBool(Stmt):
    cond: Term
    then: Stmt
    orelse: Stmt


SKIP = Seq(())


def seq(*parts: Stmt | Iterable[Stmt]) -> Stmt:
    """Flattening sequence builder."""
    out: list[Stmt] = []
    for p in parts:
        items = [p] if isinstance(p, Stmt) else list(p)
        for s in items:
            if isinstance(s, Seq):
                out.extend(s.stmts)
            else:
                out.append(s)
    return out[0] if len(out) == 1 else Seq(tuple(out))


def as_block(s: Stmt) -> tuple[Stmt, ...]:
    return s.stmts if isinstance(s, Seq) else (s,)


def dirac(name: str, t: Term, ty: Ty | None = None) -> VarAssign:
    return VarAssign(name, t, ty)


# -----------------------------
# Procedures and programs
# -----------------------------
@dataclass(frozen=True)
class Procedure:
    name: str
    kind: ProcKind
    inputs: tuple[tuple[str, Ty], ...]
    outputs: tuple[tuple[str, Ty], ...]
    pres: tuple[Formula, ...] = ()
    posts: tuple[Formula, ...] = ()
    body: Stmt | None = SKIP
    span: Span | None = field(default=None, compare=False, repr=False)

    @property
    def direction(self) -> Direction:
        return Direction.LOWER if self.kind is ProcKind.PROC else Direction.UPPER

    @property
    def pre(self) -> Formula:
        return self._combine(self.pres)

    @property
    def post(self) -> Formula:
        return self._combine(self.posts)

    def _combine(self, parts: tuple[Formula, ...]) -> Formula:
        if self.kind is ProcKind.PROC:
            return min_all(parts, INFTY)
        return max_all(parts, const(0))

    @property
    def input_names(self) -> list[str]:
        return [n for n, _ in self.inputs]

    @property
    def output_names(self) -> list[str]:
        return [n for n, _ in self.outputs]

    @property
    def params(self) -> dict[str, Ty]:
        return dict(self.inputs + self.outputs)


@dataclass
class Program:
    domains: list[DomainDecl] = field(default_factory=list)
    procs: dict[str, Procedure] = field(default_factory=dict)

    def add(self, proc: Procedure) -> None:
        if proc.name in self.procs:
            raise WellFormednessError(f"procedure {proc.name} declared twice", proc.span)
        self.procs[proc.name] = proc

    def context(self) -> TypeContext:
        return check_domains(self.domains)


@dataclass(frozen=True)
class Vc:
    """pre <= vp(body, post) for procs, pre >= vp(body, post) for coprocs."""

    direction: Direction
    lhs: Formula
    rhs: Formula
    origin: str
    label: str = "vc"
    ctx: TypeContext | None = field(default=None, compare=False, repr=False)

    @property
    def smaller(self) -> Formula:
        return self.lhs if self.direction is Direction.LOWER else self.rhs

    @property
    def larger(self) -> Formula:
        return self.rhs if self.direction is Direction.LOWER else self.lhs

    @property
    def name(self) -> str:
        return self.origin if self.label == "vc" else f"{self.origin}/{self.label}"


# -----------------------------
# Fresh names
# -----------------------------
_SUFFIX = re.compile(r"\$\d+$")


class FreshNames:
    """`base$k` with one counter per instance; reset per file for stable output."""

    def __init__(self, taken: Iterable[str] = ()):
        self.counter = 0
        self.taken = set(taken)

    def __call__(self, base: str) -> str:
        base = _SUFFIX.sub("", base)
        while True:
            self.counter += 1
            cand = f"{base}${self.counter}"
            if cand not in self.taken:
                self.taken.add(cand)
                return cand


# -----------------------------
# Traversals
# -----------------------------
def walk(s: Stmt) -> Iterator[Stmt]:
    yield s
    if isinstance(s, Seq):
        for c in s.stmts:
            yield from walk(c)
    elif isinstance(s, (Demonic, Angelic)):
        yield from walk(s.left)
        yield from walk(s.right)
    elif isinstance(s, IfBool):
        yield from walk(s.then)
        yield from walk(s.orelse)


def declared_types(s: Stmt) -> dict[str, Ty]:
    out: dict[str, Ty] = {}
    for st in walk(s):
        if isinstance(st, Declare) or (isinstance(st, VarAssign) and st.ty is not None):
            prev = out.get(st.name)
            if prev is not None and prev != st.ty:
                raise WellFormednessError(f"variable {st.name} redeclared with type {st.ty}", st.span)
            out[st.name] = st.ty
    return out


def assigned_vars(s: Stmt) -> set[str]:
    out: set[str] = set()
    for st in walk(s):
        if isinstance(st, VarAssign):
            out.add(st.name)
        elif isinstance(st, Call):
            out.update(st.outs)
        elif isinstance(st, (Havoc, CoHavoc)):
            out.update(st.names)
    return out


def proc_context(proc: Procedure, ctx: TypeContext) -> TypeContext:
    local = declared_types(proc.body or SKIP)
    clash = set(local) & set(proc.params)
    if clash:
        raise WellFormednessError(
            f"{proc.name}: local declaration shadows parameter {sorted(clash)[0]}", proc.span
        )
    return ctx.extend({**proc.params, **local})


def _rename_rhs(rhs: Rhs, m: Mapping[str, Term]) -> Rhs:
    if isinstance(rhs, Dist):
        return Dist(tuple((subst_term(p, m), subst_term(t, m)) for p, t in rhs.branches))
    if isinstance(rhs, Flip):
        return Flip(subst_term(rhs.p, m))
    return subst_term(rhs, m)


def rename_stmt(s: Stmt, ren: Mapping[str, str]) -> Stmt:
    """Consistently rename program variables (declarations, targets and uses)."""
    terms = {k: Var(v) for k, v in ren.items()}
    r = lambda n: ren.get(n, n)  # noqa: E731

    def go(st: Stmt) -> Stmt:
        if isinstance(st, Declare):
            return Declare(r(st.name), st.ty, st.span)
        if isinstance(st, VarAssign):
            return VarAssign(r(st.name), _rename_rhs(st.rhs, terms), st.ty, st.span)
        if isinstance(st, Call):
            args = tuple(subst_term(a, terms) for a in st.args)
            return Call(tuple(r(o) for o in st.outs), st.proc, args, st.span)
        if isinstance(st, Reward):
            return Reward(subst_term(st.amount, terms))
        if isinstance(st, Seq):
            return Seq(tuple(go(c) for c in st.stmts))
        if isinstance(st, (Demonic, Angelic)):
            return type(st)(go(st.left), go(st.right))
        if isinstance(st, (Assert, CoAssert, Assume, CoAssume)):
            return type(st)(subst(st.formula, terms))
        if isinstance(st, (Havoc, CoHavoc)):
            return type(st)(tuple(r(n) for n in st.names))
        if isinstance(st, IfBool):
            return IfBool(subst_term(st.cond, terms), go(st.then), go(st.orelse))
        return st

    return go(s)


# -----------------------------
# vp
# -----------------------------
@dataclass
class VpEnv:
    procs: Mapping[str, Procedure]
    ctx: TypeContext
    kind: ProcKind = ProcKind.PROC
    fresh: FreshNames = field(default_factory=FreshNames)
    validate_calls: bool = True


def vp(s: Stmt, post: Formula, env: VpEnv) -> Formula:
    """Verification preexpectation of s with respect to post."""
    extra = declared_types(s)
    if extra:
        env = VpEnv(env.procs, env.ctx.extend(extra), env.kind, env.fresh, env.validate_calls)
    return _vp(s, post, env)


def _vp(s: Stmt, phi: Formula, env: VpEnv) -> Formula:
    if isinstance(s, Seq):
        for st in reversed(s.stmts):
            phi = _vp(st, phi, env)
        return phi
    if isinstance(s, Declare):
        return phi
    if isinstance(s, VarAssign):
        return _vp_assign(s, phi)
    if isinstance(s, Reward):
        return Add(phi, Atom(s.amount))
    if isinstance(s, Demonic):
        return Min(_vp(s.left, phi, env), _vp(s.right, phi, env))
    if isinstance(s, Angelic):
        return Max(_vp(s.left, phi, env), _vp(s.right, phi, env))
    if isinstance(s, Assert):
        return Min(s.formula, phi)
    if isinstance(s, CoAssert):
        return Max(s.formula, phi)
    if isinstance(s, Assume):
        return Impl(s.formula, phi)
    if isinstance(s, CoAssume):
        return CoImpl(s.formula, phi)
    if isinstance(s, Havoc):
        for name in reversed(s.names):
            phi = Inf(name, _var_type(name, env), phi)
        return phi
    if isinstance(s, CoHavoc):
        for name in reversed(s.names):
            phi = Sup(name, _var_type(name, env), phi)
        return phi
    if isinstance(s, ValidateStmt):
        return Validate(phi)
    if isinstance(s, CoValidateStmt):
        return CoValidate(phi)
    if isinstance(s, IfBool):
        then = Impl(Embed(s.cond), _vp(s.then, phi, env))
        orelse = Impl(Embed(negate(s.cond)), _vp(s.orelse, phi, env))
        return Min(then, orelse)
    if isinstance(s, Call):
        callee = env.procs.get(s.proc)
        if callee is None:
            raise UnknownProcedure(f"unknown procedure {s.proc}", s.span)
        encoded = encode_call(s, callee, caller_kind=env.kind, fresh=env.fresh, ctx=env.ctx,
                              validate=env.validate_calls)
        return vp(encoded, phi, env)
    raise TypeError(f"not a statement: {s!r}")


def _var_type(name: str, env: VpEnv) -> Ty:
    ty = env.ctx.var_type(name)
    if ty is None:
        raise TypeCheckError(f"cannot havoc undeclared variable {name}")
    return ty


def _vp_assign(s: VarAssign, phi: Formula) -> Formula:
    rhs = s.rhs
    if isinstance(rhs, Flip):
        one_minus = app(".-", num(1), rhs.p)
        return Add(Mul(Atom(rhs.p), subst(phi, s.name, TRUE)), Mul(Atom(one_minus), subst(phi, s.name, FALSE)))
    if isinstance(rhs, Dist):
        out: Formula | None = None
        for p, t in rhs.branches:
            part = Mul(Atom(p), subst(phi, s.name, t))
            out = part if out is None else Add(out, part)
        return out if out is not None else const(0)
    return subst(phi, s.name, rhs)


# -----------------------------
# Procedure calls
# -----------------------------
def _check_arity(call: Call, callee: Procedure) -> None:
    if len(call.args) != len(callee.inputs):
        raise ArityMismatch(
            f"{callee.name} expects {len(callee.inputs)} arguments, got {len(call.args)}", call.span
        )
    if len(call.outs) != len(callee.outputs):
        raise ArityMismatch(
            f"{callee.name} returns {len(callee.outputs)} values, {len(call.outs)} targets given", call.span
        )


def _direction_check(call: Call, callee: Procedure, caller_kind: ProcKind | None) -> None:
    if caller_kind is not None and caller_kind is not callee.kind:
        raise DirectionMismatch(
            f"a {caller_kind.value} cannot call the {callee.kind.value} {callee.name}", call.span
        )


def encode_call(
    call: Call,
    callee: Procedure,
    caller_kind: ProcKind | None = None,
    fresh: FreshNames | None = None,
    ctx: TypeContext | None = None,
    validate: bool = True,
) -> Stmt:
    """
    Modular call encoding:
      proc:   init; assert pre'; havoc outs; validate; assume post'
      coproc: init; coassert pre'; cohavoc outs; covalidate; coassume post'
    """
    _check_arity(call, callee)
    _direction_check(call, callee, caller_kind)
    fresh = fresh or FreshNames()

    init: list[Stmt] = []
    args = list(call.args)
    outs = set(call.outs)
    for i, ((pname, pty), arg) in enumerate(zip(callee.inputs, args)):
        if term_vars(arg) & outs:
            tmp = fresh(pname)
            init.append(VarAssign(tmp, arg, pty))
            args[i] = Var(tmp)

    in_map = {p: a for (p, _), a in zip(callee.inputs, args)}
    out_map = {o: Var(target) for (o, _), target in zip(callee.outputs, call.outs)}
    pre = subst(callee.pre, in_map)
    post = subst(callee.post, {**in_map, **out_map})

    if callee.kind is ProcKind.PROC:
        chain = [Assert(pre), Havoc(call.outs)]
        if validate:
            chain.append(ValidateStmt())
        chain.append(Assume(post))
    else:
        chain = [CoAssert(pre), CoHavoc(call.outs)]
        if validate:
            chain.append(CoValidateStmt())
        chain.append(CoAssume(post))
    if not call.outs:
        chain = [c for c in chain if not isinstance(c, (Havoc, CoHavoc))]
    return seq(init, chain)


def inline_call(
    call: Call,
    callee: Procedure,
    procs: Mapping[str, Procedure] | None = None,
    fresh: FreshNames | None = None,
    _stack: tuple[str, ...] = (),
) -> Stmt:
    """init; renamed body; return. Nested calls are inlined too."""
    if callee.name in _stack:
        raise RecursionDetected(
            f"inlining {callee.name} recursively ({' -> '.join(_stack + (callee.name,))})", call.span
        )
    _check_arity(call, callee)
    procs = procs or {}
    fresh = fresh or FreshNames()
    stack = _stack + (callee.name,)

    body = callee.body or SKIP
    names = set(callee.params) | set(declared_types(body))
    ren = {n: fresh(n) for n in sorted(names)}
    body = rename_stmt(body, ren)

    init: list[Stmt] = [VarAssign(ren[p], a, ty) for (p, ty), a in zip(callee.inputs, call.args)]
    for o, ty in callee.outputs:
        init.append(Declare(ren[o], ty))
    outs = tuple(ren[o] for o, _ in callee.outputs)
    if outs:
        init.append(Havoc(outs) if callee.kind is ProcKind.PROC else CoHavoc(outs))

    def expand(st: Stmt) -> Stmt:
        if isinstance(st, Call):
            target = procs.get(st.proc)
            if target is None:
                raise UnknownProcedure(f"unknown procedure {st.proc}", st.span)
            return inline_call(st, target, procs, fresh, stack)
        if isinstance(st, Seq):
            return Seq(tuple(expand(c) for c in st.stmts))
        if isinstance(st, (Demonic, Angelic)):
            return type(st)(expand(st.left), expand(st.right))
        if isinstance(st, IfBool):
            return IfBool(st.cond, expand(st.then), expand(st.orelse))
        return st

    ret = [VarAssign(target, Var(ren[o])) for (o, _), target in zip(callee.outputs, call.outs)]
    return seq(init, expand(body), ret)


# -----------------------------
# Well-formedness
# -----------------------------
def _check_term(t: Term, ctx: TypeContext, expected: Ty) -> None:
    ty = type_of(t, ctx)
    if not is_subtype(ty, expected):
        raise TypeCheckError(f"expected {expected}, got {ty}", getattr(t, "span", None))


def _prob_literal(p: Term) -> Fraction | None:
    return Fraction(p.value) if isinstance(p, Const) and p.ty != BOOL else None


def _probability_condition(rhs: Rhs, span: Span | None) -> Term | None:
    """Boolean side condition for non-literal probabilities; literal ones are checked here."""
    if isinstance(rhs, Flip):
        lit = _prob_literal(rhs.p)
        if lit is not None:
            if not 0 <= lit <= 1:
                raise WellFormednessError(f"flip probability {lit} outside [0, 1]", span)
            return None
        return app("<=", rhs.p, num(1))
    if isinstance(rhs, Dist):
        lits = [_prob_literal(p) for p, _ in rhs.branches]
        if all(lit is not None for lit in lits):
            if any(lit < 0 or lit > 1 for lit in lits) or sum(lits) != 1:
                raise WellFormednessError(f"branch probabilities {', '.join(map(str, lits))} do not sum to 1", span)
            return None
        total = rhs.branches[0][0]
        for p, _ in rhs.branches[1:]:
            total = app("+", total, p)
        return conj(app("==", total, num(1)), *(app("<=", p, num(1)) for p, _ in rhs.branches))
    return None


def check_procedure(proc: Procedure, ctx: TypeContext, procs: Mapping[str, Procedure]) -> TypeContext:
    """Type-check a procedure; returns its full variable context."""
    names = [n for n, _ in proc.inputs + proc.outputs]
    if len(set(names)) != len(names):
        raise WellFormednessError(f"{proc.name}: parameter names must be distinct", proc.span)
    in_ctx = ctx.extend(proc.inputs)
    for f in proc.pres:
        typecheck(f, in_ctx)
    full = proc_context(proc, ctx)
    for f in proc.posts:
        typecheck(f, ctx.extend(proc.inputs + proc.outputs))

    written = assigned_vars(proc.body or SKIP)
    for n in proc.input_names:
        if n in written:
            raise WellFormednessError(f"{proc.name}: input {n} is read-only", proc.span)

    for st in walk(proc.body or SKIP):
        _check_stmt(st, full, procs)
    return full


def _check_stmt(st: Stmt, ctx: TypeContext, procs: Mapping[str, Procedure]) -> None:
    if isinstance(st, VarAssign):
        target = ctx.var_type(st.name)
        if target is None:
            raise TypeCheckError(f"assignment to undeclared variable {st.name}", st.span)
        rhs = st.rhs
        if isinstance(rhs, Flip):
            _check_term(rhs.p, ctx, UREAL)
            if target != BOOL:
                raise TypeCheckError(f"flip assigns a Bool, {st.name} has type {target}", st.span)
        elif isinstance(rhs, Dist):
            for p, t in rhs.branches:
                _check_term(p, ctx, UREAL)
                _check_term(t, ctx, target)
        else:
            _check_term(rhs, ctx, target)
    elif isinstance(st, Call):
        callee = procs.get(st.proc)
        if callee is None:
            raise UnknownProcedure(f"unknown procedure {st.proc}", st.span)
        _check_arity(st, callee)
        for (pname, pty), a in zip(callee.inputs, st.args):
            _check_term(a, ctx, pty)
        for (oname, oty), target in zip(callee.outputs, st.outs):
            tty = ctx.var_type(target)
            if tty is None:
                raise TypeCheckError(f"call target {target} is undeclared", st.span)
            if not is_subtype(oty, tty):
                raise TypeCheckError(f"{st.proc} returns {oty} into {target}: {tty}", st.span)
    elif isinstance(st, Reward):
        _check_term(st.amount, ctx, UREAL)
    elif isinstance(st, (Assert, CoAssert, Assume, CoAssume)):
        typecheck(st.formula, ctx)
    elif isinstance(st, (Havoc, CoHavoc)):
        for n in st.names:
            if ctx.var_type(n) is None:
                raise TypeCheckError(f"havoc of undeclared variable {n}")
    elif isinstance(st, IfBool):
        _check_term(st.cond, ctx, BOOL)


# -----------------------------
# Probability side conditions
# -----------------------------
def probability_obligations(body: Stmt) -> list[Term]:
    """
    Side conditions for distributions with non-literal probabilities.

    A forward pass tracks Dirac assignments so a condition mentions the values
    its variables hold at the sampling point; variables with unknown values stay
    free and are therefore universally quantified.
    """
    out: list[Term] = []

    def forward(st: Stmt, env: dict[str, Term]) -> dict[str, Term]:
        if isinstance(st, Seq):
            for c in st.stmts:
                env = forward(c, env)
            return env
        if isinstance(st, VarAssign):
            cond = _probability_condition(st.rhs, st.span)
            if cond is not None:
                out.append(subst_term(cond, env))
            env = _kill(env, st.name)
            if not isinstance(st.rhs, (Dist, Flip)):
                env[st.name] = subst_term(st.rhs, env)
            return env
        if isinstance(st, Declare):
            return _kill(env, st.name)
        if isinstance(st, Call):
            return _kill(env, *st.outs)
        if isinstance(st, (Havoc, CoHavoc)):
            return _kill(env, *st.names)
        if isinstance(st, (Demonic, Angelic, IfBool)):
            left = st.then if isinstance(st, IfBool) else st.left
            right = st.orelse if isinstance(st, IfBool) else st.right
            a, b = forward(left, dict(env)), forward(right, dict(env))
            return {k: v for k, v in a.items() if b.get(k) == v}
        return env

    forward(body, {})
    return out


def _kill(env: dict[str, Term], *names: str) -> dict[str, Term]:
    dead = set(names)
    return {k: v for k, v in env.items() if k not in dead and not (term_vars(v) & dead)}


# -----------------------------
# VC generation
# -----------------------------
def vcgen(program: Program, validate_calls: bool = True) -> list[Vc]:
    """One Vc per (co)procedure, plus Boolean side conditions for symbolic probabilities."""
    ctx = program.context()
    vcs: list[Vc] = []
    for proc in program.procs.values():
        full = check_procedure(proc, ctx, program.procs)
        if proc.body is None:
            # declaration only; trusted
            continue
        env = VpEnv(program.procs, full, proc.kind, FreshNames(full.variables), validate_calls)
        rhs = vp(proc.body, proc.post, env)
        vcs.append(Vc(proc.direction, proc.pre, rhs, proc.name, ctx=env.ctx))
        for i, cond in enumerate(probability_obligations(proc.body)):
            vcs.append(Vc(Direction.LOWER, INFTY, Embed(cond), proc.name, f"probability{i}", ctx=full))
        logger.debug("generated vc for %s %s", proc.kind.value, proc.name)
    return vcs


def procedures_by_name(procs: Sequence[Procedure]) -> dict[str, Procedure]:
    return {p.name: p for p in procs}
