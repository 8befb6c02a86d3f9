# qverify/parser.py
from __future__ import annotations

import logging
from fractions import Fraction
from functools import lru_cache
from pathlib import Path

from lark import Lark, Transformer, v_args
from lark.exceptions import UnexpectedInput, VisitError

from .domains import Axiom, DomainDecl, FuncDecl
from .errors import ParseError, QVerifyError, Span, TypeCheckError, WrongAnnotation
from .grammar import GRAMMAR
from .heylo import (
    INFTY,
    Add,
    CoEmbed,
    CoImpl,
    CoNeg,
    CoValidate,
    Embed,
    Formula,
    Impl,
    Inf,
    Max,
    Min,
    Mul,
    Neg,
    Sup,
    Validate,
    lift,
)
from .heyvl import (
    Angelic,
    Assert,
    Assume,
    Call,
    CoAssert,
    CoAssume,
    CoHavoc,
    CoValidateStmt,
    Declare,
    Demonic,
    Dist,
    Flip,
    Havoc,
    IfBool,
    Procedure,
    ProcKind,
    Program,
    Reward,
    Seq,
    SKIP,
    Stmt,
    ValidateStmt,
    VarAssign,
)
from .pgcl import (
    AstRule,
    Block,
    Calculus,
    CalcKind,
    CwpSpec,
    Diverge,
    Ite,
    KInduction,
    NdChoice,
    Observe,
    OmegaInvariant,
    Ost,
    Park,
    PastRule,
    PChoice,
    PgclProgram,
    RuleAnnotation,
    Skip,
    Tick,
    While,
    Assign,
    block,
)
from .heyvl import Direction
from .terms import BUILTIN_TYPES, FALSE, TRUE, App, Const, Term, Ty, Var, iverson, num

logger = logging.getLogger(__name__)


@lru_cache(maxsize=None)
def _lark() -> Lark:
    return Lark(
        GRAMMAR,
        start=["heyvl", "pgcl", "formula"],
        parser="earley",
        lexer="basic",
        propagate_positions=True,
        maybe_placeholders=True,
    )


def _span(meta) -> Span | None:
    if meta is None or getattr(meta, "empty", True):
        return None
    return Span(meta.line, meta.column)


def _term(x: Term | Formula, what: str = "operand") -> Term:
    if isinstance(x, Formula):
        raise ParseError(f"a quantitative formula cannot be used as {what}; a term is required")
    return x


def _const_number(x: Term) -> Fraction | None:
    if isinstance(x, Const) and not isinstance(x.value, bool):
        return Fraction(x.value)
    return None


def _ty(name: str) -> Ty:
    return BUILTIN_TYPES.get(name) or Ty(name, user=True)


# -----------------------------
# Tree -> AST
# -----------------------------
@v_args(inline=True)
class ToAst(Transformer):
    """Builds terms where possible and lifts to formulas only when a formula construct demands it."""

    def __init__(self):
        super().__init__()
        self.type_uses: list[tuple[Ty, Span | None]] = []

    # ---- expressions
    @v_args(meta=True, inline=True)
    def number(self, meta, tok):
        return num(Fraction(str(tok)))

    def true(self):
        return TRUE

    def false(self):
        return FALSE

    def infty(self):
        return INFTY

    @v_args(meta=True, inline=True)
    def var(self, meta, tok):
        return Var(str(tok), _span(meta))

    @v_args(meta=True, inline=True)
    def apply(self, meta, name, args):
        return App(str(name), tuple(_term(a, "a function argument") for a in (args or ())), _span(meta))

    def args(self, *items):
        return list(items)

    def _arith(self, op, a, b, formula_ctor=None):
        if formula_ctor is not None and (isinstance(a, Formula) or isinstance(b, Formula)):
            return formula_ctor(lift(a), lift(b))
        return App(op, (_term(a), _term(b)))

    def add(self, a, b):
        return self._arith("+", a, b, Add)

    def mul(self, a, b):
        return self._arith("*", a, b, Mul)

    def sub(self, a, b):
        return self._arith("-", a, b)

    def monus(self, a, b):
        return self._arith(".-", a, b)

    def div(self, a, b):
        x, y = _const_number(_term(a)), _const_number(_term(b))
        if x is not None and y is not None and y != 0:
            return num(x / y)
        return App("/", (a, b))

    def neg(self, a):
        x = _const_number(_term(a))
        if x is not None:
            return num(-x)
        return App("neg", (a,))

    def lt(self, a, b):
        return self._arith("<", a, b)

    def le(self, a, b):
        return self._arith("<=", a, b)

    def gt(self, a, b):
        return self._arith(">", a, b)

    def ge(self, a, b):
        return self._arith(">=", a, b)

    def eq(self, a, b):
        return self._arith("==", a, b)

    def ne(self, a, b):
        return self._arith("!=", a, b)

    def and_(self, a, b):
        return self._arith("&&", a, b)

    def or_(self, a, b):
        return self._arith("||", a, b)

    def not_(self, a):
        return App("!", (_term(a),))

    def ite(self, c, a, b):
        return App("ite", (_term(c), _term(a), _term(b)))

    def iverson(self, b):
        return iverson(_term(b, "an Iverson bracket"))

    def embed(self, b):
        return Embed(_term(b, "an embedded condition"))

    def coembed(self, b):
        return CoEmbed(_term(b, "an embedded condition"))

    def validate(self, a):
        return Validate(lift(a))

    def covalidate(self, a):
        return CoValidate(lift(a))

    def neg_formula(self, a):
        return Neg(lift(a))

    def coneg_formula(self, a):
        return CoNeg(lift(a))

    def max(self, a, b):
        return Max(lift(a), lift(b))

    def min(self, a, b):
        return Min(lift(a), lift(b))

    def impl(self, a, b):
        return Impl(lift(a), lift(b))

    def coimpl(self, a, b):
        return CoImpl(lift(a), lift(b))

    def quant_kind(self, tok):
        return str(tok)

    @v_args(meta=True, inline=True)
    def quant(self, meta, kind, name, ty, body):
        ctor = Inf if kind == "inf" else Sup
        return ctor(str(name), ty, lift(body), _span(meta))

    def formula(self, e):
        return e

    # ---- types and parameters
    @v_args(meta=True, inline=True)
    def type_name(self, meta, tok):
        ty = _ty(str(tok))
        self.type_uses.append((ty, _span(meta)))
        return ty

    def param(self, name, ty):
        return (str(name), ty)

    def params(self, *ps):
        return tuple(ps)

    def names(self, *toks):
        return tuple(str(t) for t in toks)

    # ---- domains
    @v_args(meta=True, inline=True)
    def func_decl(self, meta, name, params, result):
        return FuncDecl(str(name), params or (), result, _span(meta))

    def forall(self, params):
        return params

    @v_args(meta=True, inline=True)
    def axiom_decl(self, meta, name, binders, body):
        return Axiom(str(name), binders or (), _term(body, "an axiom"), _span(meta))

    def default_decl(self, e):
        return ("default", _term(e, "a default value"))

    @v_args(meta=True, inline=True)
    def domain(self, meta, name, *items):
        funcs = tuple(i for i in items if isinstance(i, FuncDecl))
        axioms = tuple(i for i in items if isinstance(i, Axiom))
        defaults = [i[1] for i in items if isinstance(i, tuple)]
        if len(defaults) > 1:
            raise ParseError(f"domain {name} declares more than one default", _span(meta))
        return DomainDecl(str(name), funcs, axioms, defaults[0] if defaults else None, _span(meta))

    # ---- statements
    def rhs(self, e):
        return e

    def flip(self, p):
        return Flip(_term(p, "a probability"))

    def dist_branch(self, p, t):
        return (_term(p, "a probability"), _term(t, "a distribution value"))

    def dist(self, *branches):
        return Dist(tuple(branches))

    @v_args(meta=True, inline=True)
    def var_decl(self, meta, name, ty, rhs):
        if rhs is None:
            return Declare(str(name), ty, _span(meta))
        return VarAssign(str(name), _rhs(rhs), ty, _span(meta))

    @v_args(meta=True, inline=True)
    def assign(self, meta, names, rhs):
        if len(names) == 1:
            return VarAssign(names[0], _rhs(rhs), None, _span(meta))
        if not isinstance(rhs, App):
            raise ParseError("multiple assignment targets need a procedure call", _span(meta))
        return Call(names, rhs.func, rhs.args, _span(meta))

    @v_args(meta=True, inline=True)
    def call_stmt(self, meta, name, args):
        return Call((), str(name), tuple(_term(a) for a in (args or ())), _span(meta))

    def reward(self, e):
        return Reward(_term(e, "a reward"))

    def assert_stmt(self, e):
        return Assert(lift(e))

    def coassert_stmt(self, e):
        return CoAssert(lift(e))

    def assume_stmt(self, e):
        return Assume(lift(e))

    def coassume_stmt(self, e):
        return CoAssume(lift(e))

    def havoc(self, names):
        return Havoc(names)

    def cohavoc(self, names):
        return CoHavoc(names)

    def validate_stmt(self):
        return ValidateStmt()

    def covalidate_stmt(self):
        return CoValidateStmt()

    def block(self, *stmts):
        return Seq(tuple(stmts))

    def if_bool(self, cond, then, orelse):
        return IfBool(_term(cond, "a condition"), then, orelse if orelse is not None else SKIP)

    def demonic(self, a, b):
        return Demonic(a, b)

    def angelic(self, a, b):
        return Angelic(a, b)

    def proc_kind(self, tok):
        return ProcKind(str(tok))

    def pre_clause(self, e):
        return ("pre", lift(e))

    def post_clause(self, e):
        return ("post", lift(e))

    @v_args(meta=True, inline=True)
    def proc_decl(self, meta, kind, name, inputs, outputs, *rest):
        body = rest[-1] if rest and (rest[-1] is None or isinstance(rest[-1], Stmt)) else None
        clauses = [r for r in rest if isinstance(r, tuple)]
        return Procedure(
            str(name),
            kind,
            inputs or (),
            outputs or (),
            tuple(f for k, f in clauses if k == "pre"),
            tuple(f for k, f in clauses if k == "post"),
            body,
            _span(meta),
        )

    def heyvl(self, *items):
        return list(items)

    # ---- pGCL
    @v_args(meta=True, inline=True)
    def pvar_decl(self, meta, name, ty):
        return ("var", str(name), ty, _span(meta))

    def annotation_name(self, tok):
        return str(tok)

    @v_args(meta=True, inline=True)
    def annotation(self, meta, name, args):
        return _RawAnnotation(str(name), list(args or ()), _span(meta))

    @v_args(meta=True, inline=True)
    def passign(self, meta, name, value):
        return Assign(str(name), _term(value, "an assigned value"), _span(meta))

    def pskip(self):
        return Skip()

    def pdiverge(self):
        return Diverge()

    def observe(self, b):
        return Observe(_term(b, "an observed condition"))

    def tick(self, e):
        return Tick(_term(e, "a tick amount"))

    def pchoice(self, left, p, right):
        return PChoice(left, _term(p, "a probability"), right)

    def ndchoice(self, left, right):
        return NdChoice(left, right)

    def pif(self, cond, then, orelse):
        return Ite(_term(cond, "a condition"), then, orelse if orelse is not None else Block(()))

    @v_args(meta=True, inline=True)
    def pwhile(self, meta, cond, body):
        return While(_term(cond, "a loop guard"), body, None, _span(meta))

    def pblock(self, *items):
        return Block(tuple(_attach_annotations(items)))

    def pgcl(self, *items):
        return list(items)


def _rhs(x):
    if isinstance(x, (Dist, Flip)):
        return x
    return _term(x, "an assigned value")


class _RawAnnotation:
    def __init__(self, name: str, args: list, span: Span | None):
        self.name, self.args, self.span = name, args, span


_LOOP_RULES = {"park", "k_induction", "omega", "ost", "ast", "past"}


def _attach_annotations(items) -> list:
    """Loop annotations attach to the next while; other items pass through."""
    out: list = []
    pending: _RawAnnotation | None = None
    for it in items:
        if isinstance(it, _RawAnnotation) and it.name in _LOOP_RULES:
            if pending is not None:
                raise WrongAnnotation(f"two loop annotations before one loop (@{pending.name}, @{it.name})", it.span)
            pending = it
            continue
        if isinstance(it, While):
            if pending is None:
                raise WrongAnnotation("loop without a proof-rule annotation", it.span)
            it = While(it.cond, it.body, _loop_annotation(pending), it.span)
            pending = None
        elif isinstance(it, _RawAnnotation):
            raise WrongAnnotation(f"@{it.name} is only allowed at the top level", it.span)
        elif pending is not None:
            raise WrongAnnotation(f"@{pending.name} must be followed by a while loop", pending.span)
        out.append(it)
    if pending is not None:
        raise WrongAnnotation(f"@{pending.name} must be followed by a while loop", pending.span)
    return out


def _rational(x, what: str, span: Span | None) -> Fraction:
    v = _const_number(x) if isinstance(x, Term) else None
    if v is None:
        raise WrongAnnotation(f"{what} must be a numeric literal", span)
    return v


def _arity(a: _RawAnnotation, *allowed: int) -> None:
    if len(a.args) not in allowed:
        expected = " or ".join(map(str, allowed))
        raise WrongAnnotation(f"@{a.name} takes {expected} arguments, got {len(a.args)}", a.span)


def _loop_annotation(a: _RawAnnotation) -> RuleAnnotation:
    args = a.args
    if a.name == "park":
        _arity(a, 1)
        return Park(lift(args[0]), a.span)
    if a.name == "k_induction":
        _arity(a, 2)
        k = _rational(args[0], "k", a.span)
        if k.denominator != 1 or k < 1:
            raise WrongAnnotation(f"k must be a positive integer, got {k}", a.span)
        return KInduction(int(k), lift(args[1]), a.span)
    if a.name == "omega":
        _arity(a, 2)
        if not isinstance(args[0], Var):
            raise WrongAnnotation("@omega expects the index variable first", a.span)
        return OmegaInvariant(args[0].name, lift(args[1]), a.span)
    if a.name == "ost":
        _arity(a, 2, 3)
        past = _term(args[2], "a runtime invariant") if len(args) == 3 else None
        return Ost(_term(args[0], "an OST invariant"), _rational(args[1], "c", a.span), past, a.span)
    if a.name == "ast":
        _arity(a, 4)
        inv, variant, prob, dec = (_term(x, "an AST rule argument") for x in args)
        return AstRule(inv, variant, prob, dec, a.span)
    _arity(a, 3)
    return PastRule(
        _term(args[0], "a PAST invariant"),
        _rational(args[1], "eps", a.span),
        _rational(args[2], "K", a.span),
        a.span,
    )


# -----------------------------
# Post-parse resolution
# -----------------------------
def _resolve_calls(s: Stmt, procs: set[str]) -> Stmt:
    """`x = f(e)` and `var x: T = f(e)` become calls when f names a procedure."""
    if isinstance(s, VarAssign) and isinstance(s.rhs, App) and s.rhs.func in procs:
        call = Call((s.name,), s.rhs.func, s.rhs.args, s.span)
        if s.ty is not None:
            return Seq((Declare(s.name, s.ty, s.span), call))
        return call
    if isinstance(s, Seq):
        out: list[Stmt] = []
        for c in s.stmts:
            r = _resolve_calls(c, procs)
            out.extend(r.stmts if isinstance(r, Seq) and not isinstance(c, Seq) else (r,))
        return Seq(tuple(out))
    if isinstance(s, (Demonic, Angelic)):
        return type(s)(_resolve_calls(s.left, procs), _resolve_calls(s.right, procs))
    if isinstance(s, IfBool):
        return IfBool(s.cond, _resolve_calls(s.then, procs), _resolve_calls(s.orelse, procs))
    return s


def _check_types(uses, domains: list[DomainDecl]) -> None:
    known = {d.name for d in domains}
    for ty, span in uses:
        if ty.user and ty.name not in known:
            raise TypeCheckError(f"unknown type {ty.name}", span)


# -----------------------------
# Entry points
# -----------------------------
def _parse(text: str, start: str, source: str):
    try:
        tree = _lark().parse(text, start=start)
    except UnexpectedInput as e:
        raise ParseError(_describe(e, text), Span(e.line, e.column)) from None
    builder = ToAst()
    try:
        return builder.transform(tree), builder
    except VisitError as e:
        if isinstance(e.orig_exc, QVerifyError):
            err = e.orig_exc
            if err.span is None and getattr(e.obj, "meta", None) is not None:
                err.span = _span(e.obj.meta)
            raise err from None
        raise


def _describe(e: UnexpectedInput, text: str) -> str:
    context = e.get_context(text, span=30).strip().splitlines()
    found = context[0] if context else ""
    return f"unexpected input near {found!r}"


def parse_formula(text: str) -> Formula:
    out, _ = _parse(text, "formula", "<formula>")
    return lift(out)


def parse_term(text: str) -> Term:
    out, _ = _parse(text, "formula", "<term>")
    return _term(out, "a term")


def parse_heyvl(text: str, source: str = "<heyvl>") -> Program:
    items, builder = _parse(text, "heyvl", source)
    domains = [i for i in items if isinstance(i, DomainDecl)]
    _check_types(builder.type_uses, domains)
    procs = [i for i in items if isinstance(i, Procedure)]
    names = {p.name for p in procs}
    program = Program(domains=domains)
    for p in procs:
        body = _resolve_calls(p.body, names) if p.body is not None else None
        program.add(Procedure(p.name, p.kind, p.inputs, p.outputs, p.pres, p.posts, body, p.span))
    logger.debug("parsed %s: %d domains, %d procedures", source, len(domains), len(procs))
    return program


def parse_pgcl(text: str, name: str = "main") -> PgclProgram:
    items, builder = _parse(text, "pgcl", name)
    domains = [i for i in items if isinstance(i, DomainDecl)]
    _check_types(builder.type_uses, domains)

    variables: dict = {}
    prog = PgclProgram(variables=variables, body=Block(()), domains=domains, name=name)
    rest = []
    for it in items:
        if isinstance(it, DomainDecl):
            continue
        if isinstance(it, tuple) and it[0] == "var":
            _, vname, ty, span = it
            if vname in variables:
                raise ParseError(f"variable {vname} declared twice", span)
            variables[vname] = ty
            continue
        if isinstance(it, _RawAnnotation) and it.name not in _LOOP_RULES:
            _program_annotation(prog, it)
            continue
        rest.append(it)
    cmds = _attach_annotations(rest)
    prog.body = block(*cmds) if cmds else Block(())
    return prog


def _program_annotation(prog: PgclProgram, a: _RawAnnotation) -> None:
    if a.name == "pre":
        _arity(a, 1)
        prog.pres.append(lift(a.args[0]))
    elif a.name == "post":
        _arity(a, 1)
        if prog.post is not None:
            raise WrongAnnotation("@post given twice", a.span)
        prog.post = lift(a.args[0])
    elif a.name == "calculus":
        _arity(a, 2)
        kind, direction = (x.name if isinstance(x, Var) else None for x in a.args)
        try:
            prog.calculus = Calculus(CalcKind(kind), Direction(direction))
        except ValueError:
            raise WrongAnnotation("@calculus expects (wp|wlp|ert, lower|upper)", a.span) from None
    elif a.name == "cwp":
        _arity(a, 2, 3)
        normalizer = CalcKind.WLP
        if len(a.args) == 3:
            if not (isinstance(a.args[2], Var) and a.args[2].name in ("wp", "wlp")):
                raise WrongAnnotation("the cwp normaliser is wp or wlp", a.span)
            normalizer = CalcKind(a.args[2].name)
        prog.cwp = CwpSpec(
            _rational(a.args[0], "the wp bound", a.span),
            _rational(a.args[1], "the normalising bound", a.span),
            normalizer,
        )
    else:
        raise WrongAnnotation(f"unknown annotation @{a.name}", a.span)


def load_file(path: str | Path) -> Program | PgclProgram:
    path = Path(path)
    text = path.read_text(encoding="utf-8")
    if path.suffix == ".pgcl":
        return parse_pgcl(text, name=path.stem)
    return parse_heyvl(text, source=str(path))
