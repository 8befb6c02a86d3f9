# qverify/smt.py
"""
Lowering of verification conditions to SMT-LIB 2.

A Vc `smaller <= larger` is valid iff the script asserting its negation is
unsat. Extended reals are encoded either as (real, is_infinite) pairs or as
values of an `EUReal` datatype; both encodings expose the same operations.

Every compound formula node becomes a `define-fun`, parameterised by the
quantified variables in scope, so shared subformulas are emitted once.
"""
from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Sequence

from .config import DEFAULT_UNFOLD_DEPTH
from .domains import DomainDecl, TypeContext
from .errors import UnboundVariable, UnsupportedConstruct
from .ereal import ZERO
from .heylo import (
    Add,
    Atom,
    CoEmbed,
    CoImpl,
    CoNeg,
    CoValidate,
    Embed,
    Formula,
    Impl,
    Inf,
    Infinity,
    Max,
    Min,
    Mul,
    Neg,
    Sup,
    Validate,
    const_value,
    free_vars,
    subst,
)
from .heyvl import Vc
from .terms import (
    BOOL,
    EUREAL,
    FALSE,
    INT,
    REAL,
    TRUE,
    UINT,
    UREAL,
    App,
    Const,
    Term,
    Ty,
    Var,
    num,
    subst_term,
    term_vars,
)

logger = logging.getLogger(__name__)


Val = tuple[str, ...] | str


# -----------------------------
# SMT-LIB text helpers
# -----------------------------
def symbol(name: str, suffix: str = "") -> str:
    return f"|{name}{suffix}|"


def unquote(sym: str) -> str:
    return sym[1:-1] if sym.startswith("|") and sym.endswith("|") else sym


def int_literal(n: int) -> str:
    return str(n) if n >= 0 else f"(- {-n})"


def real_literal(q: int | Fraction) -> str:
    q = Fraction(q)
    mag = abs(q)
    text = f"{mag.numerator}.0" if mag.denominator == 1 else f"(/ {mag.numerator}.0 {mag.denominator}.0)"
    return f"(- {text})" if q < 0 else text


def smt_and(parts: Sequence[str]) -> str:
    parts = [p for p in parts if p != "true"]
    if "false" in parts:
        return "false"
    if not parts:
        return "true"
    return parts[0] if len(parts) == 1 else f"(and {' '.join(parts)})"


def smt_or(parts: Sequence[str]) -> str:
    parts = [p for p in parts if p != "false"]
    if "true" in parts:
        return "true"
    if not parts:
        return "false"
    return parts[0] if len(parts) == 1 else f"(or {' '.join(parts)})"


def smt_not(p: str) -> str:
    if p == "true":
        return "false"
    if p == "false":
        return "true"
    return f"(not {p})"


def smt_implies(hyp: str, concl: str) -> str:
    if hyp == "true":
        return concl
    return f"(=> {hyp} {concl})"


# -----------------------------
# Extended reals
# -----------------------------
class ERealOps:
    """Shared derived operations; subclasses provide the primitives."""

    name: str
    components: tuple[tuple[str, str], ...]

    def preamble(self) -> list[str]:
        return []

    # primitives: split, join, fin, inf, is_inf, is_zero, leq, add, mul, ite, from_bool, nonneg

    def zero(self) -> Val:
        return self.fin("0.0")

    def min(self, a: Val, b: Val) -> Val:
        return self.ite(self.leq(a, b), a, b)

    def max(self, a: Val, b: Val) -> Val:
        return self.ite(self.leq(a, b), b, a)

    def impl(self, a: Val, b: Val) -> Val:
        return self.ite(self.leq(a, b), self.inf(), b)

    def coimpl(self, a: Val, b: Val) -> Val:
        return self.ite(self.leq(b, a), self.zero(), b)

    def neg(self, a: Val) -> Val:
        return self.from_bool(self.is_zero(a))

    def coneg(self, a: Val) -> Val:
        return self.from_bool(smt_not(self.is_inf(a)))

    def validate(self, a: Val) -> Val:
        return self.from_bool(self.is_inf(a))

    def covalidate(self, a: Val) -> Val:
        return self.from_bool(smt_not(self.is_zero(a)))


class PairOps(ERealOps):
    """(r, i): infinity when i holds, otherwise the non-negative real r."""

    name = "pair"
    components = (("!r", "Real"), ("!i", "Bool"))

    def split(self, v: Val) -> tuple[str, ...]:
        return tuple(v)

    def join(self, parts: Sequence[str]) -> Val:
        return tuple(parts)

    def fin(self, r: str) -> Val:
        return (r, "false")

    def inf(self) -> Val:
        return ("0.0", "true")

    def is_inf(self, v: Val) -> str:
        return v[1]

    def is_zero(self, v: Val) -> str:
        return smt_and([smt_not(v[1]), f"(= {v[0]} 0.0)"])

    def leq(self, a: Val, b: Val) -> str:
        return smt_or([b[1], smt_and([smt_not(a[1]), f"(<= {a[0]} {b[0]})"])])

    def add(self, a: Val, b: Val) -> Val:
        return (f"(+ {a[0]} {b[0]})", smt_or([a[1], b[1]]))

    def mul(self, a: Val, b: Val) -> Val:
        # 0 * inf = 0
        is_inf = smt_or([
            smt_and([a[1], smt_or([b[1], f"(> {b[0]} 0.0)"])]),
            smt_and([b[1], smt_or([a[1], f"(> {a[0]} 0.0)"])]),
        ])
        either = smt_or([a[1], b[1]])
        real = f"(* {a[0]} {b[0]})" if either == "false" else f"(ite {either} 0.0 (* {a[0]} {b[0]}))"
        return (real, is_inf)

    def ite(self, c: str, a: Val, b: Val) -> Val:
        if c == "true":
            return a
        if c == "false":
            return b
        return tuple(x if x == y else f"(ite {c} {x} {y})" for x, y in zip(a, b))

    def from_bool(self, b: str) -> Val:
        return ("0.0", b)

    def nonneg(self, v: Val) -> str:
        return f"(>= {v[0]} 0.0)"


_DATATYPE_PREAMBLE = [
    "(declare-datatypes ((EUReal 0)) (((ereal_fin (ereal_val Real)) (ereal_inf))))",
    "(define-fun ereal_is_zero ((a EUReal)) Bool (and ((_ is ereal_fin) a) (= (ereal_val a) 0.0)))",
    "(define-fun ereal_leq ((a EUReal) (b EUReal)) Bool "
    "(or ((_ is ereal_inf) b) (and ((_ is ereal_fin) a) (<= (ereal_val a) (ereal_val b)))))",
    "(define-fun ereal_add ((a EUReal) (b EUReal)) EUReal "
    "(ite (or ((_ is ereal_inf) a) ((_ is ereal_inf) b)) ereal_inf (ereal_fin (+ (ereal_val a) (ereal_val b)))))",
    "(define-fun ereal_mul ((a EUReal) (b EUReal)) EUReal "
    "(ite (or (ereal_is_zero a) (ereal_is_zero b)) (ereal_fin 0.0) "
    "(ite (or ((_ is ereal_inf) a) ((_ is ereal_inf) b)) ereal_inf (ereal_fin (* (ereal_val a) (ereal_val b))))))",
]


class DatatypeOps(ERealOps):
    """Values of `(declare-datatypes ((EUReal 0)) ...)` with helper functions."""

    name = "datatype"
    components = (("", "EUReal"),)

    def preamble(self) -> list[str]:
        return list(_DATATYPE_PREAMBLE)

    def split(self, v: Val) -> tuple[str, ...]:
        return (v,)

    def join(self, parts: Sequence[str]) -> Val:
        return parts[0]

    def fin(self, r: str) -> Val:
        return f"(ereal_fin {r})"

    def inf(self) -> Val:
        return "ereal_inf"

    def is_inf(self, v: Val) -> str:
        return f"((_ is ereal_inf) {v})"

    def is_zero(self, v: Val) -> str:
        return f"(ereal_is_zero {v})"

    def leq(self, a: Val, b: Val) -> str:
        return f"(ereal_leq {a} {b})"

    def add(self, a: Val, b: Val) -> Val:
        return f"(ereal_add {a} {b})"

    def mul(self, a: Val, b: Val) -> Val:
        return f"(ereal_mul {a} {b})"

    def ite(self, c: str, a: Val, b: Val) -> Val:
        if c == "true":
            return a
        if c == "false":
            return b
        return a if a == b else f"(ite {c} {a} {b})"

    def from_bool(self, b: str) -> Val:
        return f"(ite {b} ereal_inf (ereal_fin 0.0))"

    def nonneg(self, v: Val) -> str:
        return f"(or ((_ is ereal_inf) {v}) (>= (ereal_val {v}) 0.0))"


def ops_for(encoding: str) -> ERealOps:
    if encoding == "pair":
        return PairOps()
    if encoding == "datatype":
        return DatatypeOps()
    raise ValueError(f"unknown EReal encoding {encoding!r}")


# -----------------------------
# Scripts
# -----------------------------
HEADER = ["(set-option :produce-models true)", "(set-logic ALL)"]


@dataclass
class SmtScript:
    """A self-contained query. `model_symbols` maps SMT symbols to program variables."""

    name: str
    declarations: list[str] = field(default_factory=list)
    definitions: list[str] = field(default_factory=list)
    query: list[str] = field(default_factory=list)
    model_symbols: dict[str, str] = field(default_factory=dict)
    encoding: str = "pair"

    def body(self) -> str:
        lines = [f"; {self.name}", *HEADER, *self.declarations, *self.definitions, *self.query]
        return "\n".join(lines) + "\n"

    @property
    def commands(self) -> list[str]:
        out = ["(check-sat)"]
        if self.model_symbols:
            out.append(f"(get-value ({' '.join(self.model_symbols)}))")
        return out

    def text(self) -> str:
        return self.body() + "\n".join(self.commands) + "\n"


# -----------------------------
# Lowering
# -----------------------------
class _Lowering:
    def __init__(self, ctx: TypeContext, ops: ERealOps):
        self.ctx = ctx
        self.ops = ops
        self.decls: list[str] = []
        self.defs: list[str] = []
        self.hyps: list[str] = []
        self.consts: dict[str, Ty] = {}
        self.counter = itertools.count()
        self.memo: dict[tuple, Val] = {}
        self.keep: list[Formula] = []

    # ---- sorts and binders ----
    def sort(self, ty: Ty) -> str:
        if ty == BOOL:
            return "Bool"
        if ty in (UINT, INT):
            return "Int"
        if ty in (UREAL, REAL):
            return "Real"
        if ty.user:
            return symbol(ty.name)
        raise UnsupportedConstruct(f"no SMT sort for {ty} in this position")

    def binder_decls(self, name: str, ty: Ty) -> list[str]:
        if ty == EUREAL:
            return [f"({symbol(name, sfx)} {sort})" for sfx, sort in self.ops.components]
        return [f"({symbol(name)} {self.sort(ty)})"]

    def binder_sorts(self, ty: Ty) -> list[str]:
        if ty == EUREAL:
            return [sort for _, sort in self.ops.components]
        return [self.sort(ty)]

    def binder_args(self, name: str, ty: Ty) -> list[str]:
        if ty == EUREAL:
            return [symbol(name, sfx) for sfx, _ in self.ops.components]
        return [symbol(name)]

    def ereal_var(self, name: str) -> Val:
        return self.ops.join([symbol(name, sfx) for sfx, _ in self.ops.components])

    def type_guard(self, name: str, ty: Ty) -> str:
        if ty == UINT:
            return f"(>= {symbol(name)} 0)"
        if ty == UREAL:
            return f"(>= {symbol(name)} 0.0)"
        if ty == EUREAL:
            return self.ops.nonneg(self.ereal_var(name))
        return "true"

    def forall(self, binders: Sequence[tuple[str, Ty]], body: str) -> str:
        if not binders or body == "true":
            return body
        decls = " ".join(d for n, t in binders for d in self.binder_decls(n, t))
        return f"(forall ({decls}) {body})"

    def declare_const(self, name: str, ty: Ty) -> None:
        if name in self.consts:
            return
        self.consts[name] = ty
        if ty == EUREAL:
            for sfx, sort in self.ops.components:
                self.decls.append(f"(declare-const {symbol(name, sfx)} {sort})")
        else:
            self.decls.append(f"(declare-const {symbol(name)} {self.sort(ty)})")
        self.hyps.append(self.type_guard(name, ty))

    # ---- domains ----
    def declare_domains(self, domains: Sequence[DomainDecl], unfold_depth: int) -> None:
        for d in domains:
            self.decls.append(f"(declare-sort {symbol(d.name)} 0)")
        for d in domains:
            for fn in d.funcs:
                if fn.result == EUREAL:
                    raise UnsupportedConstruct(f"function {fn.name} returns EUReal", fn.span)
                sorts = " ".join(self.sort(t) for _, t in fn.params)
                self.decls.append(f"(declare-fun {symbol(fn.name)} ({sorts}) {self.sort(fn.result)})")
                if fn.result in (UINT, UREAL):
                    call = self._apply(fn.name, [symbol(n) for n, _ in fn.params])
                    zero = "0" if fn.result == UINT else "0.0"
                    guards = smt_and([self.type_guard(n, t) for n, t in fn.params])
                    self.defs.append(f"(assert {self.forall(fn.params, smt_implies(guards, f'(>= {call} {zero})'))})")
        for d in domains:
            for ax in d.axioms:
                self._axiom(ax, unfold_depth)

    def _axiom(self, ax, unfold_depth: int) -> None:
        env = dict(ax.binders)
        body, _ = self.term(ax.body, env)
        guards = smt_and([self.type_guard(n, t) for n, t in ax.binders])
        self.defs.append(f"; axiom {ax.name}")
        self.defs.append(f"(assert {self.forall(ax.binders, smt_implies(guards, body))})")
        if len(ax.binders) == 1 and ax.binders[0][1] == UINT and unfold_depth > 0:
            (name, _), = ax.binders
            for k in range(unfold_depth + 1):
                inst, _ = self.term(subst_term(ax.body, {name: num(k)}), {})
                self.defs.append(f"(assert {inst})")

    # ---- terms ----
    def _apply(self, func: str, args: Sequence[str]) -> str:
        return f"({symbol(func)} {' '.join(args)})" if args else symbol(func)

    def _var_type(self, name: str, env: Mapping[str, Ty], t: Term) -> Ty:
        ty = env.get(name) or self.consts.get(name) or self.ctx.var_type(name)
        if ty is None:
            raise UnboundVariable(f"no type for {name}", getattr(t, "span", None))
        return ty

    @staticmethod
    def _coerce(text: str, sort: str, target: str) -> str:
        if sort == target:
            return text
        if sort == "Int" and target == "Real":
            return f"(to_real {text})"
        raise UnsupportedConstruct(f"cannot use {sort} as {target}")

    def _numeric(self, args, env) -> tuple[list[str], str]:
        lowered = [self.term(a, env) for a in args]
        sorts = {s for _, s in lowered}
        if not sorts <= {"Int", "Real"}:
            raise UnsupportedConstruct(f"arithmetic over {sorted(sorts)}")
        target = "Real" if "Real" in sorts else "Int"
        return [self._coerce(x, s, target) for x, s in lowered], target

    def bool_term(self, t: Term, env: Mapping[str, Ty]) -> str:
        text, sort = self.term(t, env)
        if sort != "Bool":
            raise UnsupportedConstruct(f"expected a Boolean term, got {sort}", getattr(t, "span", None))
        return text

    def term(self, t: Term, env: Mapping[str, Ty]) -> tuple[str, str]:
        if isinstance(t, Const):
            if t.ty == BOOL:
                return ("true" if t.value else "false"), "Bool"
            q = Fraction(t.value)
            if t.ty in (UINT, INT) and q.denominator == 1:
                return int_literal(int(q)), "Int"
            return real_literal(q), "Real"
        if isinstance(t, Var):
            ty = self._var_type(t.name, env, t)
            if ty == EUREAL:
                raise UnsupportedConstruct(f"extended-real variable {t.name} inside a term", t.span)
            return symbol(t.name), self.sort(ty)
        if not isinstance(t, App):
            raise UnsupportedConstruct(f"not a term: {t!r}")

        f = t.func
        if f in ("&&", "||"):
            parts = [self.bool_term(a, env) for a in t.args]
            return (smt_and(parts) if f == "&&" else smt_or(parts)), "Bool"
        if f == "!":
            return smt_not(self.bool_term(t.args[0], env)), "Bool"
        if f == "ite":
            c = self.bool_term(t.args[0], env)
            (a, sa), (b, sb) = self.term(t.args[1], env), self.term(t.args[2], env)
            if sa != sb:
                (a, b), sa = self._numeric(t.args[1:], env)
            return f"(ite {c} {a} {b})", sa
        if f in ("==", "!="):
            (a, sa), (b, sb) = (self.term(x, env) for x in t.args)
            if sa != sb:
                (a, b), _ = self._numeric(t.args, env)
            eq = f"(= {a} {b})"
            return (eq if f == "==" else smt_not(eq)), "Bool"
        if f in ("<", "<=", ">", ">="):
            (a, b), _ = self._numeric(t.args, env)
            return f"({f} {a} {b})", "Bool"
        if f in ("+", "*", "-"):
            (a, b), sort = self._numeric(t.args, env)
            return f"({f} {a} {b})", sort
        if f == "/":
            (a, b), sort = self._numeric(t.args, env)
            a, b = self._coerce(a, sort, "Real"), self._coerce(b, sort, "Real")
            return f"(/ {a} {b})", "Real"
        if f == ".-":
            (a, b), sort = self._numeric(t.args, env)
            zero = "0" if sort == "Int" else "0.0"
            return f"(ite (>= {a} {b}) (- {a} {b}) {zero})", sort
        if f == "neg":
            (a,), sort = self._numeric(t.args, env)
            return f"(- {a})", sort

        decl = self.ctx.func(f)
        if decl is None:
            raise UnsupportedConstruct(f"unknown function {f}", t.span)
        args = []
        for (_, pty), arg in zip(decl.params, t.args):
            text, sort = self.term(arg, env)
            args.append(self._coerce(text, sort, self.sort(pty)))
        return self._apply(f, args), self.sort(decl.result)

    # ---- formulas ----
    def _params(self, scope: Sequence[tuple[str, Ty]]) -> str:
        return " ".join(d for n, t in scope for d in self.binder_decls(n, t))

    def _share(self, v: Val, scope: Sequence[tuple[str, Ty]]) -> Val:
        k = next(self.counter)
        params = self._params(scope)
        args = " ".join(a for n, t in scope for a in self.binder_args(n, t))
        refs = []
        for (sfx, sort), comp in zip(self.ops.components, self.ops.split(v)):
            name = f"t!{k}{sfx}"
            self.defs.append(f"(define-fun {name} ({params}) {sort} {comp})")
            refs.append(f"({name} {args})" if scope else name)
        return self.ops.join(refs)

    def atom(self, t: Term, env: Mapping[str, Ty]) -> Val:
        if isinstance(t, Var) and self._var_type(t.name, env, t) == EUREAL:
            return self.ereal_var(t.name)
        text, sort = self.term(t, env)
        return self.ops.fin(self._coerce(text, sort, "Real"))

    def value(self, f: Formula, scope: tuple[tuple[str, Ty], ...] = (), env: Mapping[str, Ty] | None = None) -> Val:
        env = env if env is not None else dict(scope)
        if isinstance(f, Atom):
            return self.atom(f.term, env)
        if isinstance(f, Infinity):
            return self.ops.inf()
        if isinstance(f, Embed):
            return self.ops.from_bool(self.bool_term(f.cond, env))
        if isinstance(f, CoEmbed):
            return self.ops.from_bool(smt_not(self.bool_term(f.cond, env)))
        key = (id(f), tuple(n for n, _ in scope))
        hit = self.memo.get(key)
        if hit is not None:
            return hit
        self.keep.append(f)
        if isinstance(f, (Inf, Sup)):
            out = self._quantifier(f, scope, env)
        else:
            out = self._share(self._compound(f, scope, env), scope)
        self.memo[key] = out
        return out

    def _compound(self, f: Formula, scope, env) -> Val:
        ops = self.ops
        if isinstance(f, (Add, Mul, Min, Max, Impl, CoImpl)):
            a, b = self.value(f.left, scope, env), self.value(f.right, scope, env)
            op = {Add: ops.add, Mul: ops.mul, Min: ops.min, Max: ops.max, Impl: ops.impl, CoImpl: ops.coimpl}
            return op[type(f)](a, b)
        if isinstance(f, (Neg, CoNeg, Validate, CoValidate)):
            a = self.value(f.arg, scope, env)
            op = {Neg: ops.neg, CoNeg: ops.coneg, Validate: ops.validate, CoValidate: ops.covalidate}
            return op[type(f)](a)
        raise UnsupportedConstruct(f"cannot lower {type(f).__name__}")

    def _quantifier(self, f: Inf | Sup, scope, env) -> Val:
        is_inf = isinstance(f, Inf)
        if f.ty == BOOL:
            lo = self.value(subst(f.body, f.var, FALSE), scope, env)
            hi = self.value(subst(f.body, f.var, TRUE), scope, env)
            return self._share((self.ops.min if is_inf else self.ops.max)(lo, hi), scope)

        k = next(self.counter)
        bound = f"{f.var}!{k}"
        inner_scope = (*scope, (bound, f.ty))
        inner_env = {**env, bound: f.ty}
        body = subst(f.body, f.var, Var(bound))
        self.keep.append(body)

        sk = f"sk!{k}"
        sorts = " ".join(s for _, t in scope for s in self.binder_sorts(t))
        args = " ".join(a for n, t in scope for a in self.binder_args(n, t))
        refs = []
        for sfx, sort in self.ops.components:
            self.defs.append(f"(declare-fun {sk}{sfx} ({sorts}) {sort})")
            refs.append(f"({sk}{sfx} {args})" if scope else f"{sk}{sfx}")
        ref = self.ops.join(refs)

        body_val = self.value(body, inner_scope, inner_env)
        guard_scope = smt_and([self.type_guard(n, t) for n, t in scope])
        guard_x = self.type_guard(bound, f.ty)
        y = f"y!{k}"
        y_val = self.ereal_var(y)
        leq = self.ops.leq
        if is_inf:
            below, premise, concl = leq(ref, body_val), leq(y_val, body_val), leq(y_val, ref)
        else:
            below, premise, concl = leq(body_val, ref), leq(body_val, y_val), leq(ref, y_val)
        all_x = self.forall([(bound, f.ty)], smt_implies(guard_x, premise))
        self.defs.append(f"(assert {self.forall(scope, smt_implies(guard_scope, self.ops.nonneg(ref)))})")
        self.defs.append(f"(assert {self.forall(inner_scope, smt_implies(smt_and([guard_scope, guard_x]), below))})")
        tightest = smt_implies(smt_and([guard_scope, self.ops.nonneg(y_val), all_x]), concl)
        self.defs.append(f"(assert {self.forall((*scope, (y, EUREAL)), tightest)})")
        return ref

    # ---- goal: smaller <= larger ----
    def _skolem_const(self, f: Inf | Sup) -> Formula:
        name = f"{f.var}!{next(self.counter)}"
        self.declare_const(name, f.ty)
        body = subst(f.body, f.var, Var(name))
        self.keep.append(body)
        return body

    def goal(self, small: Formula, large: Formula) -> str:
        ops = self.ops
        if isinstance(large, Infinity) or const_value(small) == ZERO:
            return "true"
        if isinstance(large, Inf):
            return self.goal(small, self._skolem_const(large))
        if isinstance(small, Sup):
            return self.goal(self._skolem_const(small), large)
        if isinstance(large, Min):
            return smt_and([self.goal(small, large.left), self.goal(small, large.right)])
        if isinstance(small, Max):
            return smt_and([self.goal(small.left, large), self.goal(small.right, large)])
        if isinstance(large, Impl):
            return self.goal(Min(small, large.left), large.right)
        if isinstance(small, CoImpl):
            return self.goal(small.right, Max(small.left, large))
        if isinstance(large, Validate):
            return smt_or([ops.is_zero(self.value(small)), ops.is_inf(self.value(large.arg))])
        if isinstance(small, CoValidate):
            return smt_or([ops.is_zero(self.value(small.arg)), ops.is_inf(self.value(large))])
        if isinstance(large, Embed):
            return smt_or([self.bool_term(large.cond, {}), ops.is_zero(self.value(small))])
        if isinstance(small, CoEmbed):
            return smt_or([self.bool_term(small.cond, {}), ops.is_inf(self.value(large))])
        if isinstance(small, Embed):
            return smt_or([smt_not(self.bool_term(small.cond, {})), ops.is_inf(self.value(large))])
        if isinstance(large, CoEmbed):
            return smt_or([smt_not(self.bool_term(large.cond, {})), ops.is_zero(self.value(small))])
        if isinstance(small, Min):
            return smt_or([self.goal(small.left, large), self.goal(small.right, large)])
        if isinstance(large, Max):
            return smt_or([self.goal(small, large.left), self.goal(small, large.right)])
        return ops.leq(self.value(small), self.value(large))


def lower_vc(
    vc: Vc,
    domains: Sequence[DomainDecl] | None = None,
    encoding: str = "pair",
    unfold_depth: int = DEFAULT_UNFOLD_DEPTH,
) -> SmtScript:
    """Script whose unsatisfiability proves vc; free variables become constants."""
    ctx = vc.ctx or TypeContext(domains or ())
    if domains is None:
        domains = list(ctx.domains.values())
    low = _Lowering(ctx, ops_for(encoding))
    low.decls.extend(low.ops.preamble())
    low.declare_domains(domains, unfold_depth)

    model: dict[str, str] = {}
    for name in sorted(free_vars(vc.smaller) | free_vars(vc.larger)):
        ty = ctx.var_type(name)
        if ty is None:
            raise UnboundVariable(f"{vc.name}: no type for free variable {name}")
        low.declare_const(name, ty)
        for sym in low.binder_args(name, ty):
            model[sym] = name

    g = low.goal(vc.smaller, vc.larger)
    query = [f"(assert {h})" for h in low.hyps if h != "true"]
    query.append(f"(assert {smt_not(g)})")
    logger.debug("lowered %s: %d definitions", vc.name, len(low.defs))
    return SmtScript(vc.name, low.decls, low.defs, query, model, encoding)


def lower_condition(
    cond: Term,
    types: Mapping[str, Ty],
    ctx: TypeContext,
    name: str = "guard",
) -> SmtScript:
    """Satisfiability query for a Boolean term (used by pruning guard checks)."""
    low = _Lowering(ctx, PairOps())
    low.declare_domains(list(ctx.domains.values()), 0)
    for var in sorted(term_vars(cond)):
        ty = types.get(var) or ctx.var_type(var)
        if ty is None:
            raise UnboundVariable(f"no type for {var}")
        low.declare_const(var, ty)
    text = low.bool_term(cond, {})
    query = [f"(assert {h})" for h in low.hyps if h != "true"]
    query.append(f"(assert {text})")
    return SmtScript(name, low.decls, low.defs, query, {}, "pair")
