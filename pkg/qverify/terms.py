# qverify/terms.py
"""
Types and first-order terms shared by HeyLo, HeyVL and pGCL.

Terms never bind variables, so substitution is plain structural replacement.
Variables carry no type; a TypeContext (see domains.py) resolves them.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import TYPE_CHECKING, Any, Mapping

from .ereal import EReal
from .errors import EvaluationError, Span, TypeCheckError, UnboundVariable

if TYPE_CHECKING:
    from .domains import Interp, TypeContext


# -----------------------------
# Types
# -----------------------------
@dataclass(frozen=True)
class Ty:
    name: str
    user: bool = False

    def __str__(self) -> str:
        return self.name


BOOL = Ty("Bool")
UINT = Ty("UInt")
INT = Ty("Int")
UREAL = Ty("UReal")
REAL = Ty("Real")
EUREAL = Ty("EUReal")

BUILTIN_TYPES = {t.name: t for t in (BOOL, UINT, INT, UREAL, REAL, EUREAL)}
NUMERIC = frozenset({UINT, INT, UREAL, REAL})
UNSIGNED = frozenset({UINT, UREAL, EUREAL})

_SUPER = {
    UINT: (INT, UREAL),
    INT: (REAL,),
    UREAL: (REAL, EUREAL),
}


def supertypes(t: Ty) -> list[Ty]:
    """Reflexive-transitive closure of the subtype edges, nearest first."""
    out, todo = [], [t]
    while todo:
        cur = todo.pop(0)
        if cur not in out:
            out.append(cur)
            todo.extend(_SUPER.get(cur, ()))
    return out


def is_subtype(a: Ty, b: Ty) -> bool:
    return b in supertypes(a)


def join(a: Ty, b: Ty) -> Ty | None:
    """Least common supertype, or None when the types are unrelated."""
    common = [t for t in supertypes(a) if is_subtype(b, t)]
    for cand in common:
        if all(is_subtype(cand, other) for other in common):
            return cand
    return None


def signed(t: Ty) -> Ty:
    return {UINT: INT, UREAL: REAL}.get(t, t)


def fractional(t: Ty) -> Ty:
    return {UINT: UREAL, INT: REAL}.get(t, t)


# -----------------------------
# Terms
# -----------------------------
class Term:
    __slots__ = ()


@dataclass(frozen=True)
class Const(Term):
    value: Any
    ty: Ty
    span: Span | None = field(default=None, compare=False, repr=False)


@dataclass(frozen=True)
class Var(Term):
    name: str
    span: Span | None = field(default=None, compare=False, repr=False)


@dataclass(frozen=True)
class App(Term):
    func: str
    args: tuple[Term, ...]
    span: Span | None = field(default=None, compare=False, repr=False)


ARITH_OPS = frozenset({"+", "*", "-", ".-", "/"})
CMP_OPS = frozenset({"<", "<=", ">", ">=", "==", "!="})
BOOL_OPS = frozenset({"&&", "||", "!"})
BUILTINS = ARITH_OPS | CMP_OPS | BOOL_OPS | {"ite", "neg"}

TRUE = Const(True, BOOL)
FALSE = Const(False, BOOL)


def num(q: int | Fraction) -> Const:
    q = Fraction(q)
    if q.denominator == 1 and q >= 0:
        return Const(int(q), UINT)
    if q >= 0:
        return Const(q, UREAL)
    if q.denominator == 1:
        return Const(int(q), INT)
    return Const(q, REAL)


def app(func: str, *args: Term) -> App:
    return App(func, tuple(args))


def iverson(b: Term) -> Term:
    return App("ite", (b, num(1), num(0)))


def negate(b: Term) -> Term:
    if isinstance(b, Const) and b.ty == BOOL:
        return Const(not b.value, BOOL)
    if isinstance(b, App) and b.func == "!":
        return b.args[0]
    return App("!", (b,))


def conj(*bs: Term) -> Term:
    parts = [b for b in bs if b != TRUE]
    if not parts:
        return TRUE
    out = parts[0]
    for b in parts[1:]:
        out = App("&&", (out, b))
    return out


# -----------------------------
# Free variables / substitution
# -----------------------------
def term_vars(t: Term) -> set[str]:
    if isinstance(t, Var):
        return {t.name}
    if isinstance(t, App):
        out: set[str] = set()
        for a in t.args:
            out |= term_vars(a)
        return out
    return set()


def subst_term(t: Term, mapping: Mapping[str, Term]) -> Term:
    if not mapping:
        return t
    if isinstance(t, Var):
        return mapping.get(t.name, t)
    if isinstance(t, App):
        args = tuple(subst_term(a, mapping) for a in t.args)
        if all(x is y for x, y in zip(args, t.args)):
            return t
        return App(t.func, args, t.span)
    return t


# -----------------------------
# Typing
# -----------------------------
def _fail(msg: str, t: Term) -> TypeCheckError:
    return TypeCheckError(msg, getattr(t, "span", None))


def _numeric(t: Term, ty: Ty) -> Ty:
    if ty not in NUMERIC:
        raise _fail(f"expected a numeric term, got {ty}", t)
    return ty


def type_of(t: Term, ctx: "TypeContext") -> Ty:
    if isinstance(t, Const):
        return t.ty
    if isinstance(t, Var):
        ty = ctx.var_type(t.name)
        if ty is None:
            raise UnboundVariable(f"unbound variable {t.name}", t.span)
        return ty
    if not isinstance(t, App):
        raise _fail(f"not a term: {t!r}", t)

    if t.func in BUILTINS:
        arg_tys = [type_of(a, ctx) for a in t.args]
        return _builtin_type(t, arg_tys)

    decl = ctx.func(t.func)
    if decl is None:
        raise _fail(f"unknown function {t.func}", t)
    if len(decl.params) != len(t.args):
        raise _fail(f"{t.func} expects {len(decl.params)} arguments, got {len(t.args)}", t)
    for (pname, pty), arg in zip(decl.params, t.args):
        aty = type_of(arg, ctx)
        if not is_subtype(aty, pty):
            raise _fail(f"argument {pname} of {t.func} expects {pty}, got {aty}", arg)
    return decl.result


def _builtin_type(t: App, tys: list[Ty]) -> Ty:
    f = t.func
    if f == "neg":
        return signed(_numeric(t, tys[0]))
    if f == "!":
        if tys[0] != BOOL:
            raise _fail("! expects Bool", t)
        return BOOL
    if f in ("&&", "||"):
        if tys != [BOOL, BOOL]:
            raise _fail(f"{f} expects Bool operands", t)
        return BOOL
    if f == "ite":
        if tys[0] != BOOL:
            raise _fail("ite condition must be Bool", t)
        res = join(tys[1], tys[2])
        if res is None or res == EUREAL:
            raise _fail(f"ite branches have incompatible types {tys[1]} and {tys[2]}", t)
        return res
    if f in CMP_OPS:
        a, b = tys
        if f in ("==", "!=") and (a == b and a not in NUMERIC):
            if a == EUREAL:
                raise _fail("EUReal values may only appear as bare quantities", t)
            return BOOL
        j = join(_numeric(t, a), _numeric(t, b))
        if j is None:
            raise _fail(f"cannot compare {a} and {b}", t)
        return BOOL
    # arithmetic
    a, b = (_numeric(t, ty) for ty in tys)
    j = join(a, b)
    if j is None:
        raise _fail(f"incompatible operands {a} and {b} for {f}", t)
    if f == "-":
        return signed(j)
    if f == "/":
        return fractional(j)
    return j


# -----------------------------
# Evaluation
# -----------------------------
def eval_term(t: Term, state: Mapping[str, Any], interp: "Interp | None" = None) -> Any:
    if isinstance(t, Const):
        return t.value
    if isinstance(t, Var):
        try:
            return state[t.name]
        except KeyError:
            raise UnboundVariable(f"state has no value for {t.name}", t.span) from None
    if not isinstance(t, App):
        raise EvaluationError(f"not a term: {t!r}")

    f = t.func
    if f == "ite":
        cond = eval_term(t.args[0], state, interp)
        return eval_term(t.args[1] if cond else t.args[2], state, interp)
    if f == "&&":
        return bool(eval_term(t.args[0], state, interp)) and bool(eval_term(t.args[1], state, interp))
    if f == "||":
        return bool(eval_term(t.args[0], state, interp)) or bool(eval_term(t.args[1], state, interp))

    args = [eval_term(a, state, interp) for a in t.args]
    if f in BUILTINS:
        return _apply_builtin(t, args)
    if interp is None or f not in interp.funcs:
        raise EvaluationError(f"no interpretation for function {f}", t.span)
    return interp.funcs[f](*args)


def _as_number(v: Any, t: Term) -> int | Fraction:
    if isinstance(v, bool) or not isinstance(v, (int, Fraction)):
        raise EvaluationError(f"expected a number, got {v!r}", t.span)
    return v


def _apply_builtin(t: App, args: list[Any]) -> Any:
    f = t.func
    if f == "!":
        return not args[0]
    if f == "==":
        return args[0] == args[1]
    if f == "!=":
        return args[0] != args[1]
    if f == "neg":
        return -_as_number(args[0], t)
    a, b = (_as_number(x, t) for x in args)
    if f == "+":
        return a + b
    if f == "*":
        return a * b
    if f == "-":
        return a - b
    if f == ".-":
        return max(a - b, 0)
    if f == "/":
        if b == 0:
            raise EvaluationError("division by zero", t.span)
        return Fraction(a) / b
    if f == "<":
        return a < b
    if f == "<=":
        return a <= b
    if f == ">":
        return a > b
    if f == ">=":
        return a >= b
    raise EvaluationError(f"unknown builtin {f}", t.span)


def to_ereal(v: Any, t: Term | None = None) -> EReal:
    if isinstance(v, EReal):
        return v
    if isinstance(v, bool) or not isinstance(v, (int, Fraction)):
        raise EvaluationError(f"expected a quantity, got {v!r}", getattr(t, "span", None))
    if v < 0:
        raise EvaluationError(f"negative quantity {v}", getattr(t, "span", None))
    return EReal(Fraction(v))
