# qverify/heylo.py
"""
HeyLo: quantitative formulas denoting maps from states to [0, infinity].

Formulas are immutable trees that share subtrees freely (vp duplicates
postconditions by reference), so the traversals here memoise on node identity.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Callable, Iterable, Mapping

from .domains import Interp, TypeContext
from .ereal import INF, ONE, ZERO, EReal, emax, emin
from .errors import NonEnumerableQuantifier, Span, TypeCheckError
from .terms import (
    BOOL,
    EUREAL,
    UNSIGNED,
    Const,
    Term,
    Ty,
    Var,
    eval_term,
    is_subtype,
    num,
    subst_term,
    term_vars,
    to_ereal,
    type_of,
)


class Formula:
    __slots__ = ()


@dataclass(frozen=True)
class Atom(Formula):
    term: Term


@dataclass(frozen=True)
class Embed(Formula):
    cond: Term


@dataclass(frozen=True)
class CoEmbed(Formula):
    cond: Term


@dataclass(frozen=True)
class Add(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Mul(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Min(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Max(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Impl(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class CoImpl(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Inf(Formula):
    var: str
    ty: Ty
    body: Formula
    span: Span | None = field(default=None, compare=False, repr=False)


@dataclass(frozen=True)
class Sup(Formula):
    var: str
    ty: Ty
    body: Formula
    span: Span | None = field(default=None, compare=False, repr=False)


@dataclass(frozen=True)
class Neg(Formula):
    arg: Formula


@dataclass(frozen=True)
class CoNeg(Formula):
    arg: Formula


@dataclass(frozen=True)
class Validate(Formula):
    arg: Formula


@dataclass(frozen=True)
class CoValidate(Formula):
    arg: Formula


@dataclass(frozen=True)
class Infinity(Formula):
    pass


BINARY = (Add, Mul, Min, Max, Impl, CoImpl)
UNARY = (Neg, CoNeg, Validate, CoValidate)
QUANT = (Inf, Sup)

INFTY = Infinity()


def const(q: int | Fraction | EReal) -> Formula:
    if isinstance(q, EReal):
        return INFTY if q.is_inf else Atom(num(q.value))
    return Atom(num(q))


def const_value(f: Formula) -> EReal | None:
    """The constant a formula denotes syntactically, if any."""
    if isinstance(f, Infinity):
        return INF
    if isinstance(f, Atom) and isinstance(f.term, Const) and f.term.ty in UNSIGNED:
        return to_ereal(f.term.value)
    if isinstance(f, Embed) and isinstance(f.cond, Const):
        return INF if f.cond.value else ZERO
    if isinstance(f, CoEmbed) and isinstance(f.cond, Const):
        return ZERO if f.cond.value else INF
    return None


def lift(x: Term | Formula) -> Formula:
    return x if isinstance(x, Formula) else Atom(x)


def min_all(fs: Iterable[Formula], empty: Formula = INFTY) -> Formula:
    out = None
    for f in fs:
        out = f if out is None else Min(out, f)
    return empty if out is None else out


def max_all(fs: Iterable[Formula], empty: Formula | None = None) -> Formula:
    out = None
    for f in fs:
        out = f if out is None else Max(out, f)
    return (empty if empty is not None else const(0)) if out is None else out


# -----------------------------
# Free variables
# -----------------------------
def free_vars(f: Formula) -> set[str]:
    memo: dict[int, frozenset[str]] = {}

    def go(g: Formula) -> frozenset[str]:
        key = id(g)
        if key in memo:
            return memo[key]
        if isinstance(g, Atom):
            out = frozenset(term_vars(g.term))
        elif isinstance(g, (Embed, CoEmbed)):
            out = frozenset(term_vars(g.cond))
        elif isinstance(g, BINARY):
            out = go(g.left) | go(g.right)
        elif isinstance(g, UNARY):
            out = go(g.arg)
        elif isinstance(g, QUANT):
            out = go(g.body) - {g.var}
        else:
            out = frozenset()
        memo[key] = out
        return out

    return set(go(f))


# -----------------------------
# Substitution
# -----------------------------
def _fresh_binder(name: str, avoid: set[str]) -> str:
    cand = name + "'"
    while cand in avoid:
        cand += "'"
    return cand


def subst(f: Formula, mapping: Mapping[str, Term] | str, term: Term | None = None) -> Formula:
    """
    Simultaneous capture-avoiding substitution f[x/t].

    Accepts either a mapping or a single (name, term) pair.
    """
    if isinstance(mapping, str):
        mapping = {mapping: term}
    mapping = dict(mapping)
    if not mapping:
        return f
    return _Subst(mapping).go(f)


class _Subst:
    def __init__(self, mapping: dict[str, Term]):
        self.mapping = mapping
        self.memo: dict[int, Formula] = {}
        self._keep: list[Formula] = []

    def go(self, f: Formula) -> Formula:
        key = id(f)
        hit = self.memo.get(key)
        if hit is not None:
            return hit
        out = self._step(f)
        self.memo[key] = out
        self._keep.append(f)
        return out

    def _step(self, f: Formula) -> Formula:
        m = self.mapping
        if isinstance(f, Atom):
            t = subst_term(f.term, m)
            return f if t is f.term else Atom(t)
        if isinstance(f, Embed):
            t = subst_term(f.cond, m)
            return f if t is f.cond else Embed(t)
        if isinstance(f, CoEmbed):
            t = subst_term(f.cond, m)
            return f if t is f.cond else CoEmbed(t)
        if isinstance(f, BINARY):
            left, right = self.go(f.left), self.go(f.right)
            if left is f.left and right is f.right:
                return f
            return type(f)(left, right)
        if isinstance(f, UNARY):
            arg = self.go(f.arg)
            return f if arg is f.arg else type(f)(arg)
        if isinstance(f, QUANT):
            return self._quant(f)
        return f

    def _quant(self, f: Inf | Sup) -> Formula:
        body_fv = free_vars(f.body)
        inner = {k: v for k, v in self.mapping.items() if k != f.var and k in body_fv}
        if not inner:
            return f
        incoming: set[str] = set()
        for t in inner.values():
            incoming |= term_vars(t)
        var, body = f.var, f.body
        if var in incoming:
            var = _fresh_binder(f.var, incoming | body_fv | set(inner))
            inner[f.var] = Var(var)
        new_body = _Subst(inner).go(body)
        return type(f)(var, f.ty, new_body, f.span)


# -----------------------------
# Type checking
# -----------------------------
def typecheck(f: Formula, ctx: TypeContext) -> Ty:
    memo: set[int] = set()

    def go(g: Formula, c: TypeContext) -> None:
        if c is ctx and id(g) in memo:
            return
        if isinstance(g, Atom):
            ty = type_of(g.term, c)
            if not is_subtype(ty, EUREAL):
                raise TypeCheckError(
                    f"expected a non-negative quantity, got a term of type {ty}",
                    getattr(g.term, "span", None),
                )
        elif isinstance(g, (Embed, CoEmbed)):
            ty = type_of(g.cond, c)
            if ty != BOOL:
                raise TypeCheckError(
                    f"embedding expects a Bool term, got {ty}", getattr(g.cond, "span", None)
                )
        elif isinstance(g, BINARY):
            go(g.left, c)
            go(g.right, c)
        elif isinstance(g, UNARY):
            go(g.arg, c)
        elif isinstance(g, QUANT):
            go(g.body, c.extend({g.var: g.ty}))
        elif not isinstance(g, Infinity):
            raise TypeCheckError(f"not a formula: {g!r}")
        if c is ctx:
            memo.add(id(g))

    go(f, ctx)
    return EUREAL


# -----------------------------
# Evaluation
# -----------------------------
def eval_formula(f: Formula, state: Mapping[str, Any], interp: Interp | None = None) -> EReal:
    """Exact pointwise value of f at state. Quantifiers enumerate interp.ranges."""
    interp = interp or Interp()
    return _eval(f, dict(state), interp)


def _eval(f: Formula, st: dict[str, Any], interp: Interp) -> EReal:
    if isinstance(f, Atom):
        return to_ereal(eval_term(f.term, st, interp), f.term)
    if isinstance(f, Embed):
        return INF if eval_term(f.cond, st, interp) else ZERO
    if isinstance(f, CoEmbed):
        return ZERO if eval_term(f.cond, st, interp) else INF
    if isinstance(f, Infinity):
        return INF
    if isinstance(f, Add):
        return _eval(f.left, st, interp) + _eval(f.right, st, interp)
    if isinstance(f, Mul):
        return _eval(f.left, st, interp) * _eval(f.right, st, interp)
    if isinstance(f, Min):
        return emin(_eval(f.left, st, interp), _eval(f.right, st, interp))
    if isinstance(f, Max):
        return emax(_eval(f.left, st, interp), _eval(f.right, st, interp))
    if isinstance(f, Impl):
        a, b = _eval(f.left, st, interp), _eval(f.right, st, interp)
        return INF if a <= b else b
    if isinstance(f, CoImpl):
        a, b = _eval(f.left, st, interp), _eval(f.right, st, interp)
        return ZERO if a >= b else b
    if isinstance(f, Neg):
        return INF if _eval(f.arg, st, interp) == ZERO else ZERO
    if isinstance(f, CoNeg):
        return ZERO if _eval(f.arg, st, interp).is_inf else INF
    if isinstance(f, Validate):
        return INF if _eval(f.arg, st, interp).is_inf else ZERO
    if isinstance(f, CoValidate):
        return ZERO if _eval(f.arg, st, interp) == ZERO else INF
    if isinstance(f, QUANT):
        return _eval_quant(f, st, interp)
    raise TypeError(f"not a formula: {f!r}")


def _eval_quant(f: Inf | Sup, st: dict[str, Any], interp: Interp) -> EReal:
    values = interp.values_of(f.ty)
    if values is None:
        raise NonEnumerableQuantifier(f"cannot enumerate values of type {f.ty}", f.span)
    if len(values) > interp.budget:
        raise NonEnumerableQuantifier(
            f"{len(values)} values of {f.ty} exceed the enumeration budget {interp.budget}", f.span
        )
    is_inf = isinstance(f, Inf)
    acc = INF if is_inf else ZERO
    saved = st.get(f.var, _MISSING)
    try:
        for v in values:
            st[f.var] = v
            val = _eval(f.body, st, interp)
            acc = emin(acc, val) if is_inf else emax(acc, val)
            if (is_inf and acc == ZERO) or (not is_inf and acc.is_inf):
                break
    finally:
        if saved is _MISSING:
            st.pop(f.var, None)
        else:
            st[f.var] = saved
    return acc


_MISSING = object()


# -----------------------------
# Simplification
# -----------------------------
def simplify(f: Formula) -> Formula:
    """Semantics-preserving local rewrites: constant folding, units, absorbing elements."""
    memo: dict[int, Formula] = {}
    keep: list[Formula] = []

    def go(g: Formula) -> Formula:
        key = id(g)
        if key in memo:
            return memo[key]
        out = _simplify_node(g, go)
        memo[key] = out
        keep.append(g)
        return out

    return go(f)


def _simplify_node(f: Formula, go: Callable[[Formula], Formula]) -> Formula:
    if isinstance(f, (Embed, CoEmbed)):
        c = const_value(f)
        return const(c) if c is not None else f
    if isinstance(f, BINARY):
        left, right = go(f.left), go(f.right)
        return _simplify_binary(type(f), left, right)
    if isinstance(f, UNARY):
        return _simplify_unary(type(f), go(f.arg))
    if isinstance(f, QUANT):
        body = go(f.body)
        if f.var not in free_vars(body):
            return body
        return type(f)(f.var, f.ty, body, f.span)
    return f


def _simplify_binary(kind: type, a: Formula, b: Formula) -> Formula:
    ca, cb = const_value(a), const_value(b)
    if ca is not None and cb is not None:
        return const(_fold(kind, ca, cb))
    if kind is Add:
        if ca == ZERO:
            return b
        if cb == ZERO:
            return a
        if INF in (ca, cb):
            return INFTY
    elif kind is Mul:
        if ZERO in (ca, cb):
            return const(0)
        if ca == ONE:
            return b
        if cb == ONE:
            return a
    elif kind is Min:
        if ca == INF:
            return b
        if cb == INF:
            return a
        if ZERO in (ca, cb):
            return const(0)
        if a == b:
            return a
    elif kind is Max:
        if ca == ZERO:
            return b
        if cb == ZERO:
            return a
        if INF in (ca, cb):
            return INFTY
        if a == b:
            return a
    elif kind is Impl:
        if ca == INF:
            return b
        if ca == ZERO or cb == INF:
            return INFTY
        if a == b:
            return INFTY
    elif kind is CoImpl:
        if ca == ZERO:
            return b
        if ca == INF or cb == ZERO:
            return const(0)
        if a == b:
            return const(0)
    return kind(a, b)


def _fold(kind: type, a: EReal, b: EReal) -> EReal:
    if kind is Add:
        return a + b
    if kind is Mul:
        return a * b
    if kind is Min:
        return emin(a, b)
    if kind is Max:
        return emax(a, b)
    if kind is Impl:
        return INF if a <= b else b
    return ZERO if a >= b else b


def _simplify_unary(kind: type, a: Formula) -> Formula:
    ca = const_value(a)
    if ca is not None:
        if kind is Neg:
            return INFTY if ca == ZERO else const(0)
        if kind is CoNeg:
            return const(0) if ca.is_inf else INFTY
        if kind is Validate:
            return INFTY if ca.is_inf else const(0)
        return const(0) if ca == ZERO else INFTY
    # double (co)negation normal forms
    if kind is Neg and isinstance(a, Neg):
        return CoValidate(a.arg)
    if kind is CoNeg and isinstance(a, CoNeg):
        return Validate(a.arg)
    if kind is Validate and isinstance(a, (Validate, Embed, CoEmbed)):
        return a
    if kind is CoValidate and isinstance(a, (CoValidate, Embed, CoEmbed)):
        return a
    return kind(a)
