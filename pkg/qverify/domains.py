# qverify/domains.py
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Callable, Iterable, Mapping, Sequence

from .errors import Span, TypeCheckError
from .terms import BOOL, BUILTIN_TYPES, FALSE, Term, Ty, is_subtype, num, type_of

# Largest quantifier range eval will enumerate.
DEFAULT_ENUM_BUDGET = 10**6


@dataclass(frozen=True)
class FuncDecl:
    name: str
    params: tuple[tuple[str, Ty], ...]
    result: Ty
    span: Span | None = field(default=None, compare=False)


@dataclass(frozen=True)
class Axiom:
    name: str
    binders: tuple[tuple[str, Ty], ...]
    body: Term
    span: Span | None = field(default=None, compare=False)


@dataclass(frozen=True)
class DomainDecl:
    name: str
    funcs: tuple[FuncDecl, ...] = ()
    axioms: tuple[Axiom, ...] = ()
    default: Term | None = None
    span: Span | None = field(default=None, compare=False)

    @property
    def ty(self) -> Ty:
        return Ty(self.name, user=True)


class TypeContext:
    """Variable and function signatures visible to the type checker. Extension returns a copy."""

    def __init__(
        self,
        domains: Iterable[DomainDecl] = (),
        variables: Mapping[str, Ty] | None = None,
    ):
        self.domains: dict[str, DomainDecl] = {}
        self.funcs: dict[str, FuncDecl] = {}
        for d in domains:
            self.domains[d.name] = d
            for f in d.funcs:
                if f.name in self.funcs:
                    raise TypeCheckError(f"function {f.name} declared twice", f.span)
                self.funcs[f.name] = f
        self.variables: dict[str, Ty] = dict(variables or {})

    def var_type(self, name: str) -> Ty | None:
        return self.variables.get(name)

    def func(self, name: str) -> FuncDecl | None:
        return self.funcs.get(name)

    def extend(self, bindings: Mapping[str, Ty] | Iterable[tuple[str, Ty]]) -> "TypeContext":
        out = TypeContext.__new__(TypeContext)
        out.domains = self.domains
        out.funcs = self.funcs
        out.variables = dict(self.variables)
        out.variables.update(dict(bindings))
        return out

    def resolve_type(self, name: str, span: Span | None = None) -> Ty:
        if name in BUILTIN_TYPES:
            return BUILTIN_TYPES[name]
        if name in self.domains:
            return self.domains[name].ty
        raise TypeCheckError(f"unknown type {name}", span)

    @property
    def user_types(self) -> list[Ty]:
        return [d.ty for d in self.domains.values()]

    def default_value(self, ty: Ty, span: Span | None = None) -> Term:
        if ty == BOOL:
            return FALSE
        if not ty.user:
            return num(0)
        decl = self.domains.get(ty.name)
        if decl is None or decl.default is None:
            raise TypeCheckError(f"domain {ty.name} declares no default value", span)
        return decl.default


def check_domains(domains: Sequence[DomainDecl]) -> TypeContext:
    """Type-check function signatures, axioms and defaults of all domains."""
    ctx = TypeContext(domains)
    for d in domains:
        for ax in d.axioms:
            inner = ctx.extend(ax.binders)
            if type_of(ax.body, inner) != BOOL:
                raise TypeCheckError(f"axiom {ax.name} must be Bool", ax.span)
        if d.default is not None:
            dty = type_of(d.default, ctx)
            if not is_subtype(dty, d.ty):
                raise TypeCheckError(f"default of {d.name} has type {dty}", d.span)
    return ctx


@dataclass
class Interp:
    """
    Executable meaning of user symbols for the evaluator.

    funcs: name -> python callable
    ranges: type name -> finite sequence enumerated by inf/sup
    """

    funcs: dict[str, Callable[..., Any]] = field(default_factory=dict)
    ranges: dict[str, Sequence[Any]] = field(default_factory=dict)
    budget: int = DEFAULT_ENUM_BUDGET

    def values_of(self, ty: Ty) -> Sequence[Any] | None:
        if ty.name in self.ranges:
            return self.ranges[ty.name]
        if ty == BOOL:
            return (False, True)
        return None

    @classmethod
    def with_naturals(cls, upto: int, **kw) -> "Interp":
        """Quantifiers over UInt/Int/UReal/Real range over 0..upto (Int also over negatives)."""
        naturals = list(range(upto + 1))
        ranges = {
            "UInt": naturals,
            "UReal": naturals,
            "Int": list(range(-upto, upto + 1)),
            "Real": list(range(-upto, upto + 1)),
        }
        ranges.update(kw.pop("ranges", {}))
        return cls(ranges=ranges, **kw)
