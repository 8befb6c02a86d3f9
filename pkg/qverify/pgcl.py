# qverify/pgcl.py
"""
Annotated pGCL: the source language of the frontend.

Loops carry the proof-rule annotation written right before them; the program
carries its calculus, bound direction, pre/post and optional cwp bounds.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import Iterator

from .domains import DomainDecl
from .errors import Span
from .heylo import Formula
from .heyvl import Direction
from .terms import Term, Ty


class CalcKind(Enum):
    WP = "wp"
    WLP = "wlp"
    ERT = "ert"


@dataclass(frozen=True)
class Calculus:
    kind: CalcKind
    direction: Direction

    def __str__(self) -> str:
        return f"{self.kind.value}/{self.direction.value}"


# -----------------------------
# Rule annotations
# -----------------------------
class RuleAnnotation:
    __slots__ = ()
    rule = ""


@dataclass(frozen=True)
class Park(RuleAnnotation):
    inv: Formula
    span: Span | None = field(default=None, compare=False)
    rule = "park"


@dataclass(frozen=True)
class KInduction(RuleAnnotation):
    k: int
    inv: Formula
    span: Span | None = field(default=None, compare=False)
    rule = "k_induction"


@dataclass(frozen=True)
class OmegaInvariant(RuleAnnotation):
    n: str
    inv: Formula
    span: Span | None = field(default=None, compare=False)
    rule = "omega"


@dataclass(frozen=True)
class Ost(RuleAnnotation):
    inv: Term
    c: Fraction
    past: Term | None = None
    span: Span | None = field(default=None, compare=False)
    rule = "ost"


@dataclass(frozen=True)
class AstRule(RuleAnnotation):
    """p and d are terms over the reserved parameter `v`."""

    inv: Term
    variant: Term
    prob: Term
    dec: Term
    span: Span | None = field(default=None, compare=False)
    rule = "ast"


@dataclass(frozen=True)
class PastRule(RuleAnnotation):
    inv: Term
    eps: Fraction
    bound: Fraction
    span: Span | None = field(default=None, compare=False)
    rule = "past"


# -----------------------------
# Commands
# -----------------------------
class Cmd:
    __slots__ = ()


@dataclass(frozen=True)
class Skip(Cmd):
    pass


@dataclass(frozen=True)
class Diverge(Cmd):
    pass


@dataclass(frozen=True)
class Assign(Cmd):
    name: str
    value: Term
    span: Span | None = field(default=None, compare=False)


@dataclass(frozen=True)
class Block(Cmd):
    cmds: tuple[Cmd, ...]


@dataclass(frozen=True)
class Ite(Cmd):
    cond: Term
    then: Cmd
    orelse: Cmd


@dataclass(frozen=True)
class PChoice(Cmd):
    left: Cmd
    prob: Term
    right: Cmd


@dataclass(frozen=True)
class NdChoice(Cmd):
    left: Cmd
    right: Cmd


@dataclass(frozen=True)
class While(Cmd):
    cond: Term
    body: Cmd
    annotation: RuleAnnotation | None = None
    span: Span | None = field(default=None, compare=False)


@dataclass(frozen=True)
class Observe(Cmd):
    cond: Term


@dataclass(frozen=True)
class Tick(Cmd):
    amount: Term


def block(*cmds: Cmd) -> Cmd:
    flat: list[Cmd] = []
    for c in cmds:
        flat.extend(c.cmds if isinstance(c, Block) else (c,))
    return flat[0] if len(flat) == 1 else Block(tuple(flat))


def commands(c: Cmd) -> tuple[Cmd, ...]:
    return c.cmds if isinstance(c, Block) else (c,)


def subcommands(c: Cmd) -> Iterator[Cmd]:
    yield c
    if isinstance(c, Block):
        for x in c.cmds:
            yield from subcommands(x)
    elif isinstance(c, (Ite,)):
        yield from subcommands(c.then)
        yield from subcommands(c.orelse)
    elif isinstance(c, (PChoice, NdChoice)):
        yield from subcommands(c.left)
        yield from subcommands(c.right)
    elif isinstance(c, While):
        yield from subcommands(c.body)


def has_loop(c: Cmd) -> bool:
    return any(isinstance(x, While) for x in subcommands(c))


def has_observe(c: Cmd) -> bool:
    return any(isinstance(x, Observe) for x in subcommands(c))


def modified_vars(c: Cmd) -> set[str]:
    return {x.name for x in subcommands(c) if isinstance(x, Assign)}


# -----------------------------
# Programs
# -----------------------------
@dataclass(frozen=True)
class CwpSpec:
    wp_bound: Fraction
    norm_bound: Fraction
    normalizer: CalcKind = CalcKind.WLP

    @property
    def bound(self) -> Fraction:
        return self.wp_bound / self.norm_bound


@dataclass
class PgclProgram:
    variables: dict[str, Ty]
    body: Cmd
    calculus: Calculus | None = None
    pres: list[Formula] = field(default_factory=list)
    post: Formula | None = None
    cwp: CwpSpec | None = None
    domains: list[DomainDecl] = field(default_factory=list)
    name: str = "main"
