# qverify/oracle.py
"""
Brute-force expectation semantics of pGCL over small finite state spaces.

Everything is exact: Fractions and EReal, no floating point. Loops are never
solved; they are unrolled a fixed number of times, which bounds the true value
from the sound side only (from below for wp/ert, from above for wlp).
"""
from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass
from fractions import Fraction
from math import prod
from typing import Any, Callable, Iterator, Mapping, Sequence

from .domains import Interp
from .ereal import INF, ONE, ZERO, EReal, emin
from .errors import EvaluationError, LoopFound, StateSpaceTooLarge
from .heylo import Formula, eval_formula
from .heyvl import Vc
from .pgcl import (
    Assign,
    Block,
    CalcKind,
    Cmd,
    Diverge,
    Ite,
    NdChoice,
    Observe,
    PChoice,
    Skip,
    Tick,
    While,
    has_loop,
)
from .terms import Term, eval_term, to_ereal

logger = logging.getLogger(__name__)

DEFAULT_STATE_BOUND = 10**5
DEFAULT_ITERATIONS = 64

State = dict[str, Any]
Post = Callable[[Mapping[str, Any]], EReal]
Table = dict[tuple, EReal]


@dataclass(frozen=True)
class FiniteDomainSpec:
    """Finite value range per variable; states are the product of the ranges."""

    ranges: dict[str, Sequence[Any]]
    bound: int = DEFAULT_STATE_BOUND

    def __post_init__(self):
        size = self.size
        if size > self.bound:
            raise StateSpaceTooLarge(f"{size} states exceed the bound {self.bound}")

    @property
    def names(self) -> list[str]:
        return list(self.ranges)

    @property
    def size(self) -> int:
        return prod(len(r) for r in self.ranges.values())

    def key(self, state: Mapping[str, Any]) -> tuple:
        return tuple(state[n] for n in self.ranges)

    def states(self) -> Iterator[State]:
        names = self.names
        for values in itertools.product(*(self.ranges[n] for n in names)):
            yield dict(zip(names, values))

    def contains(self, state: Mapping[str, Any]) -> bool:
        return all(state.get(n) in r for n, r in self.ranges.items())


def from_formula(f: Formula, interp: Interp | None = None) -> Post:
    interp = interp or Interp()
    return lambda st: eval_formula(f, st, interp)


def from_term(t: Term, interp: Interp | None = None) -> Post:
    return lambda st: to_ereal(eval_term(t, st, interp), t)


def from_table(table: Table, spec: FiniteDomainSpec, default: EReal = ZERO) -> Post:
    """States outside the table (successors leaving the finite space) read `default`."""
    return lambda st: table.get(spec.key(st), default) if spec.contains(st) else default


def constant(v: int | Fraction | EReal) -> Post:
    value = EReal.of(v)
    return lambda st: value


def initial_value(calc: CalcKind) -> EReal:
    return ONE if calc is CalcKind.WLP else ZERO


# -----------------------------
# Per-state evaluation
# -----------------------------
@dataclass
class _Run:
    calc: CalcKind
    interp: Interp
    depth: int

    @property
    def ert(self) -> bool:
        return self.calc is CalcKind.ERT

    def cost(self, v: EReal) -> EReal:
        return v + ONE if self.ert else v

    def run(self, c: Cmd, st: State, k: Callable[[State], EReal]) -> EReal:
        if isinstance(c, Block):
            return self._block(c.cmds, 0, st, k)
        if isinstance(c, Skip):
            return self.cost(k(st))
        if isinstance(c, Assign):
            nxt = dict(st)
            nxt[c.name] = eval_term(c.value, st, self.interp)
            return self.cost(k(nxt))
        if isinstance(c, Ite):
            branch = c.then if eval_term(c.cond, st, self.interp) else c.orelse
            return self.cost(self.run(branch, st, k))
        if isinstance(c, PChoice):
            p = Fraction(eval_term(c.prob, st, self.interp))
            if not 0 <= p <= 1:
                raise EvaluationError(f"probability {p} outside [0, 1]")
            left = self.run(c.left, st, k) if p else ZERO
            right = self.run(c.right, st, k) if p != 1 else ZERO
            return self.cost(EReal(p) * left + EReal(1 - p) * right)
        if isinstance(c, NdChoice):
            return emin(self.run(c.left, st, k), self.run(c.right, st, k))
        if isinstance(c, Diverge):
            return {CalcKind.WP: ZERO, CalcKind.WLP: ONE, CalcKind.ERT: INF}[self.calc]
        if isinstance(c, Observe):
            return k(st) if eval_term(c.cond, st, self.interp) else ZERO
        if isinstance(c, Tick):
            if self.ert:
                return to_ereal(eval_term(c.amount, st, self.interp), c.amount) + k(st)
            return k(st)
        if isinstance(c, While):
            return self._loop(c, st, k)
        raise TypeError(f"not a command: {c!r}")

    def _block(self, cmds: tuple[Cmd, ...], i: int, st: State, k) -> EReal:
        if i == len(cmds):
            return k(st)
        return self.run(cmds[i], st, lambda s: self._block(cmds, i + 1, s, k))

    def _loop(self, loop: While, st: State, k) -> EReal:
        memo: dict[tuple, EReal] = {}
        bottom = initial_value(self.calc)

        def unfold(s: State, n: int) -> EReal:
            key = (n, tuple(sorted(s.items())))
            hit = memo.get(key)
            if hit is not None:
                return hit
            if n == 0:
                out = bottom
            elif eval_term(loop.cond, s, self.interp):
                out = self.cost(self.run(loop.body, s, lambda t: unfold(t, n - 1)))
            else:
                out = self.cost(k(s))
            memo[key] = out
            return out

        return unfold(st, self.depth)


def expectation(
    c: Cmd,
    post: Post,
    calc: CalcKind,
    state: Mapping[str, Any],
    interp: Interp | None = None,
    iterations: int = DEFAULT_ITERATIONS,
) -> EReal:
    """calc(c)(post) at one state; loops unfolded `iterations` times."""
    return _Run(calc, interp or Interp(), iterations).run(c, dict(state), post)


def exact_loopfree(
    c: Cmd,
    post: Post | Table,
    calc: CalcKind,
    spec: FiniteDomainSpec,
    interp: Interp | None = None,
) -> Table:
    """Exact calc(c)(post) at every state of spec."""
    if has_loop(c):
        raise LoopFound("exact evaluation needs a loop-free program")
    if isinstance(post, dict):
        post = from_table(post, spec)
    return {spec.key(st): expectation(c, post, calc, st, interp) for st in spec.states()}


# -----------------------------
# Loop-characteristic functional
# -----------------------------
@dataclass(frozen=True)
class CharFunctional:
    """Phi_X(Y) = [b] * calc(body)(Y) + [!b] * X (plus one step of runtime for ert)."""

    guard: Term
    body: Cmd
    post: Post
    calc: CalcKind

    @classmethod
    def of_loop(cls, loop: While, post: Post, calc: CalcKind) -> "CharFunctional":
        return cls(loop.cond, loop.body, post, calc)

    def apply(self, y: Table, spec: FiniteDomainSpec, interp: Interp | None = None) -> Table:
        interp = interp or Interp()
        run = _Run(self.calc, interp, DEFAULT_ITERATIONS)
        cont = from_table(y, spec, initial_value(self.calc))
        out: Table = {}
        for st in spec.states():
            if eval_term(self.guard, st, interp):
                val = run.run(self.body, dict(st), cont)
            else:
                val = self.post(st)
            out[spec.key(st)] = run.cost(val)
        return out


def iterate_phi(
    f: CharFunctional,
    n: int,
    spec: FiniteDomainSpec,
    interp: Interp | None = None,
) -> Table:
    """Phi^n(0) for wp/ert, Phi^n(1) for wlp."""
    if n < 0:
        raise ValueError("iteration count must be non-negative")
    start = initial_value(f.calc)
    table: Table = {spec.key(st): start for st in spec.states()}
    for _ in range(n):
        table = f.apply(table, spec, interp)
    return table


# -----------------------------
# Evaluation-level VC checking
# -----------------------------
def vc_counterexample(vc: Vc, spec: FiniteDomainSpec, interp: Interp | None = None) -> State | None:
    """First state of spec where the Vc's inequality fails, or None."""
    interp = interp or Interp()
    for st in spec.states():
        small = eval_formula(vc.smaller, st, interp)
        large = eval_formula(vc.larger, st, interp)
        if not small <= large:
            logger.debug("vc %s fails at %s: %s > %s", vc.name, st, small, large)
            return st
    return None


def vc_holds_on(vc: Vc, spec: FiniteDomainSpec, interp: Interp | None = None) -> bool:
    return vc_counterexample(vc, spec, interp) is None
