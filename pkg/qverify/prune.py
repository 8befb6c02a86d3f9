# qverify/prune.py
from __future__ import annotations

import logging
from dataclasses import replace
from typing import Callable, Mapping

from .heylo import BINARY, QUANT, UNARY, CoEmbed, Embed, Formula, simplify
from .heyvl import Vc
from .terms import FALSE, Const, Term, Ty

logger = logging.getLogger(__name__)

# guard_check(cond, types) is True only when cond is certainly unsatisfiable
GuardCheck = Callable[[Term, Mapping[str, Ty]], bool]


class _Pruner:
    def __init__(self, guard_check: GuardCheck, types: Mapping[str, Ty]):
        self.guard_check = guard_check
        self.types = dict(types)
        self.verdicts: dict[tuple, bool] = {}
        self.memo: dict[tuple, Formula] = {}
        self.rewrites = 0

    def unsat(self, cond: Term, bound: Mapping[str, Ty]) -> bool:
        if isinstance(cond, Const):
            return False
        key = (cond, tuple(sorted(bound.items(), key=lambda kv: kv[0])))
        if key not in self.verdicts:
            self.verdicts[key] = self.guard_check(cond, {**self.types, **bound})
        return self.verdicts[key]

    def go(self, f: Formula, bound: Mapping[str, Ty]) -> Formula:
        key = (id(f), tuple(sorted(bound.items(), key=lambda kv: kv[0])))
        hit = self.memo.get(key)
        if hit is not None:
            return hit
        out = self._step(f, bound)
        self.memo[key] = out
        return out

    def _step(self, f: Formula, bound: Mapping[str, Ty]) -> Formula:
        if isinstance(f, (Embed, CoEmbed)):
            if self.unsat(f.cond, bound):
                self.rewrites += 1
                return type(f)(FALSE)
            return f
        if isinstance(f, BINARY):
            left, right = self.go(f.left, bound), self.go(f.right, bound)
            return f if (left is f.left and right is f.right) else type(f)(left, right)
        if isinstance(f, UNARY):
            arg = self.go(f.arg, bound)
            return f if arg is f.arg else type(f)(arg)
        if isinstance(f, QUANT):
            body = self.go(f.body, {**bound, f.var: f.ty})
            return f if body is f.body else type(f)(f.var, f.ty, body, f.span)
        return f


def prune(f: Formula, guard_check: GuardCheck | None = None, types: Mapping[str, Ty] | None = None) -> Formula:
    """simplify, then replace ?(b) / !?(b) with constants wherever guard_check shows b unsatisfiable."""
    f = simplify(f)
    if guard_check is None:
        return f
    pruner = _Pruner(guard_check, types or {})
    out = pruner.go(f, {})
    logger.debug("pruning: %d guard checks, %d rewrites", len(pruner.verdicts), pruner.rewrites)
    return simplify(out) if pruner.rewrites else out


def prune_vc(vc: Vc, guard_check: GuardCheck | None = None) -> Vc:
    types = vc.ctx.variables if vc.ctx is not None else {}
    return replace(vc, lhs=prune(vc.lhs, guard_check, types), rhs=prune(vc.rhs, guard_check, types))
