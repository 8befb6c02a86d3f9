# qverify/printer.py
from __future__ import annotations

from fractions import Fraction

from .domains import DomainDecl
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
    Program,
    Reward,
    Seq,
    Stmt,
    ValidateStmt,
    VarAssign,
)
from .terms import BOOL, App, Const, Term, Var

# binding strength, loosest first
QUANT, IMPL, MAX, MIN, OR, AND, NOT, CMP, SUM, PROD, UNARY, ATOM = range(1, 13)

_INFIX = {
    "+": (SUM, SUM, PROD),
    "-": (SUM, SUM, PROD),
    ".-": (SUM, SUM, PROD),
    "*": (PROD, PROD, UNARY),
    "/": (PROD, PROD, UNARY),
    "&&": (AND, AND, NOT),
    "||": (OR, OR, AND),
    **{op: (CMP, SUM, SUM) for op in ("<", "<=", ">", ">=", "==", "!=")},
}


def _wrap(text: str, level: int, required: int) -> str:
    return f"({text})" if level < required else text


# -----------------------------
# Terms
# -----------------------------
def _const(c: Const) -> tuple[str, int]:
    if c.ty == BOOL:
        return ("true" if c.value else "false"), ATOM
    q = Fraction(c.value)
    if q.denominator == 1:
        return str(q.numerator), (ATOM if q >= 0 else UNARY)
    return f"{q.numerator}/{q.denominator}", PROD


def _term(t: Term) -> tuple[str, int]:
    if isinstance(t, Const):
        return _const(t)
    if isinstance(t, Var):
        return t.name, ATOM
    assert isinstance(t, App)
    f, args = t.func, t.args
    if f in _INFIX:
        level, left, right = _INFIX[f]
        return f"{show_term(args[0], left)} {f} {show_term(args[1], right)}", level
    if f == "!":
        return "!" + show_term(args[0], NOT), NOT
    if f == "neg":
        return "-" + show_term(args[0], UNARY), UNARY
    if f == "ite":
        c, a, b = args
        if a == Const(1, a.ty) and b == Const(0, b.ty) and isinstance(a, Const) and isinstance(b, Const):
            return f"[{show_term(c)}]", ATOM
        return f"ite({show_term(c)}, {show_term(a)}, {show_term(b)})", ATOM
    return f"{f}({', '.join(show_term(a) for a in args)})", ATOM


def show_term(t: Term, required: int = 0) -> str:
    text, level = _term(t)
    return _wrap(text, level, required)


# -----------------------------
# Formulas
# -----------------------------
_BINARY = {
    Add: ("+", SUM, SUM, PROD),
    Mul: ("*", PROD, PROD, UNARY),
    Min: ("/\\", MIN, MIN, OR),
    Max: ("\\/", MAX, MAX, MIN),
    Impl: ("==>", IMPL, MAX, QUANT),
    CoImpl: ("<~~", IMPL, MAX, QUANT),
}

_UNARY = {Neg: "\\neg", CoNeg: "\\coneg", Validate: "\\validate", CoValidate: "\\covalidate"}


def _formula(f: Formula) -> tuple[str, int]:
    if isinstance(f, Atom):
        return _term(f.term)
    if isinstance(f, Embed):
        return f"?({show_term(f.cond)})", ATOM
    if isinstance(f, CoEmbed):
        return f"!?({show_term(f.cond)})", ATOM
    if isinstance(f, Infinity):
        return "\\infty", ATOM
    kind = type(f)
    if kind in _BINARY:
        op, level, left, right = _BINARY[kind]
        return f"{show(f.left, left)} {op} {show(f.right, right)}", level
    if kind in _UNARY:
        return f"{_UNARY[kind]}({show(f.arg)})", ATOM
    if isinstance(f, (Inf, Sup)):
        word = "inf" if isinstance(f, Inf) else "sup"
        return f"{word} {f.var}: {f.ty}. {show(f.body, QUANT)}", QUANT
    raise TypeError(f"not a formula: {f!r}")


def show(f: Formula, required: int = 0) -> str:
    text, level = _formula(f)
    return _wrap(text, level, required)


# -----------------------------
# Statements
# -----------------------------
IND = "    "


def _rhs(rhs) -> str:
    if isinstance(rhs, Flip):
        return f"flip({show_term(rhs.p)})"
    if isinstance(rhs, Dist):
        return " + ".join(f"{show_term(p, PROD)} * <{show_term(t, SUM)}>" for p, t in rhs.branches)
    return show_term(rhs)


def _block(s: Stmt, depth: int) -> list[str]:
    body = s.stmts if isinstance(s, Seq) else (s,)
    lines = ["{"]
    for st in body:
        lines.extend(IND + line for line in show_stmt_lines(st, depth + 1))
    lines.append("}")
    return lines


def _join_block(head: str, block_lines: list[str]) -> list[str]:
    return [f"{head}{block_lines[0]}"] + block_lines[1:]


def show_stmt_lines(s: Stmt, depth: int = 0) -> list[str]:
    if isinstance(s, Seq):
        out: list[str] = []
        for st in s.stmts:
            out.extend(show_stmt_lines(st, depth))
        return out
    if isinstance(s, Declare):
        return [f"var {s.name}: {s.ty}"]
    if isinstance(s, VarAssign):
        if s.ty is not None:
            return [f"var {s.name}: {s.ty} = {_rhs(s.rhs)}"]
        return [f"{s.name} = {_rhs(s.rhs)}"]
    if isinstance(s, Call):
        call = f"{s.proc}({', '.join(show_term(a) for a in s.args)})"
        return [f"{', '.join(s.outs)} = {call}" if s.outs else call]
    if isinstance(s, Reward):
        return [f"reward {show_term(s.amount)}"]
    simple = {Assert: "assert", CoAssert: "coassert", Assume: "assume", CoAssume: "coassume"}
    if type(s) in simple:
        return [f"{simple[type(s)]} {show(s.formula)}"]
    if isinstance(s, Havoc):
        return [f"havoc {', '.join(s.names)}"]
    if isinstance(s, CoHavoc):
        return [f"cohavoc {', '.join(s.names)}"]
    if isinstance(s, ValidateStmt):
        return ["validate"]
    if isinstance(s, CoValidateStmt):
        return ["covalidate"]
    if isinstance(s, IfBool):
        lines = _join_block(f"if ({show_term(s.cond)}) ", _block(s.then, depth))
        if not (isinstance(s.orelse, Seq) and not s.orelse.stmts):
            els = _block(s.orelse, depth)
            lines[-1] = f"}} else {els[0]}"
            lines.extend(els[1:])
        return lines
    if isinstance(s, (Demonic, Angelic)):
        word = "demonic" if isinstance(s, Demonic) else "angelic"
        lines = _join_block(f"if {word} ", _block(s.left, depth))
        els = _block(s.right, depth)
        lines[-1] = f"}} else {els[0]}"
        lines.extend(els[1:])
        return lines
    raise TypeError(f"not a statement: {s!r}")


def show_stmt(s: Stmt) -> str:
    return "\n".join(show_stmt_lines(s))


# -----------------------------
# Declarations
# -----------------------------
def _params(ps) -> str:
    return ", ".join(f"{n}: {t}" for n, t in ps)


def show_procedure(p: Procedure) -> str:
    lines = [f"{p.kind.value} {p.name}({_params(p.inputs)}) -> ({_params(p.outputs)})"]
    lines += [f"{IND}pre {show(f)}" for f in p.pres]
    lines += [f"{IND}post {show(f)}" for f in p.posts]
    if p.body is not None:
        lines += _block(p.body, 0)
    return "\n".join(lines)


def show_domain(d: DomainDecl) -> str:
    lines = [f"domain {d.name} {{"]
    for fn in d.funcs:
        lines.append(f"{IND}func {fn.name}({_params(fn.params)}): {fn.result}")
    for ax in d.axioms:
        binders = f"forall {_params(ax.binders)} . " if ax.binders else ""
        lines.append(f"{IND}axiom {ax.name} {binders}{show_term(ax.body)}")
    if d.default is not None:
        lines.append(f"{IND}default {show_term(d.default)}")
    lines.append("}")
    return "\n".join(lines)


def show_program(program: Program) -> str:
    parts = [show_domain(d) for d in program.domains]
    parts += [show_procedure(p) for p in program.procs.values()]
    return "\n\n".join(parts) + "\n"
