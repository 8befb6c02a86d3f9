# qverify/solver.py
"""
SMT solver processes and verdicts.

By default every Vc gets a fresh `z3 -in -smt2` child process fed the whole
script on stdin; `SolverSession` keeps one process alive and scopes each
script with push/pop.
"""
from __future__ import annotations

import logging
import queue
import re
import subprocess
import threading
from dataclasses import dataclass, field, replace
from fractions import Fraction
from time import perf_counter
from typing import Any, Mapping, Sequence

from tenacity import retry, retry_if_exception, stop_after_attempt, wait_fixed

from .config import SolverConfig
from .domains import DomainDecl, TypeContext
from .ereal import INF, EReal
from .errors import MalformedSolverOutput, QVerifyError, SolverSpawnFailure
from .heyvl import Vc
from .prune import GuardCheck, prune_vc
from .smt import HEADER, SmtScript, lower_condition, lower_vc, unquote
from .terms import Term, Ty

logger = logging.getLogger(__name__)

END_MARKER = "qv-end"


# -----------------------------
# Verdicts
# -----------------------------
@dataclass(frozen=True)
class Verified:
    label = "verified"
    marker = "✅"


@dataclass(frozen=True)
class Refuted:
    model: dict[str, Any] = field(default_factory=dict)
    label = "refuted"
    marker = "❌"

    @property
    def counterexample(self) -> str:
        return ", ".join(f"{k}={_show_value(v)}" for k, v in self.model.items())


@dataclass(frozen=True)
class Unknown:
    reason: str = "unknown"
    label = "unknown"
    marker = "❓"


Verdict = Verified | Refuted | Unknown


def _show_value(v: Any) -> str:
    if isinstance(v, bool):
        return "true" if v else "false"
    return str(v)


@dataclass(frozen=True)
class Timings:
    prune_s: float = 0.0
    lower_s: float = 0.0
    solve_s: float = 0.0

    @property
    def total_s(self) -> float:
        return self.prune_s + self.lower_s + self.solve_s

    def share(self, part: float) -> float:
        return 100.0 * part / self.total_s if self.total_s > 0 else 0.0

    @property
    def pruning_pct(self) -> float:
        return self.share(self.prune_s)

    @property
    def sat_pct(self) -> float:
        return self.share(self.solve_s)


@dataclass(frozen=True)
class CheckResult:
    vc: Vc
    verdict: Verdict
    timings: Timings
    script: SmtScript | None = None


# -----------------------------
# S-expressions
# -----------------------------
_TOKEN = re.compile(r'\s+|;[^\n]*|(\()|(\))|(\|[^|]*\|)|("(?:[^"]|"")*")|([^\s()|";]+)')


def parse_sexprs(text: str) -> list[Any]:
    """Nested lists of atom strings; quoted symbols keep their bars."""
    stack: list[list[Any]] = [[]]
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            raise MalformedSolverOutput(f"unreadable solver output near {text[pos:pos + 20]!r}")
        pos = m.end()
        opened, closed, quoted, string, atom = m.groups()
        if opened:
            stack.append([])
        elif closed:
            if len(stack) == 1:
                raise MalformedSolverOutput("unbalanced ')' in solver output")
            done = stack.pop()
            stack[-1].append(done)
        elif quoted or string or atom:
            stack[-1].append(quoted or string or atom)
    if len(stack) != 1:
        raise MalformedSolverOutput("unbalanced '(' in solver output")
    return stack[0]


def _number(atom: str) -> int | Fraction | None:
    if re.fullmatch(r"\d+", atom):
        return int(atom)
    if re.fullmatch(r"\d+\.\d*", atom):
        return Fraction(atom)
    return None


def sexpr_value(x: Any) -> Any:
    """Solver value -> python value; anything unrecognised stays as SMT text."""
    if isinstance(x, str):
        if x in ("true", "false"):
            return x == "true"
        n = _number(x)
        return n if n is not None else unquote(x)
    if len(x) == 2 and x[0] == "-":
        inner = sexpr_value(x[1])
        if isinstance(inner, (int, Fraction)):
            return -inner
    if len(x) == 3 and x[0] == "/":
        a, b = sexpr_value(x[1]), sexpr_value(x[2])
        if isinstance(a, (int, Fraction)) and isinstance(b, (int, Fraction)) and b != 0:
            return Fraction(a) / Fraction(b)
    if len(x) == 2 and x[0] == "ereal_fin":
        inner = sexpr_value(x[1])
        if isinstance(inner, (int, Fraction)):
            return EReal(Fraction(inner))
    return show_sexpr(x)


def show_sexpr(x: Any) -> str:
    return x if isinstance(x, str) else f"({' '.join(show_sexpr(y) for y in x)})"


# -----------------------------
# Answers
# -----------------------------
@dataclass(frozen=True)
class SolverAnswer:
    status: str
    values: dict[str, Any] = field(default_factory=dict)


def read_answer(output: str, stderr: str = "") -> SolverAnswer:
    forms = parse_sexprs(output)
    if not forms:
        raise MalformedSolverOutput(f"solver produced no answer{': ' + stderr.strip() if stderr.strip() else ''}")
    status = forms[0]
    if isinstance(status, list):
        raise MalformedSolverOutput(f"solver error: {show_sexpr(status)}")
    if status not in ("sat", "unsat", "unknown"):
        raise MalformedSolverOutput(f"unexpected solver answer {status!r}")
    values: dict[str, Any] = {}
    if status == "sat" and len(forms) > 1 and isinstance(forms[1], list):
        for pair in forms[1]:
            if isinstance(pair, list) and len(pair) == 2 and isinstance(pair[0], str):
                values[pair[0]] = sexpr_value(pair[1])
    return SolverAnswer(status, values)


def _model(script: SmtScript, values: Mapping[str, Any]) -> dict[str, Any]:
    """Group component values back into program variables."""
    grouped: dict[str, list[Any]] = {}
    for sym, var in script.model_symbols.items():
        grouped.setdefault(var, []).append(values.get(sym))
    out: dict[str, Any] = {}
    for var, parts in grouped.items():
        if len(parts) == 2:
            real, is_inf = parts
            out[var] = INF if is_inf else EReal(Fraction(real or 0))
        elif parts[0] == "ereal_inf":
            out[var] = INF
        else:
            out[var] = parts[0]
    return out


def verdict_of(answer: SolverAnswer, script: SmtScript) -> Verdict:
    if answer.status == "unsat":
        return Verified()
    if answer.status == "sat":
        return Refuted(_model(script, answer.values))
    return Unknown("solver returned unknown")


# -----------------------------
# Processes
# -----------------------------
def _transient(exc: BaseException) -> bool:
    return isinstance(exc, OSError) and not isinstance(exc, FileNotFoundError)


@retry(retry=retry_if_exception(_transient), stop=stop_after_attempt(3), wait=wait_fixed(0.2), reraise=True)
def _popen(command: Sequence[str]) -> subprocess.Popen:
    return subprocess.Popen(
        list(command),
        stdin=subprocess.PIPE,
        stdout=subprocess.PIPE,
        stderr=subprocess.PIPE,
        text=True,
    )


def spawn(command: Sequence[str]) -> subprocess.Popen:
    logger.debug("spawning solver: %s", " ".join(command))
    try:
        return _popen(command)
    except FileNotFoundError:
        raise SolverSpawnFailure(f"solver executable not found: {command[0]}") from None
    except OSError as e:
        raise SolverSpawnFailure(f"could not start solver {command[0]}: {e}") from e


def run_script(text: str, cfg: SolverConfig) -> SolverAnswer | None:
    """One-shot solver run; None on timeout."""
    proc = spawn(cfg.command)
    try:
        out, err = proc.communicate(text, timeout=cfg.timeout)
    except subprocess.TimeoutExpired:
        proc.kill()
        proc.communicate()
        return None
    return read_answer(out, err)


def solve(script: SmtScript, cfg: SolverConfig) -> Verdict:
    answer = run_script(script.text(), cfg)
    if answer is None:
        return Unknown(f"timeout after {cfg.timeout:g}s")
    return verdict_of(answer, script)


class SolverSession:
    """One long-lived solver process; each script runs between push and pop."""

    def __init__(self, cfg: SolverConfig):
        self.cfg = cfg
        self.proc: subprocess.Popen | None = None
        self.lines: queue.Queue[str | None] = queue.Queue()

    def __enter__(self) -> "SolverSession":
        return self

    def __exit__(self, *exc) -> None:
        self.close()

    def _start(self) -> subprocess.Popen:
        proc = spawn(self.cfg.command)
        self.lines = queue.Queue()
        threading.Thread(target=self._pump, args=(proc, self.lines), daemon=True).start()
        proc.stdin.write("\n".join(HEADER) + "\n")
        self.proc = proc
        return proc

    @staticmethod
    def _pump(proc: subprocess.Popen, lines: queue.Queue) -> None:
        for line in proc.stdout:
            lines.put(line)
        lines.put(None)

    def check(self, script: SmtScript) -> Verdict:
        proc = self.proc or self._start()
        payload = ["(push 1)", *script.declarations, *script.definitions, *script.query,
                   *script.commands, "(pop 1)", f'(echo "{END_MARKER}")']
        try:
            proc.stdin.write("\n".join(payload) + "\n")
            proc.stdin.flush()
        except OSError as e:
            self.close()
            raise SolverSpawnFailure(f"solver session died: {e}") from e

        deadline = perf_counter() + self.cfg.timeout
        collected: list[str] = []
        while True:
            remaining = deadline - perf_counter()
            try:
                line = self.lines.get(timeout=max(remaining, 0.0))
            except queue.Empty:
                self.close()
                return Unknown(f"timeout after {self.cfg.timeout:g}s")
            if line is None:
                self.close()
                raise MalformedSolverOutput("solver session ended unexpectedly")
            if line.strip().strip('"') == END_MARKER:
                break
            collected.append(line)
        return verdict_of(read_answer("".join(collected)), script)

    def close(self) -> None:
        if self.proc is not None:
            self.proc.kill()
            self.proc.wait()
            self.proc = None


# -----------------------------
# Pipeline
# -----------------------------
def make_guard_check(cfg: SolverConfig, ctx: TypeContext) -> GuardCheck:
    """Quick unsat check for guard conditions; any failure counts as 'maybe satisfiable'."""
    guard_cfg = replace(cfg, timeout=cfg.guard_timeout)

    def guard_check(cond: Term, types: Mapping[str, Ty]) -> bool:
        try:
            answer = run_script(lower_condition(cond, types, ctx).text(), guard_cfg)
        except QVerifyError as e:
            logger.debug("guard check skipped: %s", e)
            return False
        return answer is not None and answer.status == "unsat"

    return guard_check


def check(
    vc: Vc,
    cfg: SolverConfig,
    domains: Sequence[DomainDecl] | None = None,
    session: SolverSession | None = None,
) -> CheckResult:
    """prune -> lower -> solve, with wall-clock time per phase."""
    t0 = perf_counter()
    if cfg.prune:
        ctx = vc.ctx or TypeContext(domains or ())
        vc = prune_vc(vc, make_guard_check(cfg, ctx))
    t1 = perf_counter()
    script = lower_vc(vc, domains, cfg.ereal_encoding, cfg.unfold_depth)
    t2 = perf_counter()
    verdict = session.check(script) if session is not None else solve(script, cfg)
    t3 = perf_counter()
    timings = Timings(t1 - t0, t2 - t1, t3 - t2)
    logger.info("%s: %s in %.3fs (pruning %.0f%%, sat %.0f%%)",
                vc.name, verdict.label, timings.total_s, timings.pruning_pct, timings.sat_pct)
    return CheckResult(vc, verdict, timings, script)


def solver_available(cfg: SolverConfig) -> bool:
    try:
        answer = run_script("(check-sat)\n", replace(cfg, timeout=5.0))
    except QVerifyError:
        return False
    return answer is not None and answer.status == "sat"
