# qverify/cli.py
"""
Command line: `verify FILE...` and `oracle FILE`.

Exit codes: 0 all verified, 1 something refuted, 2 something unknown and
nothing refuted, 3 usage or input errors.
"""
from __future__ import annotations

import argparse
import logging
import sys
from concurrent.futures import ThreadPoolExecutor
from fractions import Fraction
from pathlib import Path
from typing import Sequence

import pandas as pd
from tqdm import tqdm

from .config import ENCODINGS, Settings, SolverConfig, load_settings
from .encodings import translate
from .errors import ConfigError, QVerifyError
from .heylo import const
from .heyvl import Program, Vc, vcgen
from .oracle import DEFAULT_ITERATIONS, FiniteDomainSpec, expectation, from_formula
from .parser import load_file, parse_formula
from .pgcl import CalcKind, PgclProgram
from .printer import show_program
from .report import (
    EXIT_ERROR,
    FileOutcome,
    exit_code,
    render_table,
    show_bound,
    summary_line,
    to_frame,
    to_json,
)
from .solver import CheckResult, Refuted, SolverSession, Unknown, check

logger = logging.getLogger(__name__)

LOG_FORMAT = "%(levelname)s %(name)s: %(message)s"


def configure_logging(verbose: bool, settings: Settings) -> None:
    level = settings.log_level
    if verbose and not settings.debug:
        level = logging.INFO
    logging.basicConfig(level=level, format=LOG_FORMAT, force=True)


def format_error(path: str, e: Exception) -> str:
    if isinstance(e, QVerifyError):
        return f"{path}:{e}" if e.span is not None else f"{path}: {e}"
    return f"{path}: {e}"


# -----------------------------
# Loading
# -----------------------------
def load_program(path: str, havoc_modified_only: bool = False) -> tuple[Program, Fraction | None]:
    """HeyVL files verify directly; pGCL files go through the frontend first."""
    loaded = load_file(path)
    if isinstance(loaded, PgclProgram):
        t = translate(loaded, havoc_modified_only)
        return t.program, t.cwp_bound
    return loaded, None


def _safe(name: str) -> str:
    return name.replace("/", "-")


# -----------------------------
# Discharging
# -----------------------------
def _guarded_check(vc: Vc, cfg: SolverConfig, session: SolverSession | None = None) -> CheckResult | QVerifyError:
    try:
        return check(vc, cfg, session=session)
    except QVerifyError as e:
        return e


def discharge(vcs: Sequence[Vc], cfg: SolverConfig, jobs: int) -> list[CheckResult | QVerifyError]:
    """Results in input order, whatever the completion order."""
    show = len(vcs) > 1 and sys.stderr.isatty()
    out: list[CheckResult | QVerifyError] = []
    with tqdm(total=len(vcs), file=sys.stderr, disable=not show, desc="verifying", unit="vc") as bar:
        if cfg.incremental:
            with SolverSession(cfg) as session:
                for vc in vcs:
                    out.append(_guarded_check(vc, cfg, session))
                    bar.update()
        else:
            with ThreadPoolExecutor(max_workers=max(jobs, 1)) as pool:
                for r in pool.map(lambda vc: _guarded_check(vc, cfg), vcs):
                    out.append(r)
                    bar.update()
    return out


def _print_human(outcomes: list[FileOutcome], frame: pd.DataFrame, verbose: bool) -> None:
    for o in outcomes:
        if o.error:
            print(f"❌ {o.error}")
        for kind, r in o.results:
            v = r.verdict
            line = f"{v.marker} {kind} {r.vc.name}: {v.label} ({r.timings.total_s:.2f}s)"
            if isinstance(v, Refuted) and v.model:
                line += f"  counterexample: {v.counterexample}"
            elif isinstance(v, Unknown):
                line += f"  ({v.reason})"
            print(line)
        if o.cwp_bound is not None:
            print(f"   cwp bound for {o.path}: {show_bound(o.cwp_bound)}")
    if verbose:
        print(render_table(frame))
    print(summary_line(frame))


def cmd_verify(args: argparse.Namespace, settings: Settings) -> int:
    cfg = settings.solver.with_overrides(
        command=args.solver,
        timeout=args.timeout,
        ereal_encoding=args.ereal_encoding,
        prune=False if args.no_prune else None,
        incremental=True if args.incremental else None,
    )
    jobs = args.jobs or settings.jobs

    outcomes: list[FileOutcome] = []
    tasks: list[tuple[FileOutcome, str, Vc]] = []
    for path in args.files:
        outcome = FileOutcome(path)
        outcomes.append(outcome)
        try:
            program, outcome.cwp_bound = load_program(path, args.havoc_modified_only)
            if args.emit_heyvl:
                target = Path(args.emit_heyvl) / f"{Path(path).stem}.heyvl"
                target.parent.mkdir(parents=True, exist_ok=True)
                target.write_text(show_program(program), encoding="utf-8")
            vcs = vcgen(program)
        except QVerifyError as e:
            outcome.error = format_error(path, e)
            continue
        except OSError as e:
            outcome.error = f"{path}: {e.strerror or e}"
            continue
        kinds = {p.name: p.kind.value for p in program.procs.values()}
        tasks.extend((outcome, kinds[vc.origin], vc) for vc in vcs)

    results = discharge([vc for _, _, vc in tasks], cfg, jobs)
    for (outcome, kind, vc), r in zip(tasks, results):
        if isinstance(r, QVerifyError):
            outcome.error = outcome.error or format_error(outcome.path, r)
            continue
        outcome.results.append((kind, r))
        if args.emit_smt and r.script is not None:
            target = Path(args.emit_smt) / f"{Path(outcome.path).stem}.{_safe(vc.name)}.smt2"
            target.parent.mkdir(parents=True, exist_ok=True)
            target.write_text(r.script.text(), encoding="utf-8")

    frame = to_frame(outcomes)
    code = exit_code(frame, outcomes)
    if args.json:
        print(to_json(frame, code, outcomes))
    else:
        _print_human(outcomes, frame, args.verbose)
    return code


# -----------------------------
# Oracle
# -----------------------------
def _literal(text: str):
    text = text.strip()
    if text in ("true", "false"):
        return text == "true"
    q = Fraction(text)
    return int(q) if q.denominator == 1 else q


def parse_range(spec: str) -> tuple[str, list]:
    """`x=0..5` or `b=false,true` or `p=0,1/2,1`."""
    name, sep, values = spec.partition("=")
    if not sep or not name.strip():
        raise ConfigError(f"bad range {spec!r}; expected NAME=LO..HI or NAME=V1,V2,...")
    try:
        if ".." in values:
            lo, hi = values.split("..", 1)
            return name.strip(), list(range(int(lo), int(hi) + 1))
        return name.strip(), [_literal(v) for v in values.split(",")]
    except ValueError:
        raise ConfigError(f"bad range {spec!r}") from None


def cmd_oracle(args: argparse.Namespace) -> int:
    prog = load_file(args.file)
    if not isinstance(prog, PgclProgram):
        raise ConfigError("the oracle evaluates pGCL programs (.pgcl)")
    if args.calc:
        kind = CalcKind(args.calc)
    elif prog.calculus is not None:
        kind = prog.calculus.kind
    else:
        kind = CalcKind.WP
    post = parse_formula(args.post) if args.post else prog.post
    if post is None:
        post = const(1)

    ranges = dict(parse_range(r) for r in args.range)
    missing = [v for v in prog.variables if v not in ranges]
    if missing:
        raise ConfigError(f"no --range for {', '.join(missing)}")
    spec = FiniteDomainSpec({v: ranges[v] for v in prog.variables})
    value = from_formula(post)
    rows = []
    for st in spec.states():
        row = dict(st)
        row[kind.value] = str(expectation(prog.body, value, kind, st, iterations=args.iterations))
        rows.append(row)
    print(pd.DataFrame(rows).to_string(index=False))
    return 0


# -----------------------------
# Entry point
# -----------------------------
def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="qverify", description="Deductive verifier for probabilistic programs")
    sub = parser.add_subparsers(dest="command", required=True)

    v = sub.add_parser("verify", help="verify .heyvl files or annotated .pgcl programs")
    v.add_argument("files", nargs="+", metavar="FILE")
    v.add_argument("--timeout", type=float, help="seconds per verification condition (default 10, env QV_TIMEOUT)")
    v.add_argument("--solver", help="solver command line (default 'z3 -in -smt2', env QV_SOLVER)")
    v.add_argument("--emit-smt", metavar="DIR", help="write one .smt2 file per verification condition")
    v.add_argument("--emit-heyvl", metavar="DIR", help="write the HeyVL produced for each input")
    v.add_argument("--no-prune", action="store_true", help="skip formula pruning")
    v.add_argument("--jobs", type=int, help="parallel solver sessions (env QV_JOBS)")
    v.add_argument("--ereal-encoding", choices=ENCODINGS, help="SMT encoding of extended reals")
    v.add_argument("--havoc-modified-only", action="store_true", help="loop rules havoc only modified variables")
    v.add_argument("--incremental", action="store_true", help="reuse one solver process with push/pop")
    v.add_argument("--json", action="store_true", help="machine-readable report")
    v.add_argument("-v", "--verbose", action="store_true")

    o = sub.add_parser("oracle", help="print brute-force expectation values of a pGCL program")
    o.add_argument("file", metavar="FILE")
    o.add_argument("--range", action="append", default=[], metavar="NAME=LO..HI", help="value range per variable")
    o.add_argument("--post", help="post-expectation (default: the program's @post)")
    o.add_argument("--calc", choices=[k.value for k in CalcKind], help="calculus (default: the program's)")
    o.add_argument("--iterations", type=int, default=DEFAULT_ITERATIONS, help="loop unfolding depth")
    o.add_argument("-v", "--verbose", action="store_true")
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        settings = load_settings()
    except ConfigError as e:
        print(f"❌ configuration: {e}")
        return EXIT_ERROR
    configure_logging(args.verbose, settings)
    try:
        if args.command == "verify":
            return cmd_verify(args, settings)
        return cmd_oracle(args)
    except QVerifyError as e:
        print(f"❌ {format_error(getattr(args, 'file', 'qverify'), e)}")
        return EXIT_ERROR
    except OSError as e:
        print(f"❌ {e}")
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
