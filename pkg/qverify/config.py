# qverify/config.py
from __future__ import annotations

import logging
import os
import shlex
from dataclasses import dataclass, field, replace
from fractions import Fraction

from dotenv import load_dotenv

from .errors import ConfigError

load_dotenv()  # local .env support; process env wins

DEFAULT_SOLVER = "z3 -in -smt2"
DEFAULT_TIMEOUT = 10.0
DEFAULT_UNFOLD_DEPTH = 32
ENCODINGS = ("pair", "datatype")


# -----------------------------
# ENV helpers
# -----------------------------
def _eget(key: str, default: str = "") -> str:
    return str(os.getenv(key, default)).strip()


def get_debug_flag() -> bool:
    # Turn debug on only when explicitly enabled (never by default)
    return _eget("QV_DEBUG", "").lower() in ("1", "true", "yes", "on")


def _positive_number(key: str, raw: str) -> float:
    try:
        value = float(Fraction(raw))
    except (ValueError, ZeroDivisionError):
        raise ConfigError(f"{key} must be a number, got {raw!r}") from None
    if value <= 0:
        raise ConfigError(f"{key} must be positive, got {raw!r}")
    return value


def _positive_int(key: str, raw: str) -> int:
    try:
        value = int(raw)
    except ValueError:
        raise ConfigError(f"{key} must be an integer, got {raw!r}") from None
    if value < 1:
        raise ConfigError(f"{key} must be at least 1, got {raw!r}")
    return value


# -----------------------------
# Solver settings
# -----------------------------
@dataclass(frozen=True)
class SolverConfig:
    command: tuple[str, ...] = tuple(shlex.split(DEFAULT_SOLVER))
    timeout: float = DEFAULT_TIMEOUT
    ereal_encoding: str = "pair"
    prune: bool = True
    incremental: bool = False
    unfold_depth: int = DEFAULT_UNFOLD_DEPTH
    guard_timeout: float = 1.0

    def __post_init__(self):
        if self.ereal_encoding not in ENCODINGS:
            raise ConfigError(f"unknown EReal encoding {self.ereal_encoding!r} (expected pair or datatype)")
        if not self.command:
            raise ConfigError("empty solver command")

    def with_overrides(self, **changes) -> "SolverConfig":
        clean = {k: v for k, v in changes.items() if v is not None}
        if isinstance(clean.get("command"), str):
            clean["command"] = tuple(shlex.split(clean["command"]))
        return replace(self, **clean)


@dataclass(frozen=True)
class Settings:
    solver: SolverConfig = field(default_factory=SolverConfig)
    jobs: int = 1
    debug: bool = False

    @property
    def log_level(self) -> int:
        return logging.DEBUG if self.debug else logging.WARNING


def load_settings() -> Settings:
    """
    Read QV_* keys from the environment (.env already loaded):
    - QV_SOLVER: solver command line
    - QV_TIMEOUT: seconds per verification condition
    - QV_JOBS: parallel solver sessions
    - QV_EREAL_ENCODING: pair | datatype
    - QV_UNFOLD_DEPTH: ground instances per recursive domain axiom
    - QV_DEBUG: truthy flag for debug logging
    """
    solver = SolverConfig(
        command=tuple(shlex.split(_eget("QV_SOLVER", DEFAULT_SOLVER) or DEFAULT_SOLVER)),
        timeout=_positive_number("QV_TIMEOUT", _eget("QV_TIMEOUT", str(DEFAULT_TIMEOUT))),
        ereal_encoding=_eget("QV_EREAL_ENCODING", "pair") or "pair",
        unfold_depth=_positive_int("QV_UNFOLD_DEPTH", _eget("QV_UNFOLD_DEPTH", str(DEFAULT_UNFOLD_DEPTH))),
    )
    return Settings(
        solver=solver,
        jobs=_positive_int("QV_JOBS", _eget("QV_JOBS", "1")),
        debug=get_debug_flag(),
    )
