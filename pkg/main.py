"""
Note about environment files:

- A local .env file may set QV_SOLVER, QV_TIMEOUT, QV_JOBS, QV_EREAL_ENCODING,
  QV_UNFOLD_DEPTH and QV_DEBUG. It is loaded by qverify.config on import.

- .env.example lists every key with its default. Copy it to .env and edit.

Usage:
    python main.py verify benchmarks/ex.heyvl benchmarks/die.pgcl
    python main.py oracle benchmarks/die.pgcl --range r=0..1
"""
import sys

from qverify.cli import main

if __name__ == "__main__":
    sys.exit(main())
