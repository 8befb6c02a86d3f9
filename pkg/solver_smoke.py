# solver_smoke.py
# Checks that the configured solver starts and answers a sat and an unsat query.
from dataclasses import replace

from qverify.config import load_settings
from qverify.errors import QVerifyError
from qverify.solver import run_script

SAT_QUERY = """
(declare-const x Real)
(assert (> x 1.0))
(check-sat)
"""

UNSAT_QUERY = """
(declare-const x Real)
(assert (> x 1.0))
(assert (< x 0.0))
(check-sat)
"""

settings = load_settings()
cfg = replace(settings.solver, timeout=5.0)
print("solver:", " ".join(cfg.command))

try:
    for name, query, expected in (("sat", SAT_QUERY, "sat"), ("unsat", UNSAT_QUERY, "unsat")):
        answer = run_script(query, cfg)
        status = answer.status if answer is not None else "timeout"
        if status == expected:
            print(f"{name} query OK")
        else:
            print(f"ERROR: {name} query answered {status}")
except QVerifyError as e:
    print("ERROR:", e)
