"""External MILP solver integration via LP files.

The command template is user configuration, e.g.::

    python tools/lp_solver.py {lp} {sol}
    scip -c "read {lp} optimize write solution {sol} quit"

The solution-file dialect parsed back is deliberately small so that
common solver outputs can be adapted with a one-line wrapper:

* ``# ...`` comment lines are ignored
* ``=obj= <value>`` optionally reports the objective
* ``=infeasible=`` marks a proven-infeasible model
* every other non-empty line is ``<variable name> <value>``; variables
  not mentioned default to 0

Reported-optimal solutions are re-verified against the model before they
are returned; an unverifiable file is a hard error, never a result.
"""

from __future__ import annotations

import shlex
import subprocess
import tempfile
import time
from pathlib import Path

from .milp import MilpModel, write_lp
from .solver import (
    Solution,
    SolveStatus,
    SolverConfig,
    SolverError,
    objective_value,
    verify_solution,
)


def parse_solution_file(text: str) -> tuple[bool, dict[str, float]]:
    """Returns (infeasible, name->value)."""
    values: dict[str, float] = {}
    for raw in text.splitlines():
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if line == "=infeasible=":
            return True, {}
        if line.startswith("=obj="):
            continue  # objective is recomputed from the model
        parts = line.split()
        if len(parts) < 2:
            raise SolverError(f"unparseable solution line {raw!r}")
        try:
            values[parts[0]] = float(parts[1])
        except ValueError as exc:
            raise SolverError(f"unparseable solution line {raw!r}") from exc
    return False, values


def run_external(model: MilpModel, config: SolverConfig) -> Solution:
    config.validate()
    start = time.monotonic()
    with tempfile.TemporaryDirectory(prefix="degreeplan_") as tmp:
        lp_path = Path(tmp) / "model.lp"
        sol_path = Path(tmp) / "model.sol"
        lp_path.write_text(write_lp(model))
        command = config.external_command.format(lp=lp_path, sol=sol_path)
        proc = subprocess.run(
            shlex.split(command),
            capture_output=True,
            text=True,
            timeout=config.time_limit,
        )
        if proc.returncode != 0:
            raise SolverError(
                f"external solver failed (exit {proc.returncode}): {proc.stderr.strip()[:500]}"
            )
        if not sol_path.exists():
            if "infeasible" in (proc.stdout + proc.stderr).lower():
                return Solution(status=SolveStatus.INFEASIBLE, solve_time=time.monotonic() - start)
            raise SolverError("external solver wrote no solution file")
        infeasible, values = parse_solution_file(sol_path.read_text())
    elapsed = time.monotonic() - start
    if infeasible:
        return Solution(status=SolveStatus.INFEASIBLE, solve_time=elapsed)
    full = {var.name: values.get(var.name, 0.0) for var in model.variables}
    verify_solution(model, full, config.tolerance)
    return Solution(
        status=SolveStatus.OPTIMAL,
        objective=objective_value(model, full),
        values=full,
        solve_time=elapsed,
    )
