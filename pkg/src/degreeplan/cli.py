"""Operator command line.

Subcommands: ``validate`` (catalog diagnostics), ``mine`` (historical
records -> rules.csv), ``plan`` (one-shot optimization), ``serve``
(HTTP service).  Exit codes: 0 success, 1 user error, 2 infeasible,
3 internal fault.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path
from typing import Optional

from .builder import (
    ConfigurationError,
    GradeEstimates,
    InfeasibleByConstruction,
    Preferences,
    Priority,
    build_model,
)
from .catalog import CatalogError, load_catalog, parse_transcript, validate_catalog
from .milp import write_lp
from .planning import decode, render_text, validate
from .rules import GradeDataset, RuleSet, mine_rules, predict, read_rules_csv, write_rules_csv
from .solver import Backend, SolverConfig, SolverError, SolveStatus, solve
from .terms import TermError, term_index

EXIT_OK = 0
EXIT_USER_ERROR = 1
EXIT_INFEASIBLE = 2
EXIT_INTERNAL = 3


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="degreeplan")
    sub = parser.add_subparsers(dest="command", required=True)

    p_validate = sub.add_parser("validate", help="check a catalog directory for problems")
    p_validate.add_argument("--catalog", required=True, help="catalog directory")

    p_mine = sub.add_parser("mine", help="mine grade-prediction rules from records.csv")
    p_mine.add_argument("--records", required=True)
    p_mine.add_argument("--out", required=True, help="rules.csv output path")
    p_mine.add_argument("--min-support", type=float, default=0.005)
    p_mine.add_argument("--min-confidence", type=float, default=0.90)

    p_plan = sub.add_parser("plan", help="compute an optimal course plan")
    p_plan.add_argument("--catalog", required=True)
    p_plan.add_argument("--transcript", required=True)
    p_plan.add_argument("--current-term", help="term token, e.g. FA2023")
    p_plan.add_argument("--objective", choices=["gpa", "time"], default="gpa")
    p_plan.add_argument("--honors", action="store_true")
    p_plan.add_argument("--summers-off", action="store_true")
    p_plan.add_argument("--max-per-term", type=int)
    p_plan.add_argument("--thesis-max", type=int)
    p_plan.add_argument("--desire", nargs="*", default=[], metavar="CODE")
    p_plan.add_argument("--reject", nargs="*", default=[], metavar="CODE")
    p_plan.add_argument("--pin", nargs="*", default=[], metavar="CODE=TOKEN")
    p_plan.add_argument("--concentration")
    p_plan.add_argument("--rules", help="rules.csv for grade prediction")
    p_plan.add_argument("--solver", choices=["internal", "external"], default="internal")
    p_plan.add_argument("--solver-command", help="external command with {lp} and {sol}")
    p_plan.add_argument("--lp-out", help="also write the model as an LP file")
    p_plan.add_argument("--time-limit", type=float, default=600.0)

    p_serve = sub.add_parser("serve", help="start the HTTP service")
    p_serve.add_argument("--catalog", required=True)
    p_serve.add_argument("--rules")
    p_serve.add_argument("--host", default="127.0.0.1")
    p_serve.add_argument("--port", type=int, default=8000)
    return parser


def _cmd_validate(args) -> int:
    catalog = load_catalog(args.catalog)
    diagnostics = validate_catalog(catalog)
    for diag in diagnostics:
        print(diag)
    if diagnostics:
        return EXIT_USER_ERROR
    print(f"catalog ok: {len(catalog.courses)} courses, {len(catalog.groups)} groups")
    return EXIT_OK


def _cmd_mine(args) -> int:
    dataset = GradeDataset.from_records_csv(Path(args.records).read_text())
    ruleset = mine_rules(dataset, args.min_support, args.min_confidence)
    Path(args.out).write_text(write_rules_csv(ruleset))
    print(f"mined {len(ruleset)} rules from {dataset.n_students} students")
    return EXIT_OK


def _cmd_plan(args) -> int:
    catalog = load_catalog(args.catalog)
    diagnostics = validate_catalog(catalog)
    if diagnostics:
        for diag in diagnostics:
            print(diag, file=sys.stderr)
        return EXIT_USER_ERROR
    current = term_index(args.current_term, catalog.anchor) if args.current_term else None
    transcript = parse_transcript(Path(args.transcript).read_text(), catalog, current)

    pins = {}
    for item in args.pin:
        if "=" not in item:
            raise CatalogError(f"--pin expects CODE=TOKEN, got {item!r}")
        code, token = item.split("=", 1)
        pins[code] = term_index(token, catalog.anchor)
    prefs = Preferences(
        objective_priority=Priority(args.objective),
        honors=args.honors,
        summers_off=args.summers_off,
        max_courses_per_term=args.max_per_term,
        thesis_companion_max=args.thesis_max,
        desired=set(args.desire),
        rejected=set(args.reject),
        pins=pins,
        concentration=args.concentration,
    )
    estimates: Optional[GradeEstimates] = None
    if args.rules:
        ruleset = read_rules_csv(Path(args.rules).read_text())
        estimates = predict(ruleset, transcript.grades())

    model, varmap = build_model(catalog, transcript, prefs, estimates)
    if args.lp_out:
        Path(args.lp_out).write_text(write_lp(model))
    config = SolverConfig(
        backend=Backend(args.solver),
        external_command=args.solver_command,
        time_limit=args.time_limit,
    )
    solution = solve(model, config)
    if solution.status is SolveStatus.INFEASIBLE:
        print("infeasible: no schedule satisfies all constraints", file=sys.stderr)
        return EXIT_INFEASIBLE
    if solution.status is SolveStatus.TIME_LIMIT:
        print("solver hit its limit before proving optimality", file=sys.stderr)
        return EXIT_INTERNAL
    plan = decode(solution, varmap, catalog, estimates)
    violations = validate(plan, catalog, transcript, prefs, estimates)
    if violations:
        for violation in violations:
            print(f"internal fault: {violation}", file=sys.stderr)
        return EXIT_INTERNAL
    n_vars, n_bin, n_cont, n_rows = model.stats()
    print(render_text(plan, catalog, estimates), end="")
    print(
        f"[model: {n_vars} vars ({n_bin} binary, {n_cont} continuous), "
        f"{n_rows} constraints; solved in {solution.solve_time:.2f}s]"
    )
    return EXIT_OK


def _cmd_serve(args) -> int:
    import uvicorn

    from .service import create_app

    catalog = load_catalog(args.catalog)
    ruleset = read_rules_csv(Path(args.rules).read_text()) if args.rules else RuleSet()
    uvicorn.run(create_app(catalog, ruleset), host=args.host, port=args.port)
    return EXIT_OK


_COMMANDS = {
    "validate": _cmd_validate,
    "mine": _cmd_mine,
    "plan": _cmd_plan,
    "serve": _cmd_serve,
}


def run(argv: Optional[list[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except InfeasibleByConstruction as exc:
        print(f"infeasible: {exc} (tags: {', '.join(exc.tags)})", file=sys.stderr)
        return EXIT_INFEASIBLE
    except (CatalogError, TermError, ConfigurationError, FileNotFoundError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USER_ERROR
    except SolverError as exc:
        print(f"solver fault: {exc}", file=sys.stderr)
        return EXIT_INTERNAL


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
