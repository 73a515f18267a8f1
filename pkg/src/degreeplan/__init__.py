"""Individual-student degree-plan optimization.

Builds a mixed-integer linear program from a course catalog, a student
transcript and preferences; solves it (internal branch-and-bound or an
external solver via LP files); and certifies every plan with an
independent, MILP-free validator.  A quantitative-rule miner predicts
per-course grades from historical records to drive the expected-GPA
objective.
"""

from .builder import (
    GradeEstimates,
    InfeasibleByConstruction,
    Preferences,
    Priority,
    build_model,
)
from .catalog import (
    Catalog,
    CatalogError,
    Course,
    CourseGroup,
    Transcript,
    load_catalog,
    parse_transcript,
    validate_catalog,
)
from .milp import MilpModel, model_stats, write_lp
from .planning import EditAction, EditCommand, Plan, apply_edits, decode, summarize, validate
from .requisites import dnf_to_cnf, may_register
from .rules import (
    GradeDataset,
    GradeRulePredictor,
    QRule,
    RuleSet,
    mine_rules,
    predict,
    support_confidence,
)
from .solver import Backend, Solution, SolverConfig, SolveStatus, solve
from .terms import Anchor, Season, k_of, season_of, term_index, term_token

__version__ = "0.1.0"

__all__ = [
    "Anchor",
    "Backend",
    "Catalog",
    "CatalogError",
    "Course",
    "CourseGroup",
    "EditAction",
    "EditCommand",
    "GradeDataset",
    "GradeEstimates",
    "GradeRulePredictor",
    "InfeasibleByConstruction",
    "MilpModel",
    "Plan",
    "Preferences",
    "Priority",
    "QRule",
    "RuleSet",
    "Season",
    "Solution",
    "SolverConfig",
    "SolveStatus",
    "Transcript",
    "apply_edits",
    "build_model",
    "decode",
    "dnf_to_cnf",
    "k_of",
    "load_catalog",
    "may_register",
    "mine_rules",
    "model_stats",
    "parse_transcript",
    "predict",
    "season_of",
    "solve",
    "summarize",
    "support_confidence",
    "term_index",
    "term_token",
    "validate",
    "validate_catalog",
    "write_lp",
]
