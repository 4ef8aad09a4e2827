"""Exact space of the interaction abstract machine, read off tree-type derivations.

The λIAM runs closed λ-terms under weak head evaluation; tree types are
non-idempotent intersection types with nested, ordered multisets.  The
weight of a derivation inferred for a term equals the space used by the
term's complete λIAM run, and the TIAM over the derivation replays that run
state by state.
"""

from .corpus import (
    FixSchema, divergent_corpus, fix_schema, gen_divergent, gen_random_closed, gen_tn,
    gen_theta, random_corpus, theta_unfolded, tn_derivation,
)
from .derivation import (
    Derivation, Node, RuleViolation, check, check_flat, derivation_from_json,
    derivation_to_json, flatten, merge, split,
)
from .expansion import (
    ExpansionError, NotNormalizing, infer, subject_expand, subject_reduce, substitute_derivation,
)
from .extraction import BisimReport, Extractor, verify_bisimulation
from .iam import (
    BULLET, FINAL, INITIAL, KERNEL, IamRun, IamState, LoggedPosition, StuckState, iam_init,
    iam_run, iam_step, iam_step_back, run_space_fast, state_space,
)
from .measure import SpaceMeasure, default_x
from .terms import (
    DEFAULT_FUEL, Abs, App, Code, FuelExhausted, ParseError, Term, Var, parse, pretty,
    substitute, whnf,
)
from .tiam import BLUE, RED, Tiam, TiamRun, TiamState, tiam_init, tiam_run, tiam_step, tiam_step_back
from .ttypes import EMPTY, STAR, Arrow, Star, Tree, leaves, show
from .weights import ExactBoundReport, bsize, type_weight, verify_exact_bound, weigh

__version__ = "0.1.0"

__all__ = [
    "Abs", "App", "Arrow", "BLUE", "BULLET", "BisimReport", "Code", "DEFAULT_FUEL",
    "Derivation", "EMPTY", "ExactBoundReport", "ExpansionError", "Extractor", "FINAL",
    "FixSchema", "FuelExhausted", "INITIAL", "IamRun", "IamState", "KERNEL",
    "LoggedPosition", "Node", "NotNormalizing", "ParseError", "RED", "RuleViolation",
    "STAR", "SpaceMeasure", "Star", "StuckState", "Term", "Tiam", "TiamRun", "TiamState",
    "Tree", "Var", "bsize", "check", "check_flat", "default_x", "derivation_from_json",
    "derivation_to_json", "divergent_corpus", "fix_schema", "flatten", "gen_divergent",
    "gen_random_closed", "gen_theta", "gen_tn", "iam_init", "iam_run", "iam_step",
    "iam_step_back", "infer", "leaves", "merge", "parse", "pretty", "random_corpus",
    "run_space_fast", "show", "split", "state_space", "subject_expand", "subject_reduce",
    "substitute", "substitute_derivation", "theta_unfolded", "tiam_init", "tiam_run",
    "tiam_step", "tiam_step_back", "tn_derivation", "type_weight", "verify_bisimulation",
    "verify_exact_bound", "weigh", "whnf",
]
