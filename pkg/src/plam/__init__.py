"""Exact-arithmetic interpreter and equivalence toolkit for the untyped
probabilistic λ-calculus under head-style reduction."""

from .prob import BOT, Distr, Dyadic, point
from .syntax import (
    App,
    Choice,
    CONSTANTS,
    Free,
    Lam,
    Term,
    Var,
    alpha_eq,
    classify,
    free_vars,
    is_hnf,
    lam_close,
    parse,
    pretty,
    size,
    substitute,
)
from .bigstep import UNKNOWN, EvalResult, check_derivable, eval_fuel, eval_mass
from .smallstep import (
    ResourceCapExceeded,
    converge,
    h_inf_lower,
    head_step,
    spine_step,
    step_n,
)
from .trees import Different, Equal, ProbTree, Unknown, ValueTree, eta_tree, prob_tree, tree_eq, value_tree
from .equiv import (
    Apply,
    HnfState,
    TAU,
    TermState,
    applicative_compare,
    refute_bisim,
    refute_sim,
    transitions,
)
from .assign import (
    AssignmentProblem,
    AssignmentSolution,
    Infeasible,
    assignment_check,
    assignment_solve,
)

__all__ = [name for name in dir() if not name.startswith("_")]
