"""Square roots of nonsquare integers from Pell solutions and hypergeometric series."""

from .builder import NotApplicable, NotApplicableError, SeriesSpec, Theorem, applicable, build, build_all
from .evaluate import BigFixed, EvalReport, convergence_table, evaluate, sqrt_oracle, terms_needed
from .hyper import Identity, SeriesFamily, next_term, partial_sum, term_ratio, verify_identity
from .pell import (
    PellInstance,
    PellSolution,
    amplify_binomial,
    amplify_power,
    brute_force_solution,
    fundamental_solution,
    integer_sqrt,
    is_nonsquare,
)

__version__ = "0.1.0"
