"""Numerical Laurent expansions of Euler-Zagier multiple zeta-functions."""

from .config import DEFAULT_CTX, DEFAULT_MB, MBConfig, PrecisionContext
from .engine import (
    RestrictedExpansion,
    expand_positive,
    lemma1_pole_check,
    multiple_stieltjes,
    restricted_expand,
    stieltjes_sum,
)
from .laurent import LaurentExpansion, LinearFactor
from .limits import (
    INDETERMINATE,
    ApproachSpec,
    Indeterminate,
    NearPointValue,
    zeta2_corollary,
    zeta2_near,
    zeta3_near,
)
from .mb import ez_eval_mb, expand_at, integral_branch, singular_hyperplane
from .series import ez_taylor, ez_value, ez_value_full, in_domain
from .stuffle import classify_case, expansion_plan, stuffle_product
from .zeta1 import stieltjes, stieltjes_classical, zeta

__all__ = [
    "DEFAULT_CTX",
    "DEFAULT_MB",
    "MBConfig",
    "PrecisionContext",
    "RestrictedExpansion",
    "expand_positive",
    "lemma1_pole_check",
    "multiple_stieltjes",
    "restricted_expand",
    "stieltjes_sum",
    "LaurentExpansion",
    "LinearFactor",
    "INDETERMINATE",
    "ApproachSpec",
    "Indeterminate",
    "NearPointValue",
    "zeta2_corollary",
    "zeta2_near",
    "zeta3_near",
    "ez_eval_mb",
    "expand_at",
    "integral_branch",
    "singular_hyperplane",
    "ez_taylor",
    "ez_value",
    "ez_value_full",
    "in_domain",
    "classify_case",
    "expansion_plan",
    "stuffle_product",
    "stieltjes",
    "stieltjes_classical",
    "zeta",
]
__version__ = "0.1.0"
