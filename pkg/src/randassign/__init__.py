"""Exact random assignment: eager/adaptive/classic Boston, random priority,
probabilistic serial and round-based eating, with property checkers and
brute-force oracles."""

from .core import (
    BudgetExceeded,
    ConvexDecomposition,
    DeterministicAssignment,
    InputError,
    PreferenceProfile,
    PriorityDistribution,
    PriorityOrder,
    RandomAssignment,
    bvn_decompose,
    sd_dominates,
)
from .eating import EatingSpeedProfile, NotEaFeriError, pre_run, ps_run, recover_speeds, upre_run
from .estimators import (
    PRE,
    AdaptiveBostonMechanism,
    BostonMechanism,
    EagerBostonMechanism,
    ProbabilisticSerial,
    RandomPriority,
    UniformPRE,
)
from .lottery import (
    abm_expectation,
    abm_run,
    bm_expectation,
    bm_run,
    ebm_expectation,
    ebm_sample,
    rp_expectation,
    rp_run,
)
from .properties import PROPERTY_IDS, PropertyVerdict, check_property, is_ep
from .strategyproofness import MechanismHandle, find_sd_sp_violation, find_sd_wsp_violation

__version__ = "0.1.0"

__all__ = [
    "AdaptiveBostonMechanism", "BostonMechanism", "BudgetExceeded", "ConvexDecomposition",
    "DeterministicAssignment", "EagerBostonMechanism", "EatingSpeedProfile", "InputError",
    "MechanismHandle", "NotEaFeriError", "PRE", "PROPERTY_IDS", "PreferenceProfile",
    "PriorityDistribution", "PriorityOrder", "ProbabilisticSerial", "PropertyVerdict",
    "RandomAssignment", "RandomPriority", "UniformPRE", "abm_expectation", "abm_run",
    "bm_expectation", "bm_run", "bvn_decompose", "check_property", "ebm_expectation",
    "ebm_sample", "find_sd_sp_violation", "find_sd_wsp_violation", "is_ep", "pre_run",
    "ps_run", "recover_speeds", "rp_expectation", "rp_run", "sd_dominates", "upre_run",
]
