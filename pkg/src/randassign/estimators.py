"""Scikit-learn style wrappers: ``fit`` on a preference profile, read the
exact share matrix from ``assignment_``."""

from __future__ import annotations

from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_is_fitted

from .core import PriorityDistribution, RandomAssignment
from .eating import EatingSpeedProfile, pre_run, ps_run
from .lottery import (
    DEFAULT_MAX_AGENTS,
    DEFAULT_WORLD_BUDGET,
    abm_expectation,
    bm_expectation,
    ebm_expectation,
    ebm_sample,
    priority_expectation,
    rp_run,
)
from .validation import check_profile


class _MechanismEstimator(TransformerMixin, BaseEstimator):
    def _assign(self, profile) -> RandomAssignment:  # pragma: no cover
        raise NotImplementedError

    def fit(self, X, y=None):
        self.profile_ = check_profile(X)
        self.assignment_ = self._assign(self.profile_)
        self.n_agents_ = self.profile_.n
        return self

    def transform(self, X):
        """Share matrix for ``X``; reuses the fitted result when ``X`` is the
        fitted profile."""
        check_is_fitted(self, "assignment_")
        profile = check_profile(X)
        return self.assignment_ if profile == self.profile_ else self._assign(profile)


class EagerBostonMechanism(_MechanismEstimator):
    """Adaptive rounds with a fresh uniform lottery per contested item.

    ``mode="expectation"`` enumerates the world tree; ``mode="sample"``
    draws one world from ``seed``.
    """

    def __init__(self, mode="expectation", seed=0, budget_worlds=DEFAULT_WORLD_BUDGET):
        self.mode = mode
        self.seed = seed
        self.budget_worlds = budget_worlds

    def _assign(self, profile):
        if self.mode == "sample":
            return ebm_sample(profile, self.seed)[0].to_random()
        if self.mode != "expectation":
            raise ValueError(f"mode must be 'sample' or 'expectation', got {self.mode!r}")
        return ebm_expectation(profile, self.budget_worlds)


class _PriorityEstimator(_MechanismEstimator):
    _expectation = None

    def __init__(self, priority=None, max_agents=DEFAULT_MAX_AGENTS):
        self.priority = priority
        self.max_agents = max_agents

    def _dist(self):
        if self.priority is None or isinstance(self.priority, PriorityDistribution):
            return self.priority
        return PriorityDistribution.point(self.priority)

    def _assign(self, profile):
        return type(self)._expectation(profile, self._dist(), self.max_agents)


class AdaptiveBostonMechanism(_PriorityEstimator):
    """Adaptive Boston; a fixed ``priority`` or a distribution (default uniform)."""

    _expectation = staticmethod(abm_expectation)


class BostonMechanism(_PriorityEstimator):
    """Classic Boston with rank-indexed rounds."""

    _expectation = staticmethod(bm_expectation)


class RandomPriority(_PriorityEstimator):
    """Serial dictatorship over a fixed or random priority."""

    @staticmethod
    def _expectation(profile, dist, max_agents):
        return priority_expectation(profile, rp_run, dist, max_agents)


class ProbabilisticSerial(_MechanismEstimator):
    def _assign(self, profile):
        return ps_run(profile)


class PRE(_MechanismEstimator):
    """Round-based eating with per-agent speed functions (uniform if omitted)."""

    def __init__(self, speeds: EatingSpeedProfile | None = None):
        self.speeds = speeds

    def _assign(self, profile):
        return pre_run(profile, self.speeds)[0]


class UniformPRE(PRE):
    def __init__(self):
        super().__init__(None)
