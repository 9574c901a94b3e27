from fractions import Fraction as F

import pytest
from sklearn.base import clone
from sklearn.exceptions import NotFittedError

from randassign.core import InputError, PriorityDistribution
from randassign.estimators import (
    PRE,
    AdaptiveBostonMechanism,
    BostonMechanism,
    EagerBostonMechanism,
    ProbabilisticSerial,
    RandomPriority,
    UniformPRE,
)
from randassign.fixtures import BM_213, FIG1, PS_TINY3, RP_213, SEPARATION5, TINY3, UPRE_FIG1
from randassign.io import profile_to_doc
from randassign.validation import check_profile, check_random_assignment


def test_fit_sets_assignment():
    est = UniformPRE().fit(FIG1)
    assert est.assignment_ == UPRE_FIG1 and est.n_agents_ == 6
    assert est.transform(FIG1) is est.assignment_
    assert ProbabilisticSerial().fit_transform(TINY3) == PS_TINY3


def test_params_and_clone():
    est = EagerBostonMechanism(mode="sample", seed=5)
    assert est.get_params() == {"mode": "sample", "seed": 5, "budget_worlds": 10**7}
    c = clone(est).set_params(mode="expectation")
    assert c.fit(SEPARATION5).assignment_["1", "c"] == F(1, 6)
    assert EagerBostonMechanism(mode="sample", seed=5).fit(FIG1).assignment_.is_deterministic()


def test_priority_estimators():
    assert RandomPriority(priority=("2", "1", "3")).fit(TINY3).assignment_ == RP_213.to_random()
    assert BostonMechanism(priority=("2", "1", "3")).fit(TINY3).assignment_ == BM_213.to_random()
    assert AdaptiveBostonMechanism().fit(SEPARATION5).assignment_["1", "c"] == F(3, 20)
    dist = PriorityDistribution.point(("1", "2", "3"))
    assert AdaptiveBostonMechanism(priority=dist).fit(TINY3).assignment_.is_deterministic()


def test_transform_other_profile():
    est = PRE().fit(FIG1)
    assert est.transform(TINY3) != est.assignment_


def test_not_fitted_and_bad_mode():
    with pytest.raises(NotFittedError):
        UniformPRE().transform(FIG1)
    with pytest.raises(ValueError):
        EagerBostonMechanism(mode="guess").fit(TINY3)


def test_validation_helpers():
    assert check_profile(profile_to_doc(TINY3)) == TINY3
    assert check_profile({"1": "a b", "2": "b a"}).items == ("a", "b")
    with pytest.raises(InputError):
        check_profile(42)
    assert check_random_assignment(RP_213, TINY3) == RP_213.to_random()
    assert check_random_assignment({"1": {"a": 1}, "2": {"b": 1}, "3": {"c": 1}}, TINY3).is_deterministic()
    with pytest.raises(InputError):
        check_random_assignment(UPRE_FIG1, TINY3)
