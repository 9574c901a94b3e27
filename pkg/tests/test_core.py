from fractions import Fraction as F

import pytest
from hypothesis import given

from helpers import profiles
from randassign.core import (
    ConvexDecomposition,
    DeterministicAssignment,
    InputError,
    PreferenceProfile,
    PriorityDistribution,
    PriorityOrder,
    RandomAssignment,
    bvn_decompose,
    common_prefix,
    cumulative,
    prefix_length,
    rank_of,
    sd_dominates,
    top_among,
    upper_contour,
)
from randassign.fixtures import FIG1, PS_TINY3, TINY3, UPRE_FIG1


def test_profile_rejects_bad_input():
    with pytest.raises(InputError):
        PreferenceProfile(("1", "2"), ("a", "b"), {"1": ("a", "b"), "2": ("a", "a")})
    with pytest.raises(InputError):
        PreferenceProfile(("1", "1"), ("a", "b"), {"1": ("a", "b")})
    with pytest.raises(InputError):
        PreferenceProfile(("1",), ("a", "b"), {"1": ("a", "b")})
    with pytest.raises(InputError):
        PreferenceProfile(("1", "2"), ("a", "b"), {"1": ("a", "b")})


def test_profile_index_views():
    assert FIG1.order[2] == tuple(FIG1.item_index(o) for o in "cedfab")
    assert FIG1.rank[5][FIG1.item_index("a")] == 1
    assert FIG1.top_index(2, {0, 1, 4}) == FIG1.item_index("e")
    with pytest.raises(InputError):
        FIG1.agent_index("7")


def test_with_ranking_leaves_original():
    other = TINY3.with_ranking("1", ("c", "b", "a"))
    assert other.rankings["1"] == ("c", "b", "a")
    assert TINY3.rankings["1"] == ("a", "b", "c")


def test_ranking_helpers():
    r = ("c", "e", "d", "f", "a", "b")
    assert rank_of(r, "d") == 3
    assert top_among(r, {"a", "f"}) == "f"
    assert upper_contour(r, "d") == frozenset("ced")
    assert common_prefix(r, ("c", "a", "b", "d", "e", "f")) == ["c"]
    assert prefix_length((0, 1, 2), (0, 1, 2)) == 3


def test_random_assignment_validation():
    with pytest.raises(InputError):
        RandomAssignment(("1", "2"), ("a", "b"), ((F(1, 2), F(1, 2)), (F(1, 2), F(1, 3))))
    with pytest.raises(InputError):
        RandomAssignment(("1", "2"), ("a", "b"), ((F(3, 2), F(-1, 2)), (F(-1, 2), F(3, 2))))
    assert UPRE_FIG1["6", "d"] == F(3, 4)
    assert UPRE_FIG1.rows_dict()["1"] == {"a": 1}


def test_deterministic_round_trip():
    A = DeterministicAssignment.from_mapping(TINY3, {"1": "b", "2": "a", "3": "c"})
    assert A["1"] == "b" and A.holder("c") == "3"
    assert A.to_random().to_deterministic() == A
    with pytest.raises(InputError):
        PS_TINY3.to_deterministic()


def test_priority_types():
    assert PriorityOrder(("2", "1", "3")).check(TINY3) == (1, 0, 2)
    with pytest.raises(InputError):
        PriorityOrder(("1", "2")).check(TINY3)
    with pytest.raises(InputError):
        PriorityDistribution({("1", "2", "3"): F(1, 2)})
    assert len(PriorityDistribution.uniform(TINY3).weights) == 6


def test_sd_dominates():
    order = [0, 1, 2]
    assert sd_dominates([F(1), 0, 0], [F(1, 2), F(1, 2), 0], order)
    assert not sd_dominates([F(1, 2), F(1, 2), 0], [F(1), 0, 0], order)
    assert cumulative([F(1, 2), F(1, 4), F(1, 4)], [2, 1, 0]) == [F(1, 4), F(1, 2), F(1)]


def test_convex_decomposition_checks():
    A = DeterministicAssignment(("1", "2"), ("a", "b"), (0, 1))
    with pytest.raises(InputError):
        ConvexDecomposition(((F(1, 2), A),))
    assert ConvexDecomposition(((F(1), A),)).reconstructs(A.to_random())


def test_bvn_on_fixture():
    dec = bvn_decompose(UPRE_FIG1)
    assert dec.reconstructs(UPRE_FIG1)
    assert len({A.perm for _, A in dec.terms}) == len(dec.terms)


def test_bvn_of_permutation_is_single_term():
    A = DeterministicAssignment.from_mapping(TINY3, {"1": "c", "2": "a", "3": "b"})
    dec = bvn_decompose(A.to_random())
    assert dec.terms == ((F(1), A),)


@given(profiles(max_n=4), profiles(max_n=4))
def test_bvn_reconstructs_mixtures(p, q):
    # mixture of two serial-dictatorship style outcomes
    from randassign.lottery import rp_expectation

    P = rp_expectation(p)
    assert bvn_decompose(P).reconstructs(P)
