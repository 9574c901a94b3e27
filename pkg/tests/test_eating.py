import random
from fractions import Fraction as F

import pytest
from hypothesis import given

from helpers import profiles, random_speeds
from randassign.core import InputError
from randassign.eating import (
    EatingSpeedProfile,
    NotEaFeriError,
    ea_feri_trace,
    gamma,
    pre_run,
    ps_run,
    recover_speeds,
    upre_run,
)
from randassign.fixtures import FHR_SETE_FIG1, FIG1, PS_TINY3, TINY3, UPRE_FIG1
from randassign.properties import is_ea_feri, is_sd_pe


def test_speed_profile_validation():
    with pytest.raises(InputError):
        EatingSpeedProfile({"1": ((0, F(1, 2), 1),)})
    with pytest.raises(InputError):
        EatingSpeedProfile({"1": ((0, F(1, 2), 1), (F(1, 2), 1, 2))})
    with pytest.raises(InputError):
        EatingSpeedProfile({"1": ((0, F(1, 2), 2), (F(2, 3), 1, 0))})
    s = EatingSpeedProfile({"1": ((0, F(1, 2), 2), (F(1, 2), 1, 0))})
    assert s.eaten("1", F(1, 4)) == F(1, 2) and s.rate("1", F(3, 4)) == 0


def test_gamma_stops_at_exhaustion():
    speeds = EatingSpeedProfile.uniform(["1", "2"])
    elapsed = {"1": F(0), "2": F(0)}
    assert gamma(["1", "2"], elapsed, F(1, 2), speeds) == F(1, 4)


def test_upre_fig1_table_and_rounds():
    P, state = pre_run(FIG1)
    assert P == UPRE_FIG1
    # four rounds: a,b,c together, then d and e, then d again, then f
    assert [r for r, *_ in state.log] == [1, 1, 1, 2, 2, 3, 4]
    assert [o for _, o, *_ in state.log] == ["a", "b", "c", "d", "e", "d", "f"]


def test_ps_small_instance():
    assert ps_run(TINY3) == PS_TINY3


def test_ps_fig1_agent_six():
    row = ps_run(FIG1).rows_dict()["6"]
    assert row == {"a": F(3, 8), "b": F(1, 8), "c": F(1, 4), "d": F(1, 12), "f": F(1, 6)}


def test_recover_speeds_fig1():
    speeds = recover_speeds(UPRE_FIG1, FIG1)
    assert pre_run(FIG1, speeds)[0] == UPRE_FIG1
    sixth = F(1, 6)
    assert speeds.pieces["3"] == ((0, sixth, F(3, 2)), (sixth, 2 * sixth, 2), (2 * sixth, 3 * sixth, F(1, 2)),
                                  (3 * sixth, 4 * sixth, 2), (4 * sixth, 1, 0))


def test_recover_speeds_rejects():
    with pytest.raises(NotEaFeriError) as err:
        recover_speeds(FHR_SETE_FIG1, FIG1)
    assert err.value.verdict.witness["agent"] == "6"


def test_trace_reaches_fixed_point():
    tr = ea_feri_trace(UPRE_FIG1, FIG1)
    assert tr.rounds[0].eager["c"] == frozenset("3456")
    # satisfied agents still point at their top remaining item, with zero demand
    assert tr.eager_before(3, "d") == {"1", "2", "6"}
    assert tr.rounds[1].demand["1"] == 0


@given(profiles(max_n=5))
def test_recover_speeds_round_trip(p):
    U = upre_run(p)
    assert pre_run(p, recover_speeds(U, p))[0] == U


@given(profiles(max_n=4))
def test_pre_outputs_are_ea_feri_and_sd_efficient(p):
    speeds = random_speeds(random.Random(hash(p) & 0xFFFF), p.agents)
    P = pre_run(p, speeds)[0]
    assert is_ea_feri(P, p)
    assert is_sd_pe(P, p)
    assert pre_run(p, recover_speeds(P, p))[0] == P


@given(profiles(max_n=4))
def test_ps_is_sd_efficient(p):
    assert is_sd_pe(ps_run(p), p)
