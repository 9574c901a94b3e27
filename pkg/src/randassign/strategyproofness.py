"""Exhaustive misreport search for stochastic-dominance strategyproofness."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import permutations
from typing import Callable, Iterable, Iterator, Sequence

from .core import InputError, PreferenceProfile, PriorityDistribution, RandomAssignment
from .eating import EatingSpeedProfile, pre_run, ps_run, upre_run
from .lottery import (
    DEFAULT_WORLD_BUDGET,
    abm_expectation,
    bm_expectation,
    ebm_expectation,
    rp_expectation,
)

MECHANISMS = ("ebm", "abm-uniform", "bm-uniform", "rp", "ps", "upre", "pre")


@dataclass(frozen=True)
class MechanismHandle:
    """A named mechanism resolved to its exact expected outcome."""

    identifier: str
    params: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        if self.identifier not in MECHANISMS:
            raise InputError(f"unknown mechanism {self.identifier!r}; expected one of {', '.join(MECHANISMS)}")
        if self.identifier == "pre" and "speeds" not in self.params:
            raise InputError("pre needs a speeds parameter")

    def __call__(self, profile: PreferenceProfile) -> RandomAssignment:
        p = self.params
        if self.identifier == "ebm":
            return ebm_expectation(profile, p.get("budget", DEFAULT_WORLD_BUDGET))
        if self.identifier == "abm-uniform":
            return abm_expectation(profile, p.get("dist"))
        if self.identifier == "bm-uniform":
            return bm_expectation(profile, p.get("dist"))
        if self.identifier == "rp":
            return rp_expectation(profile)
        if self.identifier == "ps":
            return ps_run(profile)
        if self.identifier == "upre":
            return upre_run(profile)
        return pre_run(profile, p["speeds"])[0]


def as_mechanism(mech) -> Callable[[PreferenceProfile], RandomAssignment]:
    if isinstance(mech, str):
        return MechanismHandle(mech)
    if callable(mech):
        return mech
    raise InputError("mechanism must be a handle, id or callable")


@dataclass(frozen=True)
class Deviation:
    agent: str
    true_ranking: tuple[str, ...]
    misreport: tuple[str, ...]
    truthful_row: dict
    deviating_row: dict
    item: str  # first item along the true ranking where the two rows separate

    def as_dict(self) -> dict:
        return {
            "agent": self.agent,
            "true_ranking": list(self.true_ranking),
            "misreport": list(self.misreport),
            "truthful_row": self.truthful_row,
            "deviating_row": self.deviating_row,
            "item": self.item,
        }


def enumerate_misreports(ranking: Sequence[str]) -> Iterator[tuple[str, ...]]:
    """Every other strict order over the same items, lexicographic in the
    positions of the true ranking."""
    ranking = tuple(ranking)
    if len(set(ranking)) != len(ranking):
        raise InputError("ranking repeats an item")
    for perm in permutations(ranking):
        if perm != ranking:
            yield perm


def _cumulative(row, order):
    s = Fraction(0)
    out = []
    for i in order:
        s += row[i]
        out.append(s)
    return out


def _search(mech, profile: PreferenceProfile, agents, violates) -> Deviation | None:
    mech = as_mechanism(mech)
    truthful = mech(profile)
    wanted = profile.agents if agents is None else tuple(str(a) for a in agents)
    for a in profile.agents:
        if a not in wanted:
            continue
        j = profile.agent_index(a)
        order = profile.order[j]
        p = truthful.matrix[j]
        cp = _cumulative(p, order)
        for lie in enumerate_misreports(profile.rankings[a]):
            q = mech(profile.with_ranking(a, lie)).matrix[j]
            cq = _cumulative(q, order)
            pos = violates(cp, cq)
            if pos is not None:
                return Deviation(
                    agent=a,
                    true_ranking=profile.rankings[a],
                    misreport=lie,
                    truthful_row={o: x for o, x in zip(profile.items, p) if x},
                    deviating_row={o: x for o, x in zip(profile.items, q) if x},
                    item=profile.items[order[pos]],
                )
    return None


def _strictly_dominated(cp, cq):
    """Position of the first strict gain if cq dominates cp and differs."""
    if all(y >= x for x, y in zip(cp, cq)) and cp != cq:
        return next(k for k, (x, y) in enumerate(zip(cp, cq)) if y > x)
    return None


def _not_dominating(cp, cq):
    return next((k for k, (x, y) in enumerate(zip(cp, cq)) if x < y), None)


def find_sd_wsp_violation(mech, profile: PreferenceProfile, agents: Iterable | None = None) -> Deviation | None:
    """First misreport whose outcome strictly sd-dominates the truthful one."""
    return _search(mech, profile, agents, _strictly_dominated)


def find_sd_sp_violation(mech, profile: PreferenceProfile, agents: Iterable | None = None) -> Deviation | None:
    """First misreport whose outcome the truthful one fails to sd-dominate."""
    return _search(mech, profile, agents, _not_dominating)
