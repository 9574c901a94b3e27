"""Round-based mechanisms resolved by lotteries or priorities.

The eager Boston mechanism (EBM) runs adaptive rounds: each unassigned agent
applies for her best *remaining* item and every item with applicants goes to
a uniformly drawn applicant. The adaptive Boston mechanism (ABM) runs the same
rounds but breaks ties with a fixed priority. The classic Boston mechanism
(BM) is non-adaptive: in round r every unassigned agent applies for her r-th
ranked item, available or not. Random priority (RP) is serial dictatorship
under a uniformly drawn priority.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import permutations, product
from typing import Callable, Iterator, Sequence

from .core import (
    ONE,
    ZERO,
    BudgetExceeded,
    DeterministicAssignment,
    InputError,
    PreferenceProfile,
    PriorityDistribution,
    PriorityOrder,
    RandomAssignment,
)

DEFAULT_WORLD_BUDGET = 10**7
DEFAULT_MAX_AGENTS = 8

_MASK64 = (1 << 64) - 1


class SplitMix64:
    """SplitMix64 (Steele, Lea & Flood 2014); pinned so seeds replay everywhere."""

    def __init__(self, seed: int):
        if not 0 <= int(seed) <= _MASK64:
            raise InputError("seed must be an unsigned 64-bit integer")
        self.state = int(seed)

    def next(self) -> int:
        self.state = (self.state + 0x9E3779B97F4A7C15) & _MASK64
        z = self.state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
        return z ^ (z >> 31)

    def choose(self, applicants: Sequence[int]) -> int:
        """Uniform pick from applicants sorted by agent index."""
        ordered = sorted(applicants)
        return ordered[self.next() % len(ordered)]


@dataclass(frozen=True)
class RoundRecord:
    remaining_items: tuple[str, ...]
    active_agents: tuple[str, ...]
    applicants: dict  # item -> tuple of agents
    winners: dict  # item -> agent


@dataclass(frozen=True)
class WorldTrace:
    rounds: tuple[RoundRecord, ...]
    probability: Fraction
    assignment: DeterministicAssignment


def _applications(profile: PreferenceProfile, items: list[int], agents: list[int]) -> dict[int, list[int]]:
    avail = set(items)
    apps: dict[int, list[int]] = {}
    for j in agents:
        apps.setdefault(profile.top_index(j, avail), []).append(j)
    # items in input order, applicants by agent index
    return {i: sorted(apps[i]) for i in items if i in apps}


def _record(profile, items, agents, apps, winners) -> RoundRecord:
    A, M = profile.agents, profile.items
    return RoundRecord(
        remaining_items=tuple(M[i] for i in items),
        active_agents=tuple(A[j] for j in agents),
        applicants={M[i]: tuple(A[j] for j in js) for i, js in apps.items()},
        winners={M[i]: A[j] for i, j in winners.items()},
    )


def _adaptive_rounds(profile: PreferenceProfile, pick: Callable[[int, list[int]], int]):
    """Shared round loop of EBM and ABM; pick(item, applicants) -> winner."""
    n = profile.n
    items = list(range(n))
    agents = list(range(n))
    perm = [-1] * n
    rounds = []
    while items:
        apps = _applications(profile, items, agents)
        winners = {i: pick(i, js) for i, js in apps.items()}
        rounds.append(_record(profile, items, agents, apps, winners))
        for i, j in winners.items():
            perm[j] = i
        items = [i for i in items if i not in winners]
        won = set(winners.values())
        agents = [j for j in agents if j not in won]
    return DeterministicAssignment(profile.agents, profile.items, tuple(perm)), rounds


def ebm_sample(profile: PreferenceProfile, seed: int = 0, chooser=None) -> tuple[DeterministicAssignment, WorldTrace]:
    """One run of EBM.

    Lotteries draw from :class:`SplitMix64` seeded with ``seed`` unless a
    ``chooser(applicants) -> agent index`` is supplied as the lottery
    generator.
    """
    rng = SplitMix64(seed)
    choose = chooser if chooser is not None else rng.choose
    prob = [ONE]

    def pick(i, js):
        j = choose(js)
        if j not in js:
            raise InputError("lottery generator returned a non-applicant")
        prob[0] /= len(js)
        return j

    A, rounds = _adaptive_rounds(profile, pick)
    return A, WorldTrace(tuple(rounds), prob[0], A)


def ebm_worlds(profile: PreferenceProfile, budget: int = DEFAULT_WORLD_BUDGET) -> Iterator[WorldTrace]:
    """Every EBM world with its probability, children ordered by agent index."""
    n = profile.n
    count = [0]

    def rec(items, agents, perm, prob, rounds):
        count[0] += 1
        if count[0] > budget:
            raise BudgetExceeded("EBM world tree", budget)
        if not items:
            A = DeterministicAssignment(profile.agents, profile.items, tuple(perm))
            yield WorldTrace(tuple(rounds), prob, A)
            return
        apps = _applications(profile, items, agents)
        contested = list(apps)
        share = prob
        for i in contested:
            share /= len(apps[i])
        for choice in product(*(apps[i] for i in contested)):
            winners = dict(zip(contested, choice))
            new_perm = list(perm)
            for i, j in winners.items():
                new_perm[j] = i
            rest_items = [i for i in items if i not in winners]
            rest_agents = [j for j in agents if j not in choice]
            rec_round = _record(profile, items, agents, apps, winners)
            yield from rec(rest_items, rest_agents, new_perm, share, rounds + [rec_round])

    yield from rec(list(range(n)), list(range(n)), [-1] * n, ONE, [])


def ebm_expectation(profile: PreferenceProfile, budget: int = DEFAULT_WORLD_BUDGET) -> RandomAssignment:
    """Exact expected EBM outcome.

    Sub-trees are memoised on (remaining items, remaining agents); the budget
    caps the number of distinct states expanded.
    """
    n = profile.n
    memo: dict[tuple[frozenset, frozenset], dict[tuple[int, int], Fraction]] = {}

    def solve(items: frozenset, agents: frozenset):
        key = (items, agents)
        if key in memo:
            return memo[key]
        if len(memo) >= budget:
            raise BudgetExceeded("EBM world tree", budget)
        if not items:
            memo[key] = {}
            return memo[key]
        apps = _applications(profile, sorted(items), sorted(agents))
        contested = list(apps)
        weight = ONE
        for i in contested:
            weight /= len(apps[i])
        acc: dict[tuple[int, int], Fraction] = {}
        for i in contested:
            # each applicant wins i in the same fraction of worlds
            for j in apps[i]:
                acc[(j, i)] = acc.get((j, i), ZERO) + ONE / len(apps[i])
        for choice in product(*(apps[i] for i in contested)):
            sub = solve(items - set(contested), agents - set(choice))
            for k, v in sub.items():
                acc[k] = acc.get(k, ZERO) + weight * v
        memo[key] = acc
        return acc

    result = solve(frozenset(range(n)), frozenset(range(n)))
    m = [[ZERO] * n for _ in range(n)]
    for (j, i), v in result.items():
        m[j][i] = v
    return RandomAssignment(profile.agents, profile.items, tuple(map(tuple, m)))


def expectation_from_worlds(profile: PreferenceProfile, worlds) -> tuple[RandomAssignment, Fraction]:
    """Probability-weighted sum over enumerated worlds, plus their total mass."""
    n = profile.n
    m = [[ZERO] * n for _ in range(n)]
    mass = ZERO
    for w in worlds:
        mass += w.probability
        for j, i in enumerate(w.assignment.perm):
            m[j][i] += w.probability
    return RandomAssignment(profile.agents, profile.items, tuple(map(tuple, m))), mass


def _as_priority(priority, profile) -> tuple[int, ...]:
    if not isinstance(priority, PriorityOrder):
        priority = PriorityOrder(tuple(priority))
    return priority.check(profile)


def abm_run(profile: PreferenceProfile, priority) -> DeterministicAssignment:
    pos = _as_priority(priority, profile)
    A, _ = _adaptive_rounds(profile, lambda i, js: min(js, key=pos.__getitem__))
    return A


def bm_run(profile: PreferenceProfile, priority) -> DeterministicAssignment:
    """Classic (naive) Boston: round r targets the r-th ranked item even if gone."""
    pos = _as_priority(priority, profile)
    n = profile.n
    perm = [-1] * n
    taken = [False] * n
    for r in range(n):
        apps: dict[int, list[int]] = {}
        for j in range(n):
            if perm[j] < 0:
                i = profile.order[j][r]
                if not taken[i]:
                    apps.setdefault(i, []).append(j)
        for i, js in apps.items():
            j = min(js, key=pos.__getitem__)
            perm[j] = i
            taken[i] = True
    return DeterministicAssignment(profile.agents, profile.items, tuple(perm))


def rp_run(profile: PreferenceProfile, priority) -> DeterministicAssignment:
    pos = _as_priority(priority, profile)
    n = profile.n
    perm = [-1] * n
    avail = set(range(n))
    for j in sorted(range(n), key=pos.__getitem__):
        i = profile.top_index(j, avail)
        perm[j] = i
        avail.discard(i)
    return DeterministicAssignment(profile.agents, profile.items, tuple(perm))


def _check_enumerable(profile, max_agents):
    if profile.n > max_agents:
        raise BudgetExceeded(f"{profile.n}! priority orders", math.factorial(max_agents))


def priority_expectation(profile: PreferenceProfile, run, dist: PriorityDistribution | None = None,
                         max_agents: int = DEFAULT_MAX_AGENTS) -> RandomAssignment:
    """Expected outcome of a priority-driven mechanism under a distribution."""
    n = profile.n
    if dist is None:
        _check_enumerable(profile, max_agents)
        w = Fraction(1, math.factorial(n))
        weighted = ((w, p) for p in permutations(profile.agents))
    else:
        weighted = ((w, p) for p, w in dist.weights.items())
    m = [[ZERO] * n for _ in range(n)]
    for w, p in weighted:
        A = run(profile, p)
        for j, i in enumerate(A.perm):
            m[j][i] += w
    return RandomAssignment(profile.agents, profile.items, tuple(map(tuple, m)))


def abm_expectation(profile, dist: PriorityDistribution | None = None, max_agents=DEFAULT_MAX_AGENTS):
    """ABM under ``dist``; ``None`` means the uniform distribution."""
    return priority_expectation(profile, abm_run, dist, max_agents)


def bm_expectation(profile, dist: PriorityDistribution | None = None, max_agents=DEFAULT_MAX_AGENTS):
    return priority_expectation(profile, bm_run, dist, max_agents)


def rp_expectation(profile, max_agents=DEFAULT_MAX_AGENTS):
    return priority_expectation(profile, rp_run, None, max_agents)
