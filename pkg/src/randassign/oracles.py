"""Brute-force ground truth: enumeration, exact convex-hull membership and
set-level checks of the priority characterisation."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations, permutations
from typing import Iterable, Sequence

from .core import (
    ZERO,
    BudgetExceeded,
    ConvexDecomposition,
    DeterministicAssignment,
    InputError,
    PreferenceProfile,
    RandomAssignment,
    prefix_length,
)
from .lottery import DEFAULT_MAX_AGENTS, abm_run
from .lp import linprog
from .properties import PropertyVerdict, satisfying


@dataclass(frozen=True)
class AssignmentSet:
    members: frozenset  # of DeterministicAssignment
    tag: str

    def __len__(self):
        return len(self.members)

    def __contains__(self, A):
        return A in self.members

    def perms(self) -> set:
        return {A.perm for A in self.members}

    def sorted(self) -> list[DeterministicAssignment]:
        return sorted(self.members, key=lambda A: A.perm)


def _budget(profile, max_agents):
    if profile.n > max_agents:
        raise BudgetExceeded(f"{profile.n}! assignments", math.factorial(max_agents))


def enumerate_assignments(profile: PreferenceProfile, max_agents: int = DEFAULT_MAX_AGENTS) -> AssignmentSet:
    _budget(profile, max_agents)
    return AssignmentSet(
        frozenset(DeterministicAssignment(profile.agents, profile.items, p) for p in permutations(range(profile.n))),
        "all",
    )


def enumerate_satisfying(profile: PreferenceProfile, prop: str, max_agents: int = DEFAULT_MAX_AGENTS) -> AssignmentSet:
    return AssignmentSet(frozenset(satisfying(profile, prop, max_agents)), prop)


def abm_image(profile: PreferenceProfile, max_agents: int = DEFAULT_MAX_AGENTS) -> AssignmentSet:
    _budget(profile, max_agents)
    return AssignmentSet(frozenset(abm_run(profile, p) for p in permutations(profile.agents)), "abm-image")


def verify_abm_characterization(profile: PreferenceProfile, max_agents: int = DEFAULT_MAX_AGENTS) -> PropertyVerdict:
    image = abm_image(profile, max_agents)
    feri = enumerate_satisfying(profile, "feri", max_agents)
    if image.members == feri.members:
        return PropertyVerdict(True, detail={"size": len(image)})
    return PropertyVerdict(False, {
        "only_in_image": [A.as_dict() for A in sorted(image.members - feri.members, key=lambda A: A.perm)],
        "only_feri": [A.as_dict() for A in sorted(feri.members - image.members, key=lambda A: A.perm)],
    })


# -- convex hull membership -----------------------------------------------------


def _generator_list(generators) -> list[DeterministicAssignment]:
    if isinstance(generators, AssignmentSet):
        return generators.sorted()
    return list(generators)


def _hull_system(target: RandomAssignment, gens: Sequence[DeterministicAssignment]):
    n = target.n
    rows, rhs = [], []
    for j in range(n):
        for i in range(n):
            rows.append([Fraction(int(A.perm[j] == i)) for A in gens])
            rhs.append(target.matrix[j][i])
    rows.append([Fraction(1)] * len(gens))
    rhs.append(Fraction(1))
    return rows, rhs


def _decomposition(gens, x) -> ConvexDecomposition:
    return ConvexDecomposition(tuple((c, A) for c, A in zip(x, gens) if c > 0))


def exact_feasibility(target: RandomAssignment, generators) -> ConvexDecomposition | None:
    """Exact convex weights over ``generators`` reproducing ``target``, or None."""
    gens = _generator_list(generators)
    for A in gens:
        if A.agents != target.agents or A.items != target.items:
            raise InputError("generator and target shapes differ")
    if not gens:
        return None
    rows, rhs = _hull_system(target, gens)
    res = linprog([0] * len(gens), rows, rhs)
    if res.status != "optimal":
        return None
    return _decomposition(gens, res.x)


def _solve_square(rows: list[list[Fraction]], rhs: list[Fraction]):
    """Unique solution of a full-column-rank system by Gauss-Jordan, else None."""
    m, k = len(rows), len(rows[0])
    M = [list(r) + [b] for r, b in zip(rows, rhs)]
    piv_row = 0
    pivots = []
    for c in range(k):
        p = next((r for r in range(piv_row, m) if M[r][c]), None)
        if p is None:
            return None  # dependent columns
        M[piv_row], M[p] = M[p], M[piv_row]
        pv = M[piv_row][c]
        M[piv_row] = [v / pv for v in M[piv_row]]
        for r in range(m):
            if r != piv_row and M[r][c]:
                f = M[r][c]
                M[r] = [a - f * b for a, b in zip(M[r], M[piv_row])]
        pivots.append(c)
        piv_row += 1
    if any(M[r][-1] for r in range(piv_row, m)):
        return None  # inconsistent
    return [M[r][-1] for r in range(k)]


def exact_feasibility_by_vertices(target: RandomAssignment, generators) -> ConvexDecomposition | None:
    """Second path: try every affinely independent support (Caratheodory)."""
    gens = _generator_list(generators)
    if not gens:
        return None
    rows, rhs = _hull_system(target, gens)
    for size in range(1, len(gens) + 1):
        for support in combinations(range(len(gens)), size):
            sub = [[row[s] for s in support] for row in rows]
            x = _solve_square(sub, rhs)
            if x is not None and all(v >= 0 for v in x):
                full = [ZERO] * len(gens)
                for s, v in zip(support, x):
                    full[s] = v
                return _decomposition(gens, full)
    return None


def sete_rows(profile: PreferenceProfile, gens: Sequence[DeterministicAssignment]):
    """Equalities over lottery weights forcing equal treatment on common prefixes."""
    out = []
    n = profile.n
    for j in range(n):
        for k in range(j + 1, n):
            for i in profile.order[j][: prefix_length(profile.order[j], profile.order[k])]:
                out.append([Fraction(int(A.perm[j] == i) - int(A.perm[k] == i)) for A in gens])
    return out


def share_range(profile: PreferenceProfile, generators, agent, item, sete: bool = True):
    """Exact (min, max) of one share over lotteries of ``generators``
    (optionally restricted to equal treatment of equals); None if empty."""
    gens = _generator_list(generators)
    j, i = profile.agent_index(agent), profile.item_index(item)
    rows = [[Fraction(1)] * len(gens)]
    rhs = [Fraction(1)]
    if sete:
        extra = sete_rows(profile, gens)
        rows += extra
        rhs += [ZERO] * len(extra)
    c = [Fraction(int(A.perm[j] == i)) for A in gens]
    lo = linprog(c, rows, rhs)
    if lo.status != "optimal":
        return None
    hi = linprog(c, rows, rhs, maximize=True)
    return lo.value, hi.value


def forced_matrix(profile: PreferenceProfile, generators, sete: bool = True):
    """Matrix of shares fixed across the whole constrained polytope; None marks
    entries that are not pinned down."""
    out = []
    for a in profile.agents:
        row = []
        for o in profile.items:
            rng = share_range(profile, generators, a, o, sete)
            if rng is None:
                return None
            row.append(rng[0] if rng[0] == rng[1] else None)
        out.append(row)
    return out


def popular_bruteforce(A: DeterministicAssignment, profile: PreferenceProfile, max_agents: int = DEFAULT_MAX_AGENTS) -> bool:
    from .properties import more_popular

    return more_popular(A, profile, max_agents) is None


def all_profiles(n: int, items: Iterable[str] | None = None):
    """Every profile on n agents (n!^n of them)."""
    from itertools import product

    for orders in product(permutations(range(n)), repeat=n):
        yield PreferenceProfile.from_orders(orders)


def min_weight(target: RandomAssignment, generators, member: DeterministicAssignment):
    """Smallest weight ``member`` can carry in any lottery over ``generators``
    that reproduces ``target``; None if no such lottery exists."""
    gens = _generator_list(generators)
    if member not in gens:
        gens = gens + [member]
    rows, rhs = _hull_system(target, gens)
    c = [Fraction(int(A == member)) for A in gens]
    res = linprog(c, rows, rhs)
    return res.value if res.status == "optimal" else None


# -- eagerness propagation -----------------------------------------------------


@dataclass
class ForcedShares:
    """Shares pinned down by ex-ante eagerness plus equal treatment.

    ``matrix[j][i]`` is a Fraction when forced and None when left open.
    ``log`` lists, per round, (remaining items, {item: newly eager agents}).
    """

    profile: PreferenceProfile
    matrix: list
    log: list
    stopped: str | None = None

    def get(self, agent, item):
        return self.matrix[self.profile.agent_index(agent)][self.profile.item_index(item)]


def _sete_classes(profile, agents: list[int], i: int) -> list[list[int]]:
    """Group agents whose pairwise common prefix reaches item i."""
    classes: list[list[int]] = []
    for j in agents:
        for cls in classes:
            k = cls[0]
            if prefix_length(profile.order[j], profile.order[k]) > profile.rank[j][i]:
                cls.append(j)
                break
        else:
            classes.append([j])
    return classes


def eagerness_forced_shares(profile: PreferenceProfile, sete: bool = True, max_rounds: int | None = None) -> ForcedShares:
    """Round-by-round propagation of the remaining-supply / remaining-demand
    argument for ex-ante eagerness.

    Agents count as eager for an item only in the first round its turn comes
    up for them; an item split among several equal-treatment classes whose
    total demand exceeds the supply leaves those shares open, and the agents
    involved stop contributing to later rounds.
    """
    from .core import ONE

    n = profile.n
    p: list[list[Fraction | None]] = [[None] * n for _ in range(n)]
    seen: list[set[int]] = [set() for _ in range(n)]
    taken = [ZERO] * n
    prev_top: dict[int, int] = {}
    blocked: set[int] = set()
    log = []
    stopped = None
    r = 0
    while True:
        r += 1
        if max_rounds is not None and r > max_rounds:
            break
        remaining = {i for i in range(n) if taken[i] < 1}
        if not remaining:
            break
        tops = {j: profile.top_index(j, remaining) for j in range(n)}
        demand: dict[int, Fraction] = {}
        for j in range(n):
            if j in blocked:
                continue
            # items skipped over since the previous top carry no share
            lo = profile.rank[j][prev_top[j]] + 1 if j in prev_top else 0
            for i in profile.order[j][lo: profile.rank[j][tops[j]]]:
                if p[j][i] is None:
                    p[j][i] = ZERO
            if j in prev_top:
                upto = profile.order[j][: profile.rank[j][prev_top[j]] + 1]
                demand[j] = ONE - sum(p[j][i] for i in upto)
            else:
                demand[j] = ONE
        eager_new: dict[int, list[int]] = {}
        for j in range(n):
            if j not in seen[tops[j]]:
                eager_new.setdefault(tops[j], []).append(j)
        log.append((frozenset(profile.items[i] for i in remaining),
                    {profile.items[i]: tuple(profile.agents[j] for j in js) for i, js in sorted(eager_new.items())}))
        if not eager_new:
            break
        for i, js in sorted(eager_new.items()):
            if any(j in blocked for j in js):
                stopped = f"round {r}: demand for {profile.items[i]} depends on open shares"
                break
            supply = ONE - taken[i]
            total = sum(demand[j] for j in js)
            if total <= supply:
                for j in js:
                    p[j][i] = demand[j]
                taken[i] += total
            else:
                classes = _sete_classes(profile, js, i) if sete else [[j] for j in js]
                if len(classes) == 1:
                    share = supply / len(js)
                    if any(demand[j] < share for j in js):
                        raise InputError(f"no assignment with equal treatment splits {profile.items[i]}")
                    for j in js:
                        p[j][i] = share
                else:
                    blocked.update(js)
                taken[i] = ONE
            seen[i].update(js)
        if stopped:
            break
        prev_top = {j: tops[j] for j in range(n)}
    # closures: exhausted columns and full rows force zeros
    for i in range(n):
        col = [p[j][i] for j in range(n)]
        if all(x is not None for x in col if x) and sum(x for x in col if x) == 1:
            for j in range(n):
                if p[j][i] is None:
                    p[j][i] = ZERO
    for j in range(n):
        if sum(x for x in p[j] if x) == 1:
            p[j] = [x if x is not None else ZERO for x in p[j]]
    return ForcedShares(profile, p, log, stopped)


# -- ex-post eagerness under a support restriction ----------------------------


@dataclass(frozen=True)
class FeriSearch:
    found: DeterministicAssignment | None
    states: int  # distinct (items, agents) states visited
    deepest_round: int


def feri_within_support(profile: PreferenceProfile, allowed, budget: int = 10**6) -> FeriSearch:
    """Search for an eagerness-respecting assignment using only pairs for which
    ``allowed(agent_index, item_index)`` holds.

    Such assignments are exactly the outcomes of adaptive rounds where every
    applied-for item goes to one of its applicants, so the search walks those
    rounds and memoises dead (items, agents) states.
    """
    from itertools import product

    dead: set = set()
    deepest = [0]

    def rec(items: frozenset, agents: frozenset, depth: int):
        deepest[0] = max(deepest[0], depth)
        if not items:
            return {}
        key = (items, agents)
        if key in dead:
            return None
        if len(dead) >= budget:
            raise BudgetExceeded("support-restricted eagerness search", budget)
        apps: dict[int, list[int]] = {}
        for j in sorted(agents):
            apps.setdefault(profile.top_index(j, items), []).append(j)
        contested = sorted(apps)
        options = [[j for j in apps[i] if allowed(j, i)] for i in contested]
        if all(options):
            for choice in product(*options):
                sub = rec(items - set(contested), agents - set(choice), depth + 1)
                if sub is not None:
                    sub.update(zip(choice, contested))
                    return sub
        dead.add(key)
        return None

    n = profile.n
    res = rec(frozenset(range(n)), frozenset(range(n)), 1)
    found = None
    if res is not None:
        found = DeterministicAssignment(profile.agents, profile.items, tuple(res[j] for j in range(n)))
    return FeriSearch(found, len(dead), deepest[0])
