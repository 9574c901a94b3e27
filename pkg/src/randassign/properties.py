"""Efficiency, fairness and eagerness checkers.

Every checker returns a :class:`PropertyVerdict`; on failure ``witness`` is a
plain dict naming the agents, items and shares that exhibit the violation.
Deterministic checkers accept either a :class:`DeterministicAssignment` or a
0/1 :class:`RandomAssignment`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import permutations
from typing import Any, Callable

import networkx as nx

from .core import (
    ONE,
    ZERO,
    BudgetExceeded,
    ConvexDecomposition,
    DeterministicAssignment,
    InputError,
    PreferenceProfile,
    RandomAssignment,
    prefix_length,
)
from .eating import ea_feri_trace

DEFAULT_MAX_AGENTS = 8


@dataclass(frozen=True)
class PropertyVerdict:
    holds: bool
    witness: dict | None = None
    certificate: Any = None  # ConvexDecomposition for ep-X successes
    detail: dict = field(default_factory=dict)

    def __bool__(self) -> bool:
        return self.holds


def _ok(**detail) -> PropertyVerdict:
    return PropertyVerdict(True, None, None, detail)


def _fail(**witness) -> PropertyVerdict:
    return PropertyVerdict(False, witness)


@dataclass(frozen=True)
class FeriTiers:
    tiers: tuple[frozenset, ...]


@dataclass(frozen=True)
class RankSignature:
    vector: tuple[int, ...]

    def dominates(self, other: "RankSignature") -> bool:
        """Strict lexicographic dominance."""
        return self.vector > other.vector


def _det(A, profile: PreferenceProfile) -> DeterministicAssignment:
    if isinstance(A, RandomAssignment):
        A = A.to_deterministic()
    if not isinstance(A, DeterministicAssignment):
        raise InputError("expected a deterministic assignment")
    if A.agents != profile.agents or A.items != profile.items:
        raise InputError("assignment and profile disagree on agents or items")
    return A


def _rand(P, profile: PreferenceProfile) -> RandomAssignment:
    if isinstance(P, DeterministicAssignment):
        P = P.to_random()
    if not isinstance(P, RandomAssignment):
        raise InputError("expected a random assignment")
    if P.agents != profile.agents or P.items != profile.items:
        raise InputError("assignment and profile disagree on agents or items")
    return P


def _check_budget(profile, max_agents):
    if profile.n > max_agents:
        raise BudgetExceeded(f"{profile.n}! assignments", math.factorial(max_agents))


# -- deterministic properties ---------------------------------------------------


def improvement_graph(A: DeterministicAssignment, profile: PreferenceProfile) -> nx.DiGraph:
    """Edge j -> k when agent j prefers k's item to her own."""
    g = nx.DiGraph()
    g.add_nodes_from(range(profile.n))
    holder = {i: j for j, i in enumerate(A.perm)}
    for j in range(profile.n):
        mine = profile.rank[j][A.perm[j]]
        for i in profile.order[j][:mine]:
            g.add_edge(j, holder[i])
    return g


def is_pe(A, profile: PreferenceProfile) -> PropertyVerdict:
    A = _det(A, profile)
    try:
        cycle = nx.find_cycle(improvement_graph(A, profile))
    except nx.NetworkXNoCycle:
        return _ok()
    agents = [j for j, _ in cycle]
    return _fail(cycle=[profile.agents[j] for j in agents],
                 wants=[profile.items[A.perm[k]] for _, k in cycle])


def is_fcm(A, profile: PreferenceProfile) -> PropertyVerdict:
    A = _det(A, profile)
    n = profile.n
    tops = [profile.order[j][0] for j in range(n)]
    got = sum(A.perm[j] == tops[j] for j in range(n))
    best = len(set(tops))
    if got == best:
        return _ok(first_choices=got)
    # one fan per top item, everyone else fills in by index
    perm = [-1] * n
    used = set()
    for j in range(n):
        if tops[j] not in used:
            perm[j] = tops[j]
            used.add(tops[j])
    free = iter(i for i in range(n) if i not in used)
    for j in range(n):
        if perm[j] < 0:
            perm[j] = next(free)
    better = DeterministicAssignment(profile.agents, profile.items, tuple(perm))
    return _fail(first_choices=got, achievable=best, better=better.as_dict())


def is_fhr(A, profile: PreferenceProfile) -> PropertyVerdict:
    A = _det(A, profile)
    n = profile.n
    for j in range(n):
        o = A.perm[j]
        for k in range(n):
            if profile.rank[k][o] < profile.rank[j][o] and profile.rank[k][A.perm[k]] > profile.rank[k][o]:
                return _fail(holder=profile.agents[j], agent=profile.agents[k], item=profile.items[o])
    return _ok()


def feri_tiers(A, profile: PreferenceProfile) -> FeriTiers:
    A = _det(A, profile)
    n = profile.n
    removed: set[int] = set()
    tiers = []
    while len(removed) < n:
        rest = set(range(n)) - removed
        tier = {profile.top_index(j, rest) for j in range(n) if A.perm[j] not in removed}
        tiers.append(frozenset(profile.items[i] for i in tier))
        removed |= tier
    return FeriTiers(tuple(tiers))


def is_feri(A, profile: PreferenceProfile) -> tuple[PropertyVerdict, FeriTiers]:
    A = _det(A, profile)
    tiers = feri_tiers(A, profile)
    removed: set[int] = set()
    holder = {i: j for j, i in enumerate(A.perm)}
    for r, tier in enumerate(tiers.tiers, start=1):
        rest = set(range(profile.n)) - removed
        for o in profile.items:
            if o not in tier:
                continue
            i = profile.item_index(o)
            j = holder[i]
            top = profile.top_index(j, rest)
            if top != i:
                return _fail(item=o, tier=r, holder=profile.agents[j], holder_top=profile.items[top]), tiers
        removed |= {profile.item_index(o) for o in tier}
    return _ok(tiers=[sorted(t, key=profile.items.index) for t in tiers.tiers]), tiers


def rank_signature(A, profile: PreferenceProfile) -> RankSignature:
    A = _det(A, profile)
    v = [0] * profile.n
    for j, i in enumerate(A.perm):
        v[profile.rank[j][i]] += 1
    return RankSignature(tuple(v))


def _all_bijections(profile):
    for perm in permutations(range(profile.n)):
        yield DeterministicAssignment(profile.agents, profile.items, perm)


def is_rm(A, profile: PreferenceProfile, max_agents: int = DEFAULT_MAX_AGENTS) -> PropertyVerdict:
    A = _det(A, profile)
    _check_budget(profile, max_agents)
    mine = rank_signature(A, profile)
    best, arg = mine, A
    for B in _all_bijections(profile):
        s = rank_signature(B, profile)
        if s.dominates(best):
            best, arg = s, B
    if best == mine:
        return _ok(signature=mine.vector)
    return _fail(signature=mine.vector, dominated_by=best.vector, better=arg.as_dict())


def popularity_margin(A, B, profile: PreferenceProfile) -> tuple[int, int]:
    """(agents preferring B, agents preferring A)."""
    A, B = _det(A, profile), _det(B, profile)
    to_b = sum(profile.rank[j][B.perm[j]] < profile.rank[j][A.perm[j]] for j in range(profile.n))
    to_a = sum(profile.rank[j][A.perm[j]] < profile.rank[j][B.perm[j]] for j in range(profile.n))
    return to_b, to_a


def more_popular(A, profile: PreferenceProfile, max_agents: int = DEFAULT_MAX_AGENTS):
    """First assignment (lexicographic) strictly more popular than A, if any."""
    A = _det(A, profile)
    _check_budget(profile, max_agents)
    for B in _all_bijections(profile):
        up, down = popularity_margin(A, B, profile)
        if up > down:
            return B
    return None


def is_pop(A, profile: PreferenceProfile, max_agents: int = DEFAULT_MAX_AGENTS) -> PropertyVerdict:
    """Popularity via its structural characterisation.

    Each agent must hold her top item or her best item among those nobody
    ranks first, and every first-ranked item must be taken by one of its fans.
    """
    A = _det(A, profile)
    n = profile.n
    f_posts = {profile.order[j][0] for j in range(n)}
    non_f = set(range(n)) - f_posts
    bad = None
    for j in range(n):
        ok = {profile.order[j][0]}
        if non_f:
            ok.add(profile.top_index(j, non_f))
        if A.perm[j] not in ok:
            bad = j
            break
    if bad is None:
        holder = {i: j for j, i in enumerate(A.perm)}
        for i in sorted(f_posts):
            if profile.order[holder[i]][0] != i:
                bad = holder[i]
                break
    if bad is None:
        return _ok()
    witness = {"agent": profile.agents[bad], "item": profile.items[A.perm[bad]]}
    if n <= max_agents:
        B = more_popular(A, profile, max_agents)
        if B is not None:
            witness["more_popular"] = B.as_dict()
            witness["margin"] = list(popularity_margin(A, B, profile))
    return PropertyVerdict(False, witness)


# -- random-assignment properties ----------------------------------------------


def tau_graph(P, profile: PreferenceProfile) -> nx.DiGraph:
    P = _rand(P, profile)
    g = nx.DiGraph()
    g.add_nodes_from(profile.items)
    for j in range(profile.n):
        order = profile.order[j]
        for pos, b in enumerate(order):
            if P.matrix[j][b] > 0:
                for a in order[:pos]:
                    g.add_edge(profile.items[a], profile.items[b])
    return g


def is_sd_pe(P, profile: PreferenceProfile) -> PropertyVerdict:
    try:
        cycle = nx.find_cycle(tau_graph(P, profile))
    except nx.NetworkXNoCycle:
        return _ok()
    return _fail(cycle=[u for u, _ in cycle])


def _upper_share(P: RandomAssignment, profile, j: int, i: int) -> Fraction:
    order = profile.order[j]
    return sum((P.matrix[j][k] for k in order[: profile.rank[j][i] + 1]), ZERO)


def is_ea_feri(P, profile: PreferenceProfile) -> PropertyVerdict:
    P = _rand(P, profile)
    trace = ea_feri_trace(P, profile)
    for r, rd in enumerate(trace.rounds, start=1):
        for o in profile.items:
            if o not in rd.remaining:
                continue
            i = profile.item_index(o)
            for a in sorted(trace.eager_before(r, o), key=profile.agents.index):
                j = profile.agent_index(a)
                share = _upper_share(P, profile, j, i)
                if share != 1:
                    return _fail(agent=a, item=o, round=r, cumulative=share, shortfall=ONE - share)
    return _ok(rounds=len(trace.rounds))


def is_ea_fhr(P, profile: PreferenceProfile) -> PropertyVerdict:
    P = _rand(P, profile)
    n = profile.n
    for j in range(n):
        for i in profile.order[j]:
            if P.matrix[j][i] == 0:
                continue
            for k in range(n):
                if profile.rank[k][i] < profile.rank[j][i]:
                    share = _upper_share(P, profile, k, i)
                    if share != 1:
                        return _fail(holder=profile.agents[j], agent=profile.agents[k],
                                     item=profile.items[i], cumulative=share)
    return _ok()


def is_sete(P, profile: PreferenceProfile) -> PropertyVerdict:
    P = _rand(P, profile)
    n = profile.n
    for j in range(n):
        for k in range(j + 1, n):
            for i in profile.order[j][: prefix_length(profile.order[j], profile.order[k])]:
                if P.matrix[j][i] != P.matrix[k][i]:
                    return _fail(pair=[profile.agents[j], profile.agents[k]], item=profile.items[i],
                                 shares=[P.matrix[j][i], P.matrix[k][i]])
    return _ok()


def _first_shortfall(p, q, order):
    """First position where p's cumulative share drops below q's."""
    sp = sq = ZERO
    for i in order:
        sp += p[i]
        sq += q[i]
        if sp < sq:
            return i, sp, sq
    return None


def is_sd_ef(P, profile: PreferenceProfile) -> PropertyVerdict:
    P = _rand(P, profile)
    n = profile.n
    for j in range(n):
        for k in range(n):
            if j == k:
                continue
            hit = _first_shortfall(P.matrix[j], P.matrix[k], profile.order[j])
            if hit:
                i, own, other = hit
                return _fail(pair=[profile.agents[j], profile.agents[k]], item=profile.items[i],
                             own=own, other=other)
    return _ok()


def is_sd_wef(P, profile: PreferenceProfile) -> PropertyVerdict:
    P = _rand(P, profile)
    n = profile.n
    for j in range(n):
        for k in range(n):
            if j == k or P.matrix[j] == P.matrix[k]:
                continue
            if _first_shortfall(P.matrix[k], P.matrix[j], profile.order[j]) is None:
                strict = [profile.items[i] for i, s, t in _cumulative_pairs(P.matrix[j], P.matrix[k], profile.order[j])
                          if s < t]
                return _fail(pair=[profile.agents[j], profile.agents[k]], strict_at=strict)
    return _ok()


def _cumulative_pairs(p, q, order):
    sp = sq = ZERO
    for i in order:
        sp += p[i]
        sq += q[i]
        yield i, sp, sq


# -- registries and ex-post membership ---------------------------------------

DETERMINISTIC: dict[str, Callable] = {
    "pe": is_pe,
    "fcm": is_fcm,
    "fhr": is_fhr,
    "feri": lambda A, profile: is_feri(A, profile)[0],
    "rm": is_rm,
    "pop": is_pop,
}

RANDOM: dict[str, Callable] = {
    "sd-pe": is_sd_pe,
    "ea-feri": is_ea_feri,
    "ea-fhr": is_ea_fhr,
    "sete": is_sete,
    "sd-ef": is_sd_ef,
    "sd-wef": is_sd_wef,
}


def satisfying(profile: PreferenceProfile, base: str, max_agents: int = DEFAULT_MAX_AGENTS):
    """All bijections passing the named deterministic checker."""
    if base not in DETERMINISTIC:
        raise InputError(f"unknown deterministic property {base!r}")
    _check_budget(profile, max_agents)
    check = DETERMINISTIC[base]
    if base == "rm":
        sigs = {B.perm: rank_signature(B, profile).vector for B in _all_bijections(profile)}
        top = max(sigs.values())
        return [DeterministicAssignment(profile.agents, profile.items, p) for p, s in sigs.items() if s == top]
    return [B for B in _all_bijections(profile) if check(B, profile)]


def is_ep(P, profile: PreferenceProfile, base: str, max_agents: int = DEFAULT_MAX_AGENTS) -> PropertyVerdict:
    """Whether P is a lottery over assignments satisfying ``base``."""
    from .oracles import exact_feasibility

    P = _rand(P, profile)
    gens = satisfying(profile, base, max_agents)
    dec = exact_feasibility(P, gens)
    if dec is None:
        return PropertyVerdict(False, {"base": base, "generators": len(gens), "reason": "infeasible"})
    return PropertyVerdict(True, None, dec, {"base": base, "generators": len(gens)})


def check_property(name: str, P, profile: PreferenceProfile, **kw) -> PropertyVerdict:
    """Dispatch by property id (``feri``, ``sd-wef``, ``ep-fhr``, ...)."""
    name = name.lower()
    if name in DETERMINISTIC:
        return DETERMINISTIC[name](P, profile, **kw) if name in ("rm", "pop") else DETERMINISTIC[name](P, profile)
    if name in RANDOM:
        return RANDOM[name](P, profile)
    if name.startswith("ep-") and name[3:] in DETERMINISTIC:
        return is_ep(P, profile, name[3:], **kw)
    raise InputError(f"unknown property {name!r}")


PROPERTY_IDS = tuple(DETERMINISTIC) + tuple(RANDOM) + tuple(f"ep-{b}" for b in DETERMINISTIC)
