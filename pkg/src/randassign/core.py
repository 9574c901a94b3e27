"""Domain types and preference queries for the one-sided assignment problem.

Every share is a :class:`fractions.Fraction`; nothing in this package ever
touches floating point.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import permutations
from typing import Iterable, Mapping, Sequence

Rational = Fraction

ZERO = Fraction(0)
ONE = Fraction(1)


class InputError(ValueError):
    """Malformed or inconsistent input."""


class BudgetExceeded(RuntimeError):
    """An enumeration would exceed its configured bound."""

    def __init__(self, what: str, bound: int):
        super().__init__(f"{what} exceeds budget of {bound}")
        self.what = what
        self.bound = bound


# Agent and item identifiers are opaque strings; dense indices follow input order.


@dataclass(frozen=True)
class PreferenceProfile:
    agents: tuple[str, ...]
    items: tuple[str, ...]
    rankings: Mapping[str, tuple[str, ...]]
    # index views, filled in __post_init__
    order: tuple[tuple[int, ...], ...] = field(init=False, repr=False, compare=False)
    rank: tuple[tuple[int, ...], ...] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        agents = tuple(str(a) for a in self.agents)
        items = tuple(str(o) for o in self.items)
        if len(set(agents)) != len(agents):
            raise InputError("duplicate agent id")
        if len(set(items)) != len(items):
            raise InputError("duplicate item id")
        if len(agents) != len(items):
            raise InputError(f"{len(agents)} agents but {len(items)} items")
        if set(self.rankings) != set(agents):
            raise InputError("rankings must be given for exactly the listed agents")
        item_index = {o: i for i, o in enumerate(items)}
        rankings = {}
        order, rank = [], []
        for a in agents:
            ranking = tuple(str(o) for o in self.rankings[a])
            if len(ranking) != len(items) or set(ranking) != set(items):
                raise InputError(f"ranking of agent {a} is not a permutation of the items")
            rankings[a] = ranking
            idx = tuple(item_index[o] for o in ranking)
            r = [0] * len(items)
            for pos, i in enumerate(idx):
                r[i] = pos
            order.append(idx)
            rank.append(tuple(r))
        object.__setattr__(self, "agents", agents)
        object.__setattr__(self, "items", items)
        object.__setattr__(self, "rankings", rankings)
        object.__setattr__(self, "order", tuple(order))
        object.__setattr__(self, "rank", tuple(rank))

    def __hash__(self):
        return hash((self.agents, self.items, tuple(self.order)))

    @classmethod
    def from_orders(cls, orders: Sequence[Sequence[int]], agents=None, items=None):
        """Build a profile from rankings given as item-index sequences."""
        n = len(orders)
        agents = tuple(agents) if agents is not None else tuple(str(j + 1) for j in range(n))
        items = tuple(items) if items is not None else default_item_names(n)
        return cls(agents, items, {a: tuple(items[i] for i in o) for a, o in zip(agents, orders)})

    @property
    def n(self) -> int:
        return len(self.agents)

    def agent_index(self, agent) -> int:
        try:
            return self.agents.index(str(agent))
        except ValueError:
            raise InputError(f"unknown agent {agent!r}") from None

    def item_index(self, item) -> int:
        try:
            return self.items.index(str(item))
        except ValueError:
            raise InputError(f"unknown item {item!r}") from None

    def top_index(self, j: int, available) -> int:
        """Index of agent j's most preferred item among an index set."""
        for i in self.order[j]:
            if i in available:
                return i
        raise InputError("empty item subset")

    def with_ranking(self, agent, ranking: Sequence[str]) -> "PreferenceProfile":
        rankings = dict(self.rankings)
        rankings[str(agent)] = tuple(ranking)
        return PreferenceProfile(self.agents, self.items, rankings)


def default_item_names(n: int) -> tuple[str, ...]:
    if n <= 26:
        return tuple(chr(ord("a") + i) for i in range(n))
    return tuple(f"o{i + 1}" for i in range(n))


@dataclass(frozen=True)
class DeterministicAssignment:
    """A bijection agent -> item, stored as item indices by agent index."""

    agents: tuple[str, ...]
    items: tuple[str, ...]
    perm: tuple[int, ...]

    def __post_init__(self):
        if sorted(self.perm) != list(range(len(self.items))) or len(self.agents) != len(self.items):
            raise InputError("assignment is not a bijection")

    @classmethod
    def from_mapping(cls, profile: PreferenceProfile, mapping: Mapping) -> "DeterministicAssignment":
        mapping = {str(k): str(v) for k, v in mapping.items()}
        if set(mapping) != set(profile.agents):
            raise InputError("mapping must cover every agent exactly once")
        perm = tuple(profile.item_index(mapping[a]) for a in profile.agents)
        return cls(profile.agents, profile.items, perm)

    def __getitem__(self, agent) -> str:
        return self.items[self.perm[self.agents.index(str(agent))]]

    def holder(self, item) -> str:
        return self.agents[self.perm.index(self.items.index(str(item)))]

    def as_dict(self) -> dict[str, str]:
        return {a: self.items[i] for a, i in zip(self.agents, self.perm)}

    def to_random(self) -> "RandomAssignment":
        n = len(self.perm)
        rows = tuple(tuple(ONE if self.perm[j] == i else ZERO for i in range(n)) for j in range(n))
        return RandomAssignment(self.agents, self.items, rows)


@dataclass(frozen=True)
class RandomAssignment:
    """Doubly stochastic matrix of exact shares, rows by agent, columns by item."""

    agents: tuple[str, ...]
    items: tuple[str, ...]
    matrix: tuple[tuple[Fraction, ...], ...]

    def __post_init__(self):
        matrix = tuple(tuple(Fraction(x) for x in row) for row in self.matrix)
        object.__setattr__(self, "matrix", matrix)
        n = len(self.agents)
        if len(self.items) != n or len(matrix) != n or any(len(r) != n for r in matrix):
            raise InputError("matrix must be n x n over the listed agents and items")
        for row in matrix:
            for x in row:
                if x < 0 or x > 1:
                    raise InputError(f"entry {x} outside [0, 1]")
        for j, row in enumerate(matrix):
            if sum(row) != 1:
                raise InputError(f"row of agent {self.agents[j]} sums to {sum(row)}")
        for i in range(n):
            s = sum(row[i] for row in matrix)
            if s != 1:
                raise InputError(f"column of item {self.items[i]} sums to {s}")

    @classmethod
    def from_rows(cls, profile: PreferenceProfile, rows: Mapping) -> "RandomAssignment":
        """Rows given as {agent: {item: share}}; missing entries are zero."""
        matrix = []
        for a in profile.agents:
            row = {str(k): Fraction(v) for k, v in rows.get(a, rows.get(str(a), {})).items()}
            matrix.append(tuple(row.get(o, ZERO) for o in profile.items))
        return cls(profile.agents, profile.items, tuple(matrix))

    @property
    def n(self) -> int:
        return len(self.agents)

    def __getitem__(self, key) -> Fraction:
        agent, item = key
        return self.matrix[self.agents.index(str(agent))][self.items.index(str(item))]

    def row(self, agent) -> tuple[Fraction, ...]:
        return self.matrix[self.agents.index(str(agent))]

    def is_deterministic(self) -> bool:
        return all(x in (0, 1) for row in self.matrix for x in row)

    def to_deterministic(self) -> DeterministicAssignment:
        if not self.is_deterministic():
            raise InputError("assignment is not deterministic")
        return DeterministicAssignment(self.agents, self.items, tuple(row.index(ONE) for row in self.matrix))

    def rows_dict(self) -> dict[str, dict[str, Fraction]]:
        return {a: {o: x for o, x in zip(self.items, row) if x} for a, row in zip(self.agents, self.matrix)}


@dataclass(frozen=True)
class PriorityOrder:
    order: tuple[str, ...]

    def __post_init__(self):
        object.__setattr__(self, "order", tuple(str(a) for a in self.order))
        if len(set(self.order)) != len(self.order):
            raise InputError("priority order repeats an agent")

    def check(self, profile: PreferenceProfile) -> tuple[int, ...]:
        """Priority position of each agent index (0 = highest)."""
        if set(self.order) != set(profile.agents) or len(self.order) != profile.n:
            raise InputError("priority order is not a permutation of the agents")
        pos = {a: k for k, a in enumerate(self.order)}
        return tuple(pos[a] for a in profile.agents)


@dataclass(frozen=True)
class PriorityDistribution:
    weights: Mapping[PriorityOrder, Fraction]

    def __post_init__(self):
        weights = {}
        for k, w in self.weights.items():
            k = k if isinstance(k, PriorityOrder) else PriorityOrder(tuple(k))
            w = Fraction(w)
            if w < 0:
                raise InputError("negative priority weight")
            if w:
                weights[k] = weights.get(k, ZERO) + w
        if sum(weights.values()) != 1:
            raise InputError("priority weights must sum to 1")
        object.__setattr__(self, "weights", weights)

    @classmethod
    def uniform(cls, profile: PreferenceProfile) -> "PriorityDistribution":
        orders = list(permutations(profile.agents))
        w = Fraction(1, len(orders))
        return cls({PriorityOrder(o): w for o in orders})

    @classmethod
    def point(cls, order) -> "PriorityDistribution":
        order = order if isinstance(order, PriorityOrder) else PriorityOrder(tuple(order))
        return cls({order: ONE})


@dataclass(frozen=True)
class ConvexDecomposition:
    terms: tuple[tuple[Fraction, DeterministicAssignment], ...]

    def __post_init__(self):
        if any(c <= 0 for c, _ in self.terms):
            raise InputError("decomposition coefficients must be positive")
        if sum(c for c, _ in self.terms) != 1:
            raise InputError("decomposition coefficients must sum to 1")

    def combine(self) -> RandomAssignment:
        _, first = self.terms[0]
        n = len(first.perm)
        m = [[ZERO] * n for _ in range(n)]
        for c, a in self.terms:
            for j, i in enumerate(a.perm):
                m[j][i] += c
        return RandomAssignment(first.agents, first.items, tuple(map(tuple, m)))

    def reconstructs(self, target: RandomAssignment) -> bool:
        return self.combine().matrix == target.matrix


# -- preference queries --------------------------------------------------------


def rank_of(ranking: Sequence[str], item) -> int:
    try:
        return list(ranking).index(item) + 1
    except ValueError:
        raise InputError(f"item {item!r} not in ranking") from None


def top_among(ranking: Sequence[str], subset: Iterable) -> str:
    subset = set(subset)
    if not subset:
        raise InputError("empty item subset")
    for o in ranking:
        if o in subset:
            return o
    raise InputError("subset is not contained in the ranking's items")


def upper_contour(ranking: Sequence[str], item) -> frozenset:
    r = rank_of(ranking, item)
    return frozenset(ranking[:r])


def common_prefix(ranking_j: Sequence[str], ranking_k: Sequence[str]) -> list:
    if set(ranking_j) != set(ranking_k) or len(ranking_j) != len(ranking_k):
        raise InputError("rankings are over different item sets")
    prefix = []
    for x, y in zip(ranking_j, ranking_k):
        if x != y:
            break
        prefix.append(x)
    return prefix


def prefix_length(order_j: Sequence[int], order_k: Sequence[int]) -> int:
    k = 0
    for x, y in zip(order_j, order_k):
        if x != y:
            break
        k += 1
    return k


def cumulative(row: Sequence[Fraction], order: Sequence[int]) -> list[Fraction]:
    """Running totals of row along an item order."""
    out, s = [], ZERO
    for i in order:
        s += row[i]
        out.append(s)
    return out


def sd_dominates(p: Sequence, q: Sequence, ranking: Sequence) -> bool:
    """Whether allocation p weakly stochastically dominates q under ranking.

    ``p`` and ``q`` are either dense rows aligned with ``ranking``'s index
    space (ranking given as item indices) or mappings item -> share (ranking
    given as item ids).
    """
    if isinstance(p, Mapping) or isinstance(q, Mapping):
        p = dict(p)
        q = dict(q)
        sp = sq = ZERO
        for o in ranking:
            sp += Fraction(p.get(o, 0))
            sq += Fraction(q.get(o, 0))
            if sp < sq:
                return False
        return True
    if len(p) != len(q) or len(p) != len(ranking):
        raise InputError("allocation rows differ in shape")
    sp = sq = ZERO
    for i in ranking:
        sp += p[i]
        sq += q[i]
        if sp < sq:
            return False
    return True


# -- Birkhoff-von Neumann ------------------------------------------------------


def _perfect_matching(support: list[list[bool]]) -> list[int] | None:
    """Kuhn's augmenting paths; rows and columns tried in index order."""
    n = len(support)
    match_col = [-1] * n

    def augment(j, seen):
        for i in range(n):
            if support[j][i] and not seen[i]:
                seen[i] = True
                if match_col[i] < 0 or augment(match_col[i], seen):
                    match_col[i] = j
                    return True
        return False

    for j in range(n):
        if not augment(j, [False] * n):
            return None
    perm = [0] * n
    for i, j in enumerate(match_col):
        perm[j] = i
    return perm


def bvn_decompose(P: RandomAssignment) -> ConvexDecomposition:
    """Exact Birkhoff-von Neumann decomposition of a doubly stochastic matrix."""
    if not isinstance(P, RandomAssignment):
        raise InputError("expected a RandomAssignment")
    n = P.n
    m = [list(row) for row in P.matrix]
    terms = []
    remaining = ONE
    while remaining > 0:
        support = [[x > 0 for x in row] for row in m]
        perm = _perfect_matching(support)
        if perm is None:  # cannot happen for a scaled doubly stochastic matrix
            raise InputError("matrix is not doubly stochastic")
        c = min(m[j][perm[j]] for j in range(n))
        for j in range(n):
            m[j][perm[j]] -= c
        remaining -= c
        terms.append((c, DeterministicAssignment(P.agents, P.items, tuple(perm))))
    merged: dict[tuple[int, ...], Fraction] = {}
    for c, a in terms:
        merged[a.perm] = merged.get(a.perm, ZERO) + c
    out = tuple((c, DeterministicAssignment(P.agents, P.items, perm)) for perm, c in merged.items())
    return ConvexDecomposition(out)
