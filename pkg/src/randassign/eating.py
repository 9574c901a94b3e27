"""Simultaneous-eating mechanisms over exact piecewise-constant speeds.

``pre_run`` is the round-based probabilistic-respecting-eagerness family:
in every round each unsatisfied agent eats her top item among those with
positive supply, and each item is eaten by its own eaters until it runs out
or they are all satisfied. ``ps_run`` is the classic probabilistic serial
rule, which instead removes items at the global instant they run out.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Sequence

from .core import ONE, ZERO, InputError, PreferenceProfile, RandomAssignment


class NotEaFeriError(InputError):
    """Speed recovery needs an ex-ante eagerness-respecting assignment."""

    def __init__(self, verdict):
        super().__init__(f"assignment is not ea-FERI: {verdict.witness}")
        self.verdict = verdict


@dataclass(frozen=True)
class EatingSpeedProfile:
    """Per agent, (start, end, rate) pieces partitioning [0, 1].

    Intervals are half-open; the rate is zero beyond t = 1.
    """

    pieces: Mapping[str, tuple[tuple[Fraction, Fraction, Fraction], ...]]

    def __post_init__(self):
        clean = {}
        for agent, ps in self.pieces.items():
            ps = tuple((Fraction(s), Fraction(e), Fraction(r)) for s, e, r in ps)
            if not ps or ps[0][0] != 0 or ps[-1][1] != 1:
                raise InputError(f"speed pieces of agent {agent} must cover [0, 1]")
            for (s, e, r), nxt in zip(ps, ps[1:] + (None,)):
                if not s < e or r < 0:
                    raise InputError(f"bad speed piece {(s, e, r)} for agent {agent}")
                if nxt is not None and nxt[0] != e:
                    raise InputError(f"speed pieces of agent {agent} leave a gap or overlap at {e}")
            total = sum((e - s) * r for s, e, r in ps)
            if total != 1:
                raise InputError(f"speed of agent {agent} integrates to {total}, not 1")
            clean[str(agent)] = ps
        object.__setattr__(self, "pieces", clean)

    @classmethod
    def uniform(cls, agents) -> "EatingSpeedProfile":
        return cls({a: ((ZERO, ONE, ONE),) for a in agents})

    def eaten(self, agent: str, t: Fraction) -> Fraction:
        """Cumulative consumption of ``agent`` over [0, min(t, 1)]."""
        total = ZERO
        for s, e, r in self.pieces[agent]:
            if t <= s:
                break
            total += (min(t, e) - s) * r
        return total

    def rate(self, agent: str, t: Fraction) -> Fraction:
        """Right-continuous rate at t."""
        for s, e, r in self.pieces[agent]:
            if s <= t < e:
                return r
        return ZERO

    def breakpoints(self, agent: str) -> list[Fraction]:
        return [e for _, e, _ in self.pieces[agent]]

    def check(self, profile: PreferenceProfile) -> "EatingSpeedProfile":
        if set(self.pieces) != set(profile.agents):
            raise InputError("speed profile must cover exactly the profile's agents")
        return self


def gamma(eaters: Sequence[str], elapsed: Mapping[str, Fraction], supply: Fraction,
          speeds: EatingSpeedProfile) -> Fraction:
    """Consumption duration for one item: the earliest time the eaters either
    exhaust ``supply`` or are all satisfied."""
    if not eaters:
        raise InputError("empty eater set")
    supply = Fraction(supply)
    if supply < 0:
        raise InputError("negative supply")
    start = {a: Fraction(elapsed[a]) for a in eaters}
    base = {a: speeds.eaten(a, start[a]) for a in eaters}
    demand = sum(ONE - base[a] for a in eaters)
    target = min(supply, demand)
    if target <= 0:
        return ZERO
    cuts = sorted({b - start[a] for a in eaters for b in speeds.breakpoints(a) if b > start[a]})
    rho0, eaten = ZERO, ZERO
    for rho1 in cuts:
        slope = sum(speeds.rate(a, start[a] + rho0) for a in eaters)
        gain = slope * (rho1 - rho0)
        if eaten + gain >= target:
            return rho0 + (target - eaten) / slope
        eaten += gain
        rho0 = rho1
    raise AssertionError("consumption target unreachable")  # target <= demand


@dataclass
class EatingState:
    supplies: dict
    elapsed: dict
    log: list = field(default_factory=list)  # (round, item, eaters, rho, amounts)


def pre_run(profile: PreferenceProfile, speeds: EatingSpeedProfile | None = None,
            item_order: Sequence[int] | None = None) -> tuple[RandomAssignment, EatingState]:
    """Run the eagerness-respecting eating algorithm under ``speeds``.

    ``item_order`` only changes the order in which items are processed within
    a round; outputs do not depend on it.
    """
    A, M = profile.agents, profile.items
    n = profile.n
    speeds = (speeds or EatingSpeedProfile.uniform(A)).check(profile)
    supply = [ONE] * n
    elapsed = {a: ZERO for a in A}
    shares = [[ZERO] * n for _ in range(n)]
    state = EatingState({}, {})
    order = list(item_order) if item_order is not None else list(range(n))
    remaining = [i for i in order if supply[i] > 0]
    rnd = 0
    while remaining:
        rnd += 1
        avail = set(remaining)
        eaters: dict[int, list[int]] = {}
        for j in range(n):
            if speeds.eaten(A[j], elapsed[A[j]]) < 1:  # satisfied agents sit out
                eaters.setdefault(profile.top_index(j, avail), []).append(j)
        updates = []
        for i in remaining:
            js = eaters.get(i)
            if not js:
                continue
            names = [A[j] for j in js]
            rho = gamma(names, elapsed, supply[i], speeds)
            amounts = {a: speeds.eaten(a, elapsed[a] + rho) - speeds.eaten(a, elapsed[a]) for a in names}
            updates.append((i, js, rho, amounts))
        if not updates:
            raise AssertionError("eating stalled with supply left")
        for i, js, rho, amounts in updates:
            for j in js:
                shares[j][i] += amounts[A[j]]
                elapsed[A[j]] = min(ONE, elapsed[A[j]] + rho)
            supply[i] -= sum(amounts.values())
            state.log.append((rnd, M[i], tuple(A[j] for j in js), rho, amounts))
        remaining = [i for i in remaining if supply[i] > 0]
    state.supplies = {M[i]: supply[i] for i in range(n)}
    state.elapsed = dict(elapsed)
    return RandomAssignment(A, M, tuple(map(tuple, shares))), state


def upre_run(profile: PreferenceProfile) -> RandomAssignment:
    return pre_run(profile)[0]


def ps_run(profile: PreferenceProfile) -> RandomAssignment:
    """Probabilistic serial with unit speeds and a single global clock."""
    n = profile.n
    supply = [ONE] * n
    shares = [[ZERO] * n for _ in range(n)]
    avail = set(range(n))
    t = ZERO
    while t < 1:
        eaters: dict[int, int] = {}
        target = {}
        for j in range(n):
            i = profile.top_index(j, avail)
            target[j] = i
            eaters[i] = eaters.get(i, 0) + 1
        dt = min([ONE - t] + [supply[i] / k for i, k in eaters.items()])
        for j, i in target.items():
            shares[j][i] += dt
        for i, k in eaters.items():
            supply[i] -= dt * k
        t += dt
        avail = {i for i in avail if supply[i] > 0}
    return RandomAssignment(profile.agents, profile.items, tuple(map(tuple, shares)))


# -- ex-ante eagerness structure -------------------------------------------------


@dataclass(frozen=True)
class EaFeriRound:
    remaining: frozenset  # items with positive residual supply
    eager: dict  # item -> frozenset of agents whose top remaining item it is
    supply: dict  # item -> residual supply
    demand: dict  # agent -> residual demand below her previous top


@dataclass(frozen=True)
class EaFeriTrace:
    rounds: tuple[EaFeriRound, ...]

    def eager_before(self, r: int, item: str) -> set:
        """Agents eager for ``item`` in some round before r (1-based)."""
        out = set()
        for rd in self.rounds[: r - 1]:
            out |= rd.eager.get(item, frozenset())
        return out


def ea_feri_trace(P: RandomAssignment, profile: PreferenceProfile) -> EaFeriTrace:
    """Rounds of remaining items and eager agents until a fixed point."""
    A, M = profile.agents, profile.items
    n = profile.n
    seen: list[set[int]] = [set() for _ in range(n)]  # past eager agents per item
    rounds = []
    prev_remaining = None
    prev_top: dict[int, int] = {}
    while True:
        supply = {i: ONE - sum(P.matrix[k][i] for k in seen[i]) for i in range(n)}
        remaining = frozenset(i for i in range(n) if supply[i] > 0)
        if not remaining:
            break
        demand = {}
        for j in range(n):
            if j in prev_top:
                top = prev_top[j]
                demand[A[j]] = ONE - sum(P.matrix[j][i] for i in profile.order[j][: profile.rank[j][top] + 1])
            else:
                demand[A[j]] = ONE
        eager: dict[int, set[int]] = {}
        tops = {}
        for j in range(n):
            i = profile.top_index(j, remaining)
            tops[j] = i
            eager.setdefault(i, set()).add(j)
        rounds.append(EaFeriRound(
            remaining=frozenset(M[i] for i in remaining),
            eager={M[i]: frozenset(A[j] for j in js) for i, js in eager.items()},
            supply={M[i]: supply[i] for i in remaining},
            demand=demand,
        ))
        if remaining == prev_remaining:
            break
        for i, js in eager.items():
            seen[i] |= js
        prev_remaining = remaining
        prev_top = tops
    return EaFeriTrace(tuple(rounds))


def recover_speeds(Q: RandomAssignment, profile: PreferenceProfile) -> EatingSpeedProfile:
    """Eating speeds under which the eating algorithm reproduces Q.

    Agent j eats at rate n * q[j, o] during [(r - 1)/n, r/n), where r is the
    first round in which j is eager for o.
    """
    from .properties import is_ea_feri

    verdict = is_ea_feri(Q, profile)
    if not verdict.holds:
        raise NotEaFeriError(verdict)
    n = profile.n
    trace = ea_feri_trace(Q, profile)
    if len(trace.rounds) > n:
        raise AssertionError("more eagerness rounds than agents")
    first_round: dict[tuple[str, str], int] = {}
    for r, rd in enumerate(trace.rounds, start=1):
        for o, js in rd.eager.items():
            for a in js:
                first_round.setdefault((a, o), r)
    pieces = {}
    width = Fraction(1, n)
    for j, a in enumerate(profile.agents):
        rates = [ZERO] * n
        for i, o in enumerate(profile.items):
            q = Q.matrix[j][i]
            if q:
                r = first_round.get((a, o))
                if r is None:
                    raise AssertionError(f"agent {a} holds {o} without ever being eager for it")
                rates[r - 1] = n * q
        pieces[a] = _merge_pieces([(k * width, (k + 1) * width, rates[k]) for k in range(n)])
    return EatingSpeedProfile(pieces)


def _merge_pieces(pieces):
    out = []
    for s, e, r in pieces:
        if out and out[-1][2] == r:
            out[-1] = (out[-1][0], e, r)
        else:
            out.append((s, e, r))
    return tuple(out)
