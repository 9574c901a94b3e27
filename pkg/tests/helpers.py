"""Shared generators for exhaustive and random profile sweeps."""

from __future__ import annotations

import random
from fractions import Fraction
from itertools import permutations, product

from hypothesis import strategies as st

from randassign.core import PreferenceProfile
from randassign.eating import EatingSpeedProfile


def all_profiles(n: int):
    """Every profile over n labelled agents (n!^n of them)."""
    for orders in product(list(permutations(range(n))), repeat=n):
        yield PreferenceProfile.from_orders(orders)


def random_profile(rng: random.Random, n: int) -> PreferenceProfile:
    orders = []
    for _ in range(n):
        o = list(range(n))
        rng.shuffle(o)
        orders.append(o)
    return PreferenceProfile.from_orders(orders)


def random_profiles(seed: int, count: int, sizes=(4,)):
    rng = random.Random(seed)
    return [random_profile(rng, rng.choice(sizes)) for _ in range(count)]


def random_speeds(rng: random.Random, agents, max_pieces: int = 3) -> EatingSpeedProfile:
    out = {}
    for a in agents:
        k = rng.randint(1, max_pieces)
        cuts = sorted({Fraction(rng.randint(1, 11), 12) for _ in range(k - 1)})
        bounds = [Fraction(0), *cuts, Fraction(1)]
        weights = [Fraction(rng.randint(0, 4)) for _ in range(len(bounds) - 1)]
        if not any(weights):
            weights[-1] = Fraction(1)
        mass = sum(w * (e - s) for w, s, e in zip(weights, bounds, bounds[1:]))
        out[a] = tuple((s, e, w / mass) for w, s, e in zip(weights, bounds, bounds[1:]))
    return EatingSpeedProfile(out)


@st.composite
def profiles(draw, min_n: int = 1, max_n: int = 4):
    n = draw(st.integers(min_n, max_n))
    orders = [draw(st.permutations(range(n))) for _ in range(n)]
    return PreferenceProfile.from_orders(orders)
