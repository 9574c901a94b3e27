"""Input coercion used at the public boundary."""

from __future__ import annotations

from collections.abc import Mapping, Sequence
from fractions import Fraction

from .core import DeterministicAssignment, InputError, PreferenceProfile, RandomAssignment


def check_profile(X) -> PreferenceProfile:
    """Accept a profile, a profile document, or a mapping agent -> ranking.

    A bare mapping takes its item universe from the first ranking, in that
    ranking's order.
    """
    if isinstance(X, PreferenceProfile):
        return X
    if isinstance(X, Mapping):
        if "preferences" in X:
            from .io import profile_from_doc

            return profile_from_doc(X)
        if not X:
            raise InputError("empty profile")
        rankings = {str(a): tuple(map(str, r.split() if isinstance(r, str) else r)) for a, r in X.items()}
        items = next(iter(rankings.values()))
        return PreferenceProfile(tuple(rankings), items, rankings)
    raise InputError(f"cannot read a preference profile from {type(X).__name__}")


def check_random_assignment(P, profile: PreferenceProfile | None = None) -> RandomAssignment:
    """Coerce to a RandomAssignment and, if given, check it matches ``profile``."""
    if isinstance(P, DeterministicAssignment):
        P = P.to_random()
    elif isinstance(P, Mapping):
        if profile is None:
            raise InputError("row mappings need a profile")
        P = RandomAssignment.from_rows(profile, P)
    elif isinstance(P, Sequence) and profile is not None:
        P = RandomAssignment(profile.agents, profile.items, tuple(tuple(map(Fraction, r)) for r in P))
    if not isinstance(P, RandomAssignment):
        raise InputError(f"cannot read an assignment from {type(P).__name__}")
    if profile is not None and (P.agents != profile.agents or P.items != profile.items):
        raise InputError("assignment agents/items differ from the profile")
    return P
