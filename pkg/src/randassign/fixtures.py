"""Reference instances with their published share tables.

Where a table leaves entries open (printed as "?"), the corresponding cell
here is ``None``.
"""

from __future__ import annotations

from fractions import Fraction as Fr

from .core import DeterministicAssignment, PreferenceProfile, RandomAssignment


def _profile(rankings: dict[str, str | list[str]], items=None) -> PreferenceProfile:
    rankings = {a: (r.split() if isinstance(r, str) else list(r)) for a, r in rankings.items()}
    agents = tuple(rankings)
    items = tuple(items) if items is not None else tuple(sorted(next(iter(rankings.values()))))
    return PreferenceProfile(agents, items, rankings)


def _rows(profile, rows):
    """Partial table {agent: {item: share}}; unlisted items are 0, None keeps a '?'."""
    out = {}
    for a in profile.agents:
        given = rows.get(a, {})
        out[a] = {o: (given[o] if o in given else Fr(0)) for o in profile.items}
    return out


# six agents, six items; agents 3-5 identical
FIG1 = _profile({
    "1": "a b c d e f",
    "2": "b a c d e f",
    "3": "c e d f a b",
    "4": "c e d f a b",
    "5": "c e d f a b",
    "6": "c a b d e f",
})

A_STAR = DeterministicAssignment.from_mapping(FIG1, {"1": "a", "2": "b", "3": "c", "4": "e", "5": "f", "6": "d"})
CIRCLED = DeterministicAssignment.from_mapping(FIG1, {"1": "a", "2": "b", "3": "c", "4": "e", "5": "d", "6": "f"})
# A* with agents 4 and 5 moved up: preferred by two agents, worse for one
A_POPULAR_RIVAL = DeterministicAssignment.from_mapping(FIG1, {"1": "a", "2": "b", "3": "f", "4": "c", "5": "e", "6": "d"})
RM_WINNER = DeterministicAssignment.from_mapping(FIG1, {"1": "a", "2": "b", "3": "d", "4": "e", "5": "f", "6": "c"})
RM_LOSER = DeterministicAssignment.from_mapping(FIG1, {"1": "a", "2": "b", "3": "c", "4": "d", "5": "e", "6": "f"})

_third, _twelfth = Fr(1, 3), Fr(1, 12)

UPRE_FIG1 = RandomAssignment.from_rows(FIG1, {
    "1": {"a": 1}, "2": {"b": 1},
    **{a: {"c": Fr(1, 4), "d": _twelfth, "e": _third, "f": _third} for a in "345"},
    "6": {"c": Fr(1, 4), "d": Fr(3, 4)},
})

# forced by ex-post higher-rank favouring plus equal treatment; also the
# probabilistic rank mechanism's output on this profile
FHR_SETE_FIG1 = RandomAssignment.from_rows(FIG1, {
    "1": {"a": 1}, "2": {"b": 1},
    **{a: {"c": Fr(1, 4), "d": _third, "e": _third, "f": _twelfth} for a in "345"},
    "6": {"c": Fr(1, 4), "f": Fr(3, 4)},
})

# three agents, three items
TINY3 = _profile({"1": "a b c", "2": "a c b", "3": "b a c"})
RP_213 = DeterministicAssignment.from_mapping(TINY3, {"1": "b", "2": "a", "3": "c"})
TINY3_FCM = DeterministicAssignment.from_mapping(TINY3, {"1": "a", "2": "c", "3": "b"})
BM_213 = DeterministicAssignment.from_mapping(TINY3, {"1": "c", "2": "a", "3": "b"})
PS_TINY3 = RandomAssignment.from_rows(TINY3, {
    "1": {"a": Fr(1, 2), "b": Fr(1, 4), "c": Fr(1, 4)},
    "2": {"a": Fr(1, 2), "c": Fr(1, 2)},
    "3": {"b": Fr(3, 4), "c": Fr(1, 4)},
})

# four agents; agent 3 can mimic agent 4
ENVY4 = _profile({"1": "a c b d", "2": "a c b d", "3": "a b c d", "4": "b a d c"})
ENVY4_FORCED = _rows(ENVY4, {
    **{a: {"a": _third, "b": Fr(0), "c": None, "d": None} for a in "123"},
    "4": {"b": Fr(1)},
})
ENVY4_LIE = ENVY4.with_ranking("3", ENVY4.rankings["4"])
ENVY4_LIE_TABLE = RandomAssignment.from_rows(ENVY4_LIE, {
    "1": {"a": Fr(1, 2), "c": Fr(1, 2)}, "2": {"a": Fr(1, 2), "c": Fr(1, 2)},
    "3": {"b": Fr(1, 2), "d": Fr(1, 2)}, "4": {"b": Fr(1, 2), "d": Fr(1, 2)},
})

# eight agents, eight items; agent 8 gains by demoting b below e
WSP8 = _profile({
    "1": "a b d e f g h c",
    "2": "a h d e f g b c",
    **{str(k): "c d e f g b h a" for k in range(3, 8)},
    "8": "c d b e f g h a",
})
WSP8_LIE_RANKING = tuple("c d e b f g h a".split())
WSP8_LIE = WSP8.with_ranking("8", WSP8_LIE_RANKING)
_open = {"f": None, "g": None, "h": None}
WSP8_TABLE = _rows(WSP8, {
    "1": {"a": Fr(1, 2), "b": Fr(1, 2)},
    "2": {"a": Fr(1, 2), "h": Fr(1, 2)},
    **{str(k): {"c": Fr(1, 6), "d": Fr(1, 6), "e": Fr(1, 5), **_open} for k in range(3, 8)},
    "8": {"b": Fr(1, 2), "c": Fr(1, 6), "d": Fr(1, 6), **_open},
})
WSP8_LIE_TABLE = _rows(WSP8_LIE, {
    "1": {"a": Fr(1, 2), "b": Fr(1, 2)},
    "2": {"a": Fr(1, 2), "h": Fr(1, 2)},
    **{str(k): {"c": Fr(1, 6), "d": Fr(1, 6), "e": Fr(1, 6), **_open} for k in range(3, 8)},
    "8": {"b": Fr(1, 2), "c": Fr(1, 6), "d": Fr(1, 6), "e": Fr(1, 6)},
})

# eighteen agents: three blocks plus a cross-block agent x
_A = ["a1", "a2", "a3", "a4"]
_B = ["b1", "b2", "b3", "b4"]
_C = ["c1", "c2", "c3", "c4", "c5", "c6"]
_D = ["d1", "d2", "d3", "d4"]
CROSS18_ITEMS = tuple(_A + _B + _C + _D)


def _complete(head):
    return head + [o for o in CROSS18_ITEMS if o not in head]


CROSS18 = PreferenceProfile(
    tuple([str(k) for k in range(1, 18)] + ["x"]),
    CROSS18_ITEMS,
    {
        "1": _complete(["a1", "a2", "a3"]),
        "2": _complete(["a1", "a2", "a3"]),
        "3": _complete(["a1", "a2", "a4"]),
        "4": _complete(["b1", "b2", "b3"]),
        "5": _complete(["b1", "b2", "b3"]),
        "6": _complete(["b1", "b2", "b4"]),
        **{str(k): _complete(list(_C)) for k in range(7, 18)},
        "x": _complete(["c1", "c2", "c3", "a3", "b3", "c5", "c4", "c6"]),
    },
)
CROSS18_TABLE = _rows(CROSS18, {
    **{a: {"a1": _third, "a2": _third, "a3": _third} for a in "12"},
    "3": {"a1": _third, "a2": _third, "a4": _third},
    **{a: {"b1": _third, "b2": _third, "b3": _third} for a in "45"},
    "6": {"b1": _third, "b2": _third, "b4": _third},
    **{str(k): {"c1": _twelfth, "c2": _twelfth, "c3": _twelfth, "c4": Fr(1, 11), "c5": Fr(1, 11),
                "c6": _twelfth} for k in range(7, 18)},
    "x": {"a3": _third, "b3": _third, "c1": _twelfth, "c2": _twelfth, "c3": _twelfth, "c6": _twelfth},
})


def _printed_block(agent):
    if agent in ("1", "2", "3"):
        return _A
    if agent in ("4", "5", "6"):
        return _B
    return _A + _B + _C if agent == "x" else _C


# only the printed sub-blocks are claims; everything else stays open
for _a, _row in CROSS18_TABLE.items():
    for _o in _row:
        if _o not in _printed_block(_a):
            _row[_o] = None

# five agents: EBM and uniform ABM disagree
SEPARATION5 = _profile({
    "1": "a c b d e", "2": "a c b d e",
    "3": "b c a d e", "4": "b c a d e", "5": "b c a d e",
})

# ten agents: the lottery expectation is not sd-efficient
_ten_items = list("abcdefghxy")


def _ten(head):
    return head + sorted(o for o in _ten_items if o not in head)


SDPE10 = PreferenceProfile(
    tuple(str(k) for k in range(1, 11)),
    tuple(_ten_items),
    {
        "1": _ten(list("abc")), "2": _ten(list("abd")), "3": _ten(list("abe")), "4": _ten(list("abf")),
        **{str(k): _ten(list("abgcdxy")) for k in (5, 6, 7)},
        **{str(k): _ten(list("abhefyx")) for k in (8, 9, 10)},
    },
)

PROFILES = {
    "fig1": FIG1,
    "tiny3": TINY3,
    "envy4": ENVY4,
    "wsp8": WSP8,
    "cross18": CROSS18,
    "separation5": SEPARATION5,
    "sdpe10": SDPE10,
}
