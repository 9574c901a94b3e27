"""JSON documents for profiles, assignments, speeds and decompositions.

Rationals travel as lowest-terms ``"num/den"`` strings; plain integer strings
are accepted on input.
"""

from __future__ import annotations

import json
import re
from fractions import Fraction
from pathlib import Path
from typing import Any

from .core import (
    ConvexDecomposition,
    DeterministicAssignment,
    InputError,
    PreferenceProfile,
    RandomAssignment,
)
from .eating import EatingSpeedProfile

VERSION = 1
_RATIONAL = re.compile(r"^\s*(-?\d+)\s*(?:/\s*(\d+)\s*)?$")


def format_rational(x: Fraction) -> str:
    x = Fraction(x)
    return f"{x.numerator}/{x.denominator}"


def parse_rational(s: Any) -> Fraction:
    if isinstance(s, bool) or not isinstance(s, (str, int)):
        raise InputError(f"rational must be a 'num/den' string, got {s!r}")
    m = _RATIONAL.match(str(s))
    if not m:
        raise InputError(f"malformed rational {s!r}")
    den = int(m.group(2)) if m.group(2) else 1
    if den == 0:
        raise InputError(f"zero denominator in {s!r}")
    return Fraction(int(m.group(1)), den)


def _require(doc: dict, *keys):
    if not isinstance(doc, dict):
        raise InputError("document must be a JSON object")
    missing = [k for k in keys if k not in doc]
    if missing:
        raise InputError(f"document lacks field(s): {', '.join(missing)}")
    if doc.get("version", VERSION) != VERSION:
        raise InputError(f"unsupported document version {doc.get('version')!r}")


def profile_to_doc(profile: PreferenceProfile) -> dict:
    return {
        "version": VERSION,
        "agents": list(profile.agents),
        "items": list(profile.items),
        "preferences": {a: list(profile.rankings[a]) for a in profile.agents},
    }


def profile_from_doc(doc: dict) -> PreferenceProfile:
    _require(doc, "agents", "items", "preferences")
    prefs = doc["preferences"]
    if not isinstance(prefs, dict):
        raise InputError("preferences must map agent ids to item lists")
    return PreferenceProfile(tuple(map(str, doc["agents"])), tuple(map(str, doc["items"])),
                             {str(a): tuple(map(str, r)) for a, r in prefs.items()})


def assignment_to_doc(P, provenance: dict | None = None) -> dict:
    if isinstance(P, DeterministicAssignment):
        P = P.to_random()
    doc = {
        "version": VERSION,
        "agents": list(P.agents),
        "items": list(P.items),
        "matrix": [[format_rational(x) for x in row] for row in P.matrix],
    }
    if provenance:
        doc["provenance"] = provenance
    return doc


def assignment_from_doc(doc: dict) -> RandomAssignment:
    """Read a matrix document, or a deterministic ``assignment`` mapping."""
    if isinstance(doc, dict) and "assignment" in doc and "matrix" not in doc:
        _require(doc, "agents", "items", "assignment")
        agents, items = tuple(map(str, doc["agents"])), tuple(map(str, doc["items"]))
        mapping = {str(k): str(v) for k, v in doc["assignment"].items()}
        if set(mapping) != set(agents) or sorted(mapping.values()) != sorted(items):
            raise InputError("assignment mapping is not a bijection over the listed agents and items")
        return DeterministicAssignment(agents, items, tuple(items.index(mapping[a]) for a in agents)).to_random()
    _require(doc, "agents", "items", "matrix")
    matrix = doc["matrix"]
    if not isinstance(matrix, list) or not all(isinstance(r, list) for r in matrix):
        raise InputError("matrix must be a list of rows")
    rows = tuple(tuple(parse_rational(x) for x in row) for row in matrix)
    return RandomAssignment(tuple(map(str, doc["agents"])), tuple(map(str, doc["items"])), rows)


def speeds_to_doc(speeds: EatingSpeedProfile) -> dict:
    return {
        "version": VERSION,
        "speeds": {a: [[format_rational(s), format_rational(e), format_rational(r)] for s, e, r in ps]
                   for a, ps in speeds.pieces.items()},
    }


def speeds_from_doc(doc: dict) -> EatingSpeedProfile:
    _require(doc, "speeds")
    try:
        return EatingSpeedProfile({
            str(a): tuple(tuple(parse_rational(v) for v in piece) for piece in ps)
            for a, ps in doc["speeds"].items()
        })
    except (TypeError, ValueError, AttributeError) as exc:
        if isinstance(exc, InputError):
            raise
        raise InputError(f"malformed speeds document: {exc}") from None


def decomposition_to_doc(dec: ConvexDecomposition, provenance: dict | None = None) -> dict:
    first = dec.terms[0][1]
    doc = {
        "version": VERSION,
        "agents": list(first.agents),
        "items": list(first.items),
        "terms": [{"coefficient": format_rational(c), "assignment": A.as_dict()} for c, A in dec.terms],
    }
    if provenance:
        doc["provenance"] = provenance
    return doc


def decomposition_from_doc(doc: dict) -> ConvexDecomposition:
    _require(doc, "agents", "items", "terms")
    agents, items = tuple(map(str, doc["agents"])), tuple(map(str, doc["items"]))
    terms = []
    for t in doc["terms"]:
        mapping = {str(k): str(v) for k, v in t["assignment"].items()}
        perm = tuple(items.index(mapping[a]) for a in agents)
        terms.append((parse_rational(t["coefficient"]), DeterministicAssignment(agents, items, perm)))
    return ConvexDecomposition(tuple(terms))


def dumps(doc: dict) -> str:
    return json.dumps(doc, indent=2, sort_keys=False) + "\n"


def read_json(path) -> dict:
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}: invalid JSON ({exc.msg} at line {exc.lineno})") from None
    except OSError as exc:
        raise InputError(f"{path}: {exc.strerror}") from None


def write_json(path, doc: dict) -> None:
    """Write atomically via a sibling temp file."""
    path = Path(path)
    tmp = path.with_suffix(path.suffix + ".tmp")
    tmp.write_text(dumps(doc), encoding="utf-8")
    tmp.replace(path)


def load_profile(path) -> PreferenceProfile:
    return profile_from_doc(read_json(path))


def load_assignment(path) -> RandomAssignment:
    return assignment_from_doc(read_json(path))


def load_speeds(path) -> EatingSpeedProfile:
    return speeds_from_doc(read_json(path))
