"""``randassign`` command line.

Exit codes: 0 success or property holds, 1 property fails or an audit
diverges, 2 malformed input, 3 resource budget exceeded.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import sys
from fractions import Fraction

from .core import (
    BudgetExceeded,
    ConvexDecomposition,
    DeterministicAssignment,
    InputError,
    PriorityDistribution,
    RandomAssignment,
    bvn_decompose,
)
from .lottery import SplitMix64

EXIT_OK, EXIT_FAIL, EXIT_INPUT, EXIT_BUDGET = 0, 1, 2, 3
MODES = ("expectation", "sample")


def jsonable(x):
    """Convert verdict payloads into plain JSON values."""
    from .io import decomposition_to_doc, format_rational

    if isinstance(x, Fraction):
        return format_rational(x)
    if isinstance(x, DeterministicAssignment):
        return x.as_dict()
    if isinstance(x, RandomAssignment):
        return {a: {o: format_rational(v) for o, v in row.items()} for a, row in x.rows_dict().items()}
    if isinstance(x, ConvexDecomposition):
        return decomposition_to_doc(x)
    if dataclasses.is_dataclass(x) and not isinstance(x, type):
        return {f.name: jsonable(getattr(x, f.name)) for f in dataclasses.fields(x)}
    if isinstance(x, dict):
        return {str(k): jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple, set, frozenset)):
        items = sorted(x) if isinstance(x, (set, frozenset)) else x
        return [jsonable(v) for v in items]
    return x


def _emit(doc) -> None:
    from .io import dumps

    sys.stdout.write(dumps(doc))


def _seed(text: str) -> int:
    try:
        v = int(text, 0)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if not 0 <= v < 1 << 64:
        raise argparse.ArgumentTypeError("seed must fit in an unsigned 64-bit integer")
    return v


def _positive(text: str) -> int:
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if v <= 0:
        raise argparse.ArgumentTypeError("must be positive")
    return v


# -- run ---------------------------------------------------------------------


def _shuffle(agents, rng: SplitMix64) -> tuple[str, ...]:
    out = list(agents)
    for k in range(len(out) - 1, 0, -1):
        m = rng.next() % (k + 1)
        out[k], out[m] = out[m], out[k]
    return tuple(out)


def _draw(dec: ConvexDecomposition, rng: SplitMix64) -> DeterministicAssignment:
    """Pick a term with probability equal to its coefficient."""
    u = Fraction(rng.next(), 1 << 64)
    acc = Fraction(0)
    for c, A in dec.terms:
        acc += c
        if u < acc:
            return A
    return dec.terms[-1][1]


def cmd_run(args) -> int:
    from .eating import pre_run, ps_run
    from .io import assignment_to_doc, load_profile, load_speeds
    from .lottery import abm_run, bm_run, ebm_expectation, ebm_sample, rp_run
    from .strategyproofness import MechanismHandle

    mech, profile_path = _mechanism_and_path(args)
    profile = load_profile(profile_path)
    rng = SplitMix64(args.seed)
    prov = {"mechanism": mech, "mode": args.mode}
    runs = {"abm-uniform": abm_run, "bm-uniform": bm_run, "rp": rp_run}

    if args.priority and mech not in runs:
        raise InputError(f"--priority does not apply to {mech}")
    if args.speeds and mech != "pre":
        raise InputError("--speeds only applies to pre")

    if mech == "ebm":
        if args.mode == "sample":
            A, trace = ebm_sample(profile, args.seed)
            P = A.to_random()
            prov.update(seed=args.seed, probability=jsonable(trace.probability))
        else:
            P = ebm_expectation(profile, args.budget_worlds)
    elif mech in runs:
        if args.priority:
            order = tuple(a.strip() for a in args.priority.split(","))
            P = runs[mech](profile, order).to_random()
            prov["priority"] = list(order)
        elif args.mode == "sample":
            order = _shuffle(profile.agents, rng)
            P = runs[mech](profile, order).to_random()
            prov.update(seed=args.seed, priority=list(order))
        else:
            P = MechanismHandle(mech)(profile)
    else:
        if mech == "pre":
            if not args.speeds:
                raise InputError("pre needs --speeds")
            P = pre_run(profile, load_speeds(args.speeds))[0]
        else:
            P = ps_run(profile) if mech == "ps" else pre_run(profile)[0]
        if args.mode == "sample":
            P = _draw(bvn_decompose(P), rng).to_random()
            prov["seed"] = args.seed
    _emit(assignment_to_doc(P, prov))
    return EXIT_OK


def _mechanism_and_path(args):
    from .strategyproofness import MECHANISMS

    pos = list(args.operands)
    if args.mechanism:
        mech = args.mechanism
    elif len(pos) == 2:
        mech = pos.pop(0)
    else:
        raise InputError("usage: run MECHANISM PROFILE (or --mechanism M PROFILE)")
    if len(pos) != 1:
        raise InputError("expected exactly one profile path")
    if mech not in MECHANISMS:
        raise InputError(f"unknown mechanism {mech!r}; expected one of {', '.join(MECHANISMS)}")
    return mech, pos[0]


# -- check / decompose ----------------------------------------------------------


def cmd_check(args) -> int:
    from .io import load_assignment, load_profile
    from .properties import PROPERTY_IDS, check_property

    pos = list(args.operands)
    prop = args.property or (pos.pop(0) if len(pos) == 3 else None)
    if prop is None or len(pos) != 2:
        raise InputError("usage: check PROPERTY ASSIGNMENT PROFILE")
    if prop.lower() not in PROPERTY_IDS:
        raise InputError(f"unknown property {prop!r}; expected one of {', '.join(PROPERTY_IDS)}")
    P = load_assignment(pos[0])
    profile = load_profile(pos[1])
    if (P.agents, P.items) != (profile.agents, profile.items):
        raise InputError("assignment agents/items differ from the profile")
    verdict = check_property(prop, P, profile)
    _emit({"property": prop.lower(), "holds": verdict.holds, "witness": jsonable(verdict.witness),
           "certificate": jsonable(verdict.certificate), "detail": jsonable(verdict.detail)})
    return EXIT_OK if verdict.holds else EXIT_FAIL


def cmd_decompose(args) -> int:
    from .io import decomposition_to_doc, load_assignment, load_profile
    from .properties import DETERMINISTIC, is_ep

    P = load_assignment(args.assignment)
    if not args.property:
        _emit(decomposition_to_doc(bvn_decompose(P), {"method": "bvn"}))
        return EXIT_OK
    base = args.property.lower().removeprefix("ep-")
    if base not in DETERMINISTIC:
        raise InputError(f"--property must name a deterministic property, got {args.property!r}")
    if not args.profile:
        raise InputError("a property filter needs the profile path")
    profile = load_profile(args.profile)
    verdict = is_ep(P, profile, base)
    if not verdict.holds:
        _emit({"property": f"ep-{base}", "feasible": False, "detail": jsonable(verdict.witness)})
        return EXIT_FAIL
    _emit(decomposition_to_doc(verdict.certificate, {"method": "exact-lp", "property": f"ep-{base}"}))
    return EXIT_OK


# -- audit -------------------------------------------------------------------


def cmd_audit(args) -> int:
    from .audit import REGISTRY, export_fixtures, run_audit

    if args.export:
        written = export_fixtures(args.export)
        if not args.name:
            _emit({"exported": [str(p) for p in written]})
            return EXIT_OK
    if not args.name:
        raise InputError("usage: audit NAME|all [--export DIR]")
    names = list(REGISTRY) if args.name == "all" else [args.name]
    reports = [run_audit(n) for n in names]
    doc = {"passed": all(r.passed for r in reports), "audits": [r.as_dict() for r in reports]}
    first = next((r for r in reports if not r.passed), None)
    if first:
        c = first.first_divergence
        doc["first_divergence"] = {"audit": first.name, "label": c.label,
                                   "expected": jsonable(c.expected), "actual": jsonable(c.actual)}
    _emit(doc)
    if first:
        print(f"{first.name}: {c.label} diverges", file=sys.stderr)
        return EXIT_FAIL
    return EXIT_OK


# -- entry point ---------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="randassign", description="Exact random assignment mechanisms and property checks.")
    sub = p.add_subparsers(dest="command", required=True)

    r = sub.add_parser("run", help="run a mechanism on a profile")
    r.add_argument("operands", nargs="+", metavar="[MECHANISM] PROFILE")
    r.add_argument("--mechanism")
    r.add_argument("--mode", choices=MODES, default="expectation")
    r.add_argument("--seed", type=_seed, default=0)
    r.add_argument("--priority", help="comma-separated agent ids, highest first")
    r.add_argument("--speeds", help="eating-speed document (pre only)")
    r.add_argument("--budget-worlds", type=_positive, default=None)
    r.set_defaults(func=cmd_run)

    c = sub.add_parser("check", help="check a property of an assignment")
    c.add_argument("operands", nargs="+", metavar="[PROPERTY] ASSIGNMENT PROFILE")
    c.add_argument("--property")
    c.set_defaults(func=cmd_check)

    a = sub.add_parser("audit", help="replay bundled fixture audits")
    a.add_argument("name", nargs="?")
    a.add_argument("--export", metavar="DIR")
    a.set_defaults(func=cmd_audit)

    d = sub.add_parser("decompose", help="lottery decomposition of an assignment")
    d.add_argument("assignment")
    d.add_argument("profile", nargs="?")
    d.add_argument("--property", help="restrict the support to assignments with this property")
    d.set_defaults(func=cmd_decompose)
    return p


def main(argv=None) -> int:
    from .lottery import DEFAULT_WORLD_BUDGET

    args = build_parser().parse_args(argv)
    if getattr(args, "budget_worlds", 0) is None:
        args.budget_worlds = DEFAULT_WORLD_BUDGET
    try:
        return args.func(args)
    except BudgetExceeded as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
