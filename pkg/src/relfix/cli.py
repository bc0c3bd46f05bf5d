"""Command line front end.

Every subcommand reads versioned JSON problem files, prints one canonical JSON
document to stdout, and exits 0 on success, 1 when a search budget or bound is
exceeded, 2 on malformed input, 3 when a safety check comes back unsafe.
"""
from __future__ import annotations

import argparse
import random
import sys
from itertools import product

from .errors import BoundExceeded, BudgetExceeded, RelfixError
from .finstruct import (
    DEFAULT_BUDGET,
    FinAlgebra,
    FinCoalgebra,
    all_algebras,
    enumerate_hylo,
    is_ca_morphism,
)
from .fractal import carpet_member, render, write_pgm
from .jsonio import (
    canonical_dumps,
    load_algebra,
    load_coalgebra,
    load_prefix,
    load_transition_system,
    prefix_to_json,
)
from .lattice import (
    MonotoneOp,
    TransitionSystem,
    f_apply,
    galois_check,
    mu_post,
    nu_pre,
    safety_check,
)
from .mu import mu_equal, mu_presentation
from .nu import classify_cartesian, enum_nu_prefixes, is_a_guided
from .sigterm import Signature, parse_term


def _emit(obj) -> None:
    sys.stdout.write(canonical_dumps(obj))


def _cmd_mu_eq(args) -> int:
    coalg = load_coalgebra(args.coalgebra)
    lhs = parse_term(coalg.sig, args.lhs)
    rhs = parse_term(coalg.sig, args.rhs)
    pres = mu_presentation(coalg)
    _emit(
        {
            "result": "equal" if mu_equal(coalg, lhs, rhs) else "distinct",
            "lhs": str(lhs),
            "rhs": str(rhs),
            "generators": [f"{s} = {t}" for s, t in pres.eqs.equations],
        }
    )
    return 0


def _cmd_hylo(args) -> int:
    coalg = load_coalgebra(args.coalgebra)
    alg = load_algebra(args.algebra)
    solutions = enumerate_hylo(coalg, alg, args.budget)
    out = {"count": len(solutions)}
    if args.list:
        out["morphisms"] = [{x: f[x] for x in coalg.states} for f in solutions]
    _emit(out)
    return 0


def _cmd_safety(args) -> int:
    verdict = safety_check(load_transition_system(args.system))
    out = {"result": verdict.result, "stage": verdict.stage}
    if not verdict.is_safe:
        out["side"] = verdict.side
        out["witness"] = verdict.witness
    _emit(out)
    return 0 if verdict.is_safe else 3


def _parse_state_set(text: str | None, fallback) -> frozenset[str]:
    if text is None:
        return frozenset(fallback)
    return frozenset(s for s in text.split(",") if s)


def _cmd_galois(args) -> int:
    ts = load_transition_system(args.system)
    op = MonotoneOp.from_transition_system(ts)
    post_start = _parse_state_set(args.post, ts.init)
    pre_start = _parse_state_set(args.pre, ts.safe)
    least = mu_post(op, post_start)
    greatest = nu_pre(op, pre_start)
    _emit(
        {
            "holds": galois_check(op, post_start, pre_start),
            "forward": least <= frozenset(pre_start),
            "backward": frozenset(post_start) <= greatest,
            "mu_post": sorted(least),
            "nu_pre": sorted(greatest),
        }
    )
    return 0


def _cmd_nu_enum(args) -> int:
    alg = load_algebra(args.algebra)
    prefixes = enum_nu_prefixes(alg, args.root, args.depth, args.budget)
    _emit(
        {
            "count": len(prefixes),
            "prefixes": [prefix_to_json(p) for p in prefixes],
        }
    )
    return 0


def _cmd_nu_check(args) -> int:
    alg = load_algebra(args.algebra)
    prefix = load_prefix(args.prefix)
    _emit({"guided": is_a_guided(alg, prefix)})
    return 0


def _cmd_cartesian(args) -> int:
    coalg = load_coalgebra(args.coalgebra)
    pairs = classify_cartesian(coalg, args.bound, args.budget)
    out = {
        "count": len(pairs),
        "fixed_points": [list(subset) for subset, _ in pairs],
    }
    if args.classify:
        out["classification"] = [
            {"subset": list(subset), "morphism": chi} for subset, chi in pairs
        ]
    _emit(out)
    return 0


def _cmd_recursive(args) -> int:
    coalg = load_coalgebra(args.coalgebra)
    tested = 0
    verdict = True
    for size in range(1, args.max_carrier + 1):
        for alg in all_algebras(coalg.sig, size):
            tested += 1
            if len(enumerate_hylo(coalg, alg, args.budget)) != 1:
                verdict = False
                break
        if not verdict:
            break
    _emit(
        {
            "recursive": verdict,
            "algebras_tested": tested,
            "max_carrier": args.max_carrier,
        }
    )
    return 0


def _cmd_sierpinski(args) -> int:
    write_pgm(args.out, args.depth, args.res)
    pixels = render(args.depth, args.res)
    _emit(
        {
            "out": args.out,
            "depth": args.depth,
            "res": args.res,
            "inside": sum(1 for b in pixels if b == 0),
        }
    )
    return 0


def _cmd_carpet_member(args) -> int:
    _emit(
        {
            "member": carpet_member(args.x, args.y, args.depth),
            "depth": args.depth,
        }
    )
    return 0


def _random_system(rng: random.Random) -> TransitionSystem:
    n = rng.randrange(1, 6)
    states = tuple(f"s{i}" for i in range(n))
    delta = {
        x: frozenset(y for y in states if rng.random() < 0.45) for x in states
    }

    def image(us: frozenset[str]) -> frozenset[str]:
        return frozenset(y for x in us for y in delta[x])

    init = frozenset(x for x in states if rng.random() < 0.5)
    while not init <= image(init):
        init &= image(init)
    safe = frozenset(x for x in states if rng.random() < 0.5)
    while not image(safe) <= safe:
        safe |= image(safe)
    return TransitionSystem(states, delta, init, safe)


def _random_machine(rng: random.Random) -> FinCoalgebra:
    sig = Signature((("f", 2), ("g", 1), ("c", 0)))
    n = rng.randrange(1, 5)
    states = tuple(f"x{i}" for i in range(n))
    step = {}
    for x in states:
        op, arity = sig.symbols[rng.randrange(3)]
        step[x] = (op, tuple(rng.choice(states) for _ in range(arity)))
    return FinCoalgebra(sig, states, step)


def _random_algebra(rng: random.Random, sig, size: int) -> FinAlgebra:
    carrier = tuple(str(i) for i in range(size))
    table = {}
    for op, arity in sig.symbols:
        for inputs in product(carrier, repeat=arity):
            table[(op, inputs)] = rng.choice(carrier)
    return FinAlgebra(sig, carrier, table)


def _cmd_selftest(args) -> int:
    rng = random.Random(args.seed)
    checks = 0
    failures = []

    def record(name: str, ok: bool) -> None:
        nonlocal checks
        checks += 1
        if not ok:
            failures.append(name)

    for trial in range(args.trials):
        ts = _random_system(rng)
        op = MonotoneOp.from_transition_system(ts)
        record(f"galois[{trial}]", galois_check(op, ts.init, ts.safe))
        least = mu_post(op, ts.init)
        greatest = nu_pre(op, ts.safe)
        record(f"mu-fixed[{trial}]", f_apply(op, least) == least)
        record(f"nu-fixed[{trial}]", f_apply(op, greatest) == greatest)
        record(f"safety[{trial}]", safety_check(ts).is_safe == (least <= ts.safe))

        coalg = _random_machine(rng)
        alg = _random_algebra(rng, coalg.sig, rng.randrange(1, 4))
        solutions = enumerate_hylo(coalg, alg)
        record(
            f"hylo-sound[{trial}]",
            all(is_ca_morphism(coalg, alg, f) for f in solutions),
        )
        record(
            f"hylo-distinct[{trial}]",
            len({tuple(sorted(f.items())) for f in solutions}) == len(solutions),
        )
        try:
            classify_cartesian(coalg)
            record(f"cartesian[{trial}]", True)
        except RelfixError:
            record(f"cartesian[{trial}]", False)

    _emit(
        {
            "seed": args.seed,
            "trials": args.trials,
            "checks": checks,
            "failures": failures,
        }
    )
    return 0 if not failures else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="relfix",
        description="Relative fixed points of finite machines, algebras, and lattices.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("mu-eq", help="decide term equality in the initial quotient of a machine")
    p.add_argument("coalgebra", help="machine JSON file")
    p.add_argument("lhs", help="term over the machine signature, states as variables")
    p.add_argument("rhs", help="term over the machine signature, states as variables")
    p.set_defaults(func=_cmd_mu_eq)

    p = sub.add_parser("hylo", help="enumerate solutions of a machine against an algebra")
    p.add_argument("coalgebra", help="machine JSON file")
    p.add_argument("algebra", help="algebra JSON file")
    mode = p.add_mutually_exclusive_group()
    mode.add_argument("--count", action="store_true", help="report the count only (default)")
    mode.add_argument("--list", action="store_true", help="include the solutions themselves")
    p.add_argument("--budget", type=int, default=DEFAULT_BUDGET)
    p.set_defaults(func=_cmd_hylo)

    p = sub.add_parser("safety", help="run the two-sided safety check on a transition system")
    p.add_argument("system", help="transition system JSON file")
    p.set_defaults(func=_cmd_safety)

    p = sub.add_parser("galois", help="compare the two inclusion tests on a transition system")
    p.add_argument("system", help="transition system JSON file")
    p.add_argument("--post", help="comma separated post-fixed start, default init")
    p.add_argument("--pre", help="comma separated pre-fixed start, default safe")
    p.set_defaults(func=_cmd_galois)

    p = sub.add_parser("nu-enum", help="enumerate guided tree prefixes of an algebra")
    p.add_argument("algebra", help="algebra JSON file")
    p.add_argument("--root", required=True, help="root label, a carrier element")
    p.add_argument("--depth", type=int, required=True)
    p.add_argument("--budget", type=int, default=DEFAULT_BUDGET)
    p.set_defaults(func=_cmd_nu_enum)

    p = sub.add_parser("nu-check", help="check that a tree prefix is guided by an algebra")
    p.add_argument("algebra", help="algebra JSON file")
    p.add_argument("prefix", help="prefix JSON file")
    p.set_defaults(func=_cmd_nu_check)

    p = sub.add_parser("cartesian", help="list next-time fixed points of a machine")
    p.add_argument("coalgebra", help="machine JSON file")
    p.add_argument("--bound", type=int, default=16, help="largest state count enumerated")
    p.add_argument("--classify", action="store_true", help="include the indicator morphisms")
    p.add_argument("--budget", type=int, default=DEFAULT_BUDGET)
    p.set_defaults(func=_cmd_cartesian)

    p = sub.add_parser("recursive", help="test unique solvability against all small algebras")
    p.add_argument("coalgebra", help="machine JSON file")
    p.add_argument("--max-carrier", type=int, default=3)
    p.add_argument("--budget", type=int, default=DEFAULT_BUDGET)
    p.set_defaults(func=_cmd_recursive)

    p = sub.add_parser("sierpinski", help="render a carpet approximant to a PGM file")
    p.add_argument("--depth", type=int, required=True)
    p.add_argument("--res", type=int, required=True)
    p.add_argument("--out", required=True, help="output PGM path")
    p.set_defaults(func=_cmd_sierpinski)

    p = sub.add_parser("carpet-member", help="test membership in a carpet approximant")
    p.add_argument("x", help="coordinate, decimal or p/q")
    p.add_argument("y", help="coordinate, decimal or p/q")
    p.add_argument("--depth", type=int, default=8)
    p.set_defaults(func=_cmd_carpet_member)

    p = sub.add_parser("selftest", help="run randomized consistency checks")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--trials", type=int, default=25)
    p.set_defaults(func=_cmd_selftest)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (BudgetExceeded, BoundExceeded) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except (RelfixError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
