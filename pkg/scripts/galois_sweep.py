"""Sweep random transition systems and confirm the two inclusion tests agree.

For each system the start sets are adjusted to be post- and pre-fixed, then
the least chain above init and the greatest chain below safe are compared
through both sides of the adjunction.  Also reports how many join steps the
least chain needs before it stabilizes.
"""
from __future__ import annotations

import argparse
import random
from collections import Counter

from relfix.lattice import MonotoneOp, TransitionSystem, f_apply, galois_check, mu_post, nu_pre, safety_check


def random_system(rng: random.Random, max_states: int) -> TransitionSystem:
    n = rng.randrange(1, max_states + 1)
    states = tuple(f"s{i}" for i in range(n))
    delta = {
        x: frozenset(y for y in states if rng.random() < 0.4) for x in states
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


def chain_length(op: MonotoneOp, start: frozenset[str]) -> int:
    steps = 0
    current = frozenset(start)
    while True:
        bigger = current | f_apply(op, current)
        if bigger == current:
            return steps
        current = bigger
        steps += 1


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--count", type=int, default=500)
    parser.add_argument("--max-states", type=int, default=7)
    parser.add_argument("--seed", type=int, default=0)
    args = parser.parse_args()

    rng = random.Random(args.seed)
    lengths = Counter()
    verdicts = Counter()
    for _ in range(args.count):
        ts = random_system(rng, args.max_states)
        op = MonotoneOp.from_transition_system(ts)
        assert galois_check(op, ts.init, ts.safe)
        least = mu_post(op, ts.init)
        greatest = nu_pre(op, ts.safe)
        assert f_apply(op, least) == least
        assert f_apply(op, greatest) == greatest
        assert (least <= ts.safe) == (ts.init <= greatest)
        lengths[chain_length(op, ts.init)] += 1
        verdicts[safety_check(ts).result] += 1

    print(f"{args.count} systems, all adjunction checks passed")
    print("verdicts:", dict(sorted(verdicts.items())))
    print("join steps to stabilize the least chain:")
    for steps in sorted(lengths):
        print(f"  {steps:>2}: {lengths[steps]}")


if __name__ == "__main__":
    main()
