"""The greatest solution of an algebra: guided labeled trees.

An algebra a on carrier A determines, for each element x, the family of
A-labeled trees where a node labeled x carrying symbol op with child labels
y1..yk satisfies a(op)(y1,...,yk) = x.  The full trees are usually infinite;
this module works with finite prefixes, with rational trees presented by a
machine plus a labeling, and with the subset form of the same idea: the
next-time operator on state sets and its fixed points.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import product
from typing import Iterable, Mapping

from .errors import (
    BijectionViolation,
    BoundExceeded,
    BudgetExceeded,
    NotCaMorphism,
)
from .finstruct import (
    DEFAULT_BUDGET,
    FinAlgebra,
    FinCoalgebra,
    enumerate_hylo,
    is_ca_morphism,
)
from .sigterm import Signature


@dataclass(frozen=True)
class TreePrefix:
    """A finite prefix of a labeled tree.

    Leaves carry only a label; expanded nodes carry the symbol applied there
    and one child prefix per argument.
    """

    label: str
    op: str | None = None
    children: tuple["TreePrefix", ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "children", tuple(self.children))
        if self.op is None and self.children:
            raise ValueError("a leaf cannot have children")

    @property
    def is_leaf(self) -> bool:
        return self.op is None

    def depth(self) -> int:
        if self.is_leaf:
            return 0
        return 1 + max((c.depth() for c in self.children), default=0)

    def truncate(self, depth: int) -> "TreePrefix":
        """Cut the prefix to the given depth; cut points become leaves."""
        if depth <= 0 or self.is_leaf:
            return TreePrefix(self.label)
        return TreePrefix(
            self.label, self.op, tuple(c.truncate(depth - 1) for c in self.children)
        )


def tree_fibers(alg: FinAlgebra) -> dict[str, list[tuple[str, tuple[str, ...]]]]:
    """For each carrier element, the flat applications that produce it,
    ordered by symbol declaration then argument tuples in carrier order."""
    fibers: dict[str, list[tuple[str, tuple[str, ...]]]] = {c: [] for c in alg.carrier}
    for op, arity in alg.sig.symbols:
        for args in product(alg.carrier, repeat=arity):
            fibers[alg.app(op, args)].append((op, args))
    return fibers


def is_a_guided(alg: FinAlgebra, prefix: TreePrefix) -> bool:
    """Does every expanded node satisfy a(op)(child labels) = own label?"""
    carrier = set(alg.carrier)
    stack = [prefix]
    while stack:
        node = stack.pop()
        if node.label not in carrier:
            raise ValueError(f"label {node.label!r} is not a carrier element")
        if node.is_leaf:
            continue
        arity = alg.sig.arity(node.op)
        if len(node.children) != arity:
            raise ValueError(f"node '{node.op}' has {len(node.children)} children, arity {arity}")
        if alg.app(node.op, tuple(c.label for c in node.children)) != node.label:
            return False
        stack.extend(node.children)
    return True


def enum_nu_prefixes(
    alg: FinAlgebra, root: str, depth: int, budget: int = DEFAULT_BUDGET
) -> list[TreePrefix]:
    """All guided prefixes with the given root label, fully expanded to `depth`.

    A node at the cutoff depth stays a leaf; every shallower node is expanded
    in every way its fiber allows.  Output order follows fiber order and then
    child combinations lexicographically.
    """
    if root not in alg.carrier:
        raise ValueError(f"root {root!r} is not a carrier element")
    fibers = tree_fibers(alg)
    built = 0
    memo: dict[tuple[str, int], list[TreePrefix]] = {}

    def make(label: str, op: str | None, children: tuple) -> TreePrefix:
        nonlocal built
        built += 1
        if built > budget:
            raise BudgetExceeded(built, budget)
        return TreePrefix(label, op, children)

    def expand(label: str, d: int) -> list[TreePrefix]:
        key = (label, d)
        if key in memo:
            return memo[key]
        if d == 0:
            out = [make(label, None, ())]
        else:
            out = []
            for op, args in fibers[label]:
                for kids in product(*(expand(y, d - 1) for y in args)):
                    out.append(make(label, op, kids))
        memo[key] = out
        return out

    return expand(root, depth)


@dataclass(frozen=True)
class RationalTree:
    """A labeled tree presented by a machine, a labeling, and a start state."""

    machine: FinCoalgebra
    labeling: dict[str, str]
    start: str

    def __post_init__(self):
        object.__setattr__(self, "labeling", dict(self.labeling))
        if self.start not in self.machine.step:
            raise ValueError(f"start {self.start!r} is not a machine state")
        for x in self.machine.states:
            if x not in self.labeling:
                raise ValueError(f"state '{x}' has no label")

    @property
    def root_label(self) -> str:
        return self.labeling[self.start]

    def unfold(self, depth: int) -> TreePrefix:
        def go(x: str, d: int) -> TreePrefix:
            if d == 0:
                return TreePrefix(self.labeling[x])
            op, args = self.machine.step[x]
            return TreePrefix(self.labeling[x], op, tuple(go(y, d - 1) for y in args))

        return go(self.start, depth)


def bisimilar(u: RationalTree, v: RationalTree) -> bool:
    """Do two rational trees unfold to the same labeled tree?"""
    seen: set[tuple[str, str]] = set()
    todo = [(u.start, v.start)]
    while todo:
        x, y = todo.pop()
        if (x, y) in seen:
            continue
        seen.add((x, y))
        if u.labeling[x] != v.labeling[y]:
            return False
        xop, xargs = u.machine.step[x]
        yop, yargs = v.machine.step[y]
        if xop != yop or len(xargs) != len(yargs):
            return False
        todo.extend(zip(xargs, yargs))
    return True


def coextension(
    coalg: FinCoalgebra, alg: FinAlgebra, f: Mapping[str, str], start: str
) -> RationalTree:
    """The guided tree a solution f spreads out from a chosen state."""
    f = getattr(f, "mapping", f)
    if not is_ca_morphism(coalg, alg, f):
        raise NotCaMorphism("the given map does not solve the square")
    return RationalTree(coalg, dict(f), start)


def count_coalg_homs_to_nu(
    coalg: FinCoalgebra,
    alg: FinAlgebra,
    budget: int = DEFAULT_BUDGET,
    check_depth: int = 4,
) -> int:
    """Number of machine maps into the greatest solution.

    Counted through the solution enumeration, then cross-checked: each
    solution's trees must be guided at every tested unfolding depth and must
    return the solution on root labels, and distinct solutions must stay
    distinct.  Any failed check raises BijectionViolation.
    """
    solutions = enumerate_hylo(coalg, alg, budget)
    seen: list[dict[str, str]] = []
    for f in solutions:
        if f in seen:
            raise BijectionViolation("duplicate solution in enumeration")
        seen.append(f)
        for x in coalg.states:
            tree = coextension(coalg, alg, f, x)
            if tree.root_label != f[x]:
                raise BijectionViolation("root label does not recover the solution")
            for d in range(check_depth + 1):
                if not is_a_guided(alg, tree.unfold(d)):
                    raise BijectionViolation("unfolding left the guided trees")
    return len(solutions)


def next_time(coalg: FinCoalgebra, u: Iterable[str]) -> frozenset[str]:
    """States whose every successor lies in u (vacuously, nullary steps)."""
    uset = frozenset(u)
    bad = uset - set(coalg.states)
    if bad:
        raise ValueError(f"not states of the machine: {sorted(bad)}")
    return frozenset(
        x for x in coalg.states if all(y in uset for y in coalg.step[x][1])
    )


@dataclass(frozen=True)
class NextTime:
    """One machine's successor-containment operator, packaged as a callable
    monotone map on state subsets."""

    coalg: FinCoalgebra

    def __call__(self, u: Iterable[str]) -> frozenset[str]:
        return next_time(self.coalg, u)


def greatest_subcoalgebra(
    coalg: FinCoalgebra, within: Iterable[str] | None = None
) -> frozenset[str]:
    """The largest U inside `within` with U contained in next_time(U).

    Computed by shrinking `within` until stable.  Started from all states
    this is the greatest fixed point of next_time; below a proper subset it
    yields the greatest invariant subset, which need not be a fixed point.
    """
    u = frozenset(coalg.states if within is None else within)
    while True:
        nxt = u & next_time(coalg, u)
        if nxt == u:
            return u
        u = nxt


def cartesian_subcoalgebras(coalg: FinCoalgebra, bound: int = 16) -> list[tuple[str, ...]]:
    """All subsets P with P = next_time(P), in subset-lexicographic order
    (binary counting over the declared state order)."""
    states = coalg.states
    if len(states) > bound:
        raise BoundExceeded(f"{len(states)} states exceeds the exhaustive bound {bound}")
    succ_idx = [[states.index(y) for y in coalg.step[x][1]] for x in states]
    out: list[tuple[str, ...]] = []
    for mask in range(1 << len(states)):
        image = 0
        for i in range(len(states)):
            if all(mask >> j & 1 for j in succ_idx[i]):
                image |= 1 << i
        if image == mask:
            out.append(tuple(s for i, s in enumerate(states) if mask >> i & 1))
    return out


@lru_cache(maxsize=None)
def meet_algebra(sig: Signature) -> FinAlgebra:
    """Carrier {0,1}; every symbol is the meet of its arguments (nullary: 1)."""
    table = {}
    for op, arity in sig.symbols:
        for args in product(("0", "1"), repeat=arity):
            table[(op, args)] = "1" if all(a == "1" for a in args) else "0"
    return FinAlgebra(sig, ("0", "1"), table)


def classify_cartesian(
    coalg: FinCoalgebra, bound: int = 16, budget: int = DEFAULT_BUDGET
) -> list[tuple[tuple[str, ...], dict[str, str]]]:
    """Pair each next-time fixed point P with its indicator map into the meet
    algebra, and verify the pairing is exactly the solution set of the square."""
    subsets = cartesian_subcoalgebras(coalg, bound)
    alg = meet_algebra(coalg.sig)
    solutions = enumerate_hylo(coalg, alg, budget)
    pairs = []
    for subset in subsets:
        inside = set(subset)
        chi = {x: ("1" if x in inside else "0") for x in coalg.states}
        pairs.append((subset, chi))
    got = {frozenset(chi.items()) for _, chi in pairs}
    want = {frozenset(f.items()) for f in solutions}
    if got != want or len(pairs) != len(solutions):
        raise BijectionViolation(
            "next-time fixed points and square solutions do not match"
        )
    return pairs
