"""Finite equation machines, finite algebras, and solutions of the square
f = alg . map(f) . step.

A machine (coalgebra of the signature functor) assigns each state one flat
successor term; an algebra interprets each symbol as an operation on a finite
carrier.  A solution maps states into the carrier so that evaluating a
state's successor term under the map reproduces the state's own value.
"""
from __future__ import annotations

from dataclasses import dataclass
from itertools import product
from typing import Iterable, Iterator, Mapping

from .errors import (
    ArityMismatch,
    BudgetExceeded,
    NotCaMorphism,
    SignatureMismatch,
    UnboundVariable,
)
from .sigterm import Signature, Term, app, postorder, validate_term, var

DEFAULT_BUDGET = 10**6


@dataclass(frozen=True)
class FinCoalgebra:
    """Finitely many states, each with one flat successor term step[x] = (op, args)."""

    sig: Signature
    states: tuple[str, ...]
    step: dict[str, tuple[str, tuple[str, ...]]]

    def __post_init__(self):
        states = tuple(self.states)
        object.__setattr__(self, "states", states)
        state_set = set(states)
        if len(state_set) != len(states):
            raise ValueError("duplicate state names")
        norm: dict[str, tuple[str, tuple[str, ...]]] = {}
        for x in states:
            if x not in self.step:
                raise ValueError(f"state '{x}' has no step")
            op, args = self.step[x]
            args = tuple(args)
            expected = self.sig.arity(op)
            if len(args) != expected:
                raise ArityMismatch(op, expected, len(args))
            for y in args:
                if y not in state_set:
                    raise ValueError(f"step of '{x}' mentions unknown state '{y}'")
            norm[x] = (op, args)
        if len(self.step) != len(states):
            extra = sorted(set(self.step) - state_set)
            raise ValueError(f"step defined on non-states: {extra}")
        object.__setattr__(self, "step", norm)

    def successors(self, x: str) -> tuple[str, ...]:
        return self.step[x][1]

    def step_term(self, x: str) -> Term:
        """The flat term op(y1,...,yk) with successor states as variables."""
        op, args = self.step[x]
        return app(op, tuple(var(y) for y in args))


@dataclass(frozen=True)
class FinAlgebra:
    """A total interpretation of a signature on a finite carrier.

    Operations are given by an explicit table keyed on (op, argument tuple);
    a `default` output, if present, stands in for omitted rows.
    """

    sig: Signature
    carrier: tuple[str, ...]
    table: dict[tuple[str, tuple[str, ...]], str]
    default: str | None = None

    def __post_init__(self):
        carrier = tuple(self.carrier)
        object.__setattr__(self, "carrier", carrier)
        carrier_set = set(carrier)
        if len(carrier_set) != len(carrier):
            raise ValueError("duplicate carrier elements")
        norm: dict[tuple[str, tuple[str, ...]], str] = {}
        for (op, args), out in self.table.items():
            args = tuple(args)
            expected = self.sig.arity(op)
            if len(args) != expected:
                raise ArityMismatch(op, expected, len(args))
            if not set(args) <= carrier_set:
                raise ValueError(f"table row {op}{args} uses non-carrier arguments")
            if out not in carrier_set:
                raise ValueError(f"table row {op}{args} outputs non-carrier value {out!r}")
            norm[(op, args)] = out
        object.__setattr__(self, "table", norm)
        if self.default is None:
            for op, arity in self.sig.symbols:
                for args in product(carrier, repeat=arity):
                    if (op, args) not in norm:
                        raise ValueError(f"no table row for {op}{args} and no default")
        elif self.default not in carrier_set:
            raise ValueError(f"default {self.default!r} is not a carrier element")

    def app(self, op: str, args: tuple[str, ...]) -> str:
        try:
            return self.table[(op, args)]
        except KeyError:
            if self.default is None:
                raise ValueError(f"no interpretation for {op}{args}") from None
            return self.default


def eval_term(alg: FinAlgebra, env: Mapping[str, str], t: Term) -> str:
    """Value of a term under the algebra, with variables read from env."""
    validate_term(alg.sig, t)
    memo: dict[int, str] = {}
    for node in postorder(t):
        if node.is_var:
            if node.op not in env:
                raise UnboundVariable(node.op)
            memo[node.node_id] = env[node.op]
        else:
            memo[node.node_id] = alg.app(node.op, tuple(memo[a.node_id] for a in node.args))
    return memo[t.node_id]


def _check_shared_signature(coalg: FinCoalgebra, alg: FinAlgebra) -> None:
    if coalg.sig != alg.sig:
        raise SignatureMismatch("machine and algebra interpret different signatures")


def is_ca_morphism(coalg: FinCoalgebra, alg: FinAlgebra, f: Mapping[str, str]) -> bool:
    """Does f solve f(x) = alg(op)(f(y1),...,f(yk)) at every state?"""
    f = getattr(f, "mapping", f)
    _check_shared_signature(coalg, alg)
    carrier = set(alg.carrier)
    for x in coalg.states:
        if x not in f:
            raise ValueError(f"map is not total: state '{x}' missing")
        if f[x] not in carrier:
            raise ValueError(f"map sends '{x}' outside the carrier")
    for x in coalg.states:
        op, args = coalg.step[x]
        if f[x] != alg.app(op, tuple(f[y] for y in args)):
            return False
    return True


@dataclass(frozen=True)
class CaMorphism:
    """A verified solution of the square for one (machine, algebra) pair."""

    source: FinCoalgebra
    target: FinAlgebra
    mapping: dict[str, str]

    def __post_init__(self):
        object.__setattr__(self, "mapping", dict(self.mapping))
        if not is_ca_morphism(self.source, self.target, self.mapping):
            raise NotCaMorphism("map does not satisfy the square")


def enumerate_hylo(
    coalg: FinCoalgebra, alg: FinAlgebra, budget: int = DEFAULT_BUDGET
) -> list[dict[str, str]]:
    """All solutions, ordered lexicographically by (state order, carrier order).

    Candidate values per state are first narrowed to a fixpoint: a value
    survives at x only if some choice of surviving successor values produces
    it.  If the surviving search space still exceeds `budget`, the
    enumeration refuses to run rather than run long.
    """
    _check_shared_signature(coalg, alg)
    states = coalg.states
    full = len(alg.carrier) ** len(states)
    candidates = {x: list(alg.carrier) for x in states}
    changed = True
    while changed:
        changed = False
        for x in states:
            op, args = coalg.step[x]
            image = {
                alg.app(op, combo)
                for combo in product(*(candidates[y] for y in args))
            }
            kept = [c for c in candidates[x] if c in image]
            if len(kept) != len(candidates[x]):
                candidates[x] = kept
                changed = True
    space = 1
    for x in states:
        space *= len(candidates[x])
    if space == 0:
        return []
    if space > budget:
        raise BudgetExceeded(full, budget)

    index = {x: i for i, x in enumerate(states)}
    # the square at z is checkable once z and all its successors are assigned
    ready: list[list[str]] = [[] for _ in states]
    for z in states:
        slot = index[z]
        for y in coalg.step[z][1]:
            slot = max(slot, index[y])
        ready[slot].append(z)

    out: list[dict[str, str]] = []
    assignment: dict[str, str] = {}

    def search(i: int) -> None:
        if i == len(states):
            out.append(dict(assignment))
            return
        x = states[i]
        for c in candidates[x]:
            assignment[x] = c
            ok = True
            for z in ready[i]:
                op, args = coalg.step[z]
                if assignment[z] != alg.app(op, tuple(assignment[y] for y in args)):
                    ok = False
                    break
            if ok:
                search(i + 1)
        del assignment[x]

    search(0)
    return out


def is_wellfounded(coalg: FinCoalgebra) -> bool:
    """True iff the successor graph has no cycle."""
    WHITE, GREY, BLACK = 0, 1, 2
    color = {x: WHITE for x in coalg.states}
    for root in coalg.states:
        if color[root] != WHITE:
            continue
        stack: list[tuple[str, Iterator[str]]] = [(root, iter(coalg.successors(root)))]
        color[root] = GREY
        while stack:
            x, it = stack[-1]
            advanced = False
            for y in it:
                if color[y] == GREY:
                    return False
                if color[y] == WHITE:
                    color[y] = GREY
                    stack.append((y, iter(coalg.successors(y))))
                    advanced = True
                    break
            if not advanced:
                color[x] = BLACK
                stack.pop()
    return True


def check_recursive_on(
    coalg: FinCoalgebra, algebras: Iterable[FinAlgebra], budget: int = DEFAULT_BUDGET
) -> bool:
    """Does the machine admit exactly one solution against every given algebra?"""
    return all(len(enumerate_hylo(coalg, alg, budget)) == 1 for alg in algebras)


def check_corecursive_on(
    alg: FinAlgebra, coalgebras: Iterable[FinCoalgebra], budget: int = DEFAULT_BUDGET
) -> bool:
    """Does the algebra admit exactly one solution against every given machine?"""
    return all(len(enumerate_hylo(coalg, alg, budget)) == 1 for coalg in coalgebras)


def is_coalgebra_morphism(
    src: FinCoalgebra, dst: FinCoalgebra, g: Mapping[str, str]
) -> bool:
    """Does g commute with steps: step(g(x)) = (op, g(args)) where step(x) = (op, args)?"""
    if src.sig != dst.sig:
        raise SignatureMismatch("machines interpret different signatures")
    for x in src.states:
        if x not in g or g[x] not in dst.step:
            raise ValueError(f"map is not total on states or lands outside: '{x}'")
    for x in src.states:
        op, args = src.step[x]
        dop, dargs = dst.step[g[x]]
        if dop != op or dargs != tuple(g[y] for y in args):
            return False
    return True


def is_algebra_morphism(src: FinAlgebra, dst: FinAlgebra, h: Mapping[str, str]) -> bool:
    """Does h commute with every operation of the shared signature?"""
    if src.sig != dst.sig:
        raise SignatureMismatch("algebras interpret different signatures")
    for c in src.carrier:
        if c not in h:
            raise ValueError(f"map is not total: carrier element '{c}' missing")
    dst_carrier = set(dst.carrier)
    for op, arity in src.sig.symbols:
        for args in product(src.carrier, repeat=arity):
            if h[src.app(op, args)] != dst.app(op, tuple(h[c] for c in args)):
                return False
    for c in src.carrier:
        if h[c] not in dst_carrier:
            return False
    return True


def all_algebras(sig: Signature, size: int) -> Iterator[FinAlgebra]:
    """Every algebra on the carrier 0..size-1, in a fixed deterministic order."""
    carrier = tuple(str(i) for i in range(size))
    keys = [
        (op, args)
        for op, arity in sig.symbols
        for args in product(carrier, repeat=arity)
    ]
    for outs in product(carrier, repeat=len(keys)):
        yield FinAlgebra(sig, carrier, dict(zip(keys, outs)))


def all_coalgebras(
    sig: Signature, size: int, prefix: str = "x"
) -> Iterator[FinCoalgebra]:
    """Every machine on `size` named states, in a fixed deterministic order."""
    states = tuple(f"{prefix}{i}" for i in range(size))
    options = [
        (op, args)
        for op, arity in sig.symbols
        for args in product(states, repeat=arity)
    ]
    for steps in product(options, repeat=size):
        yield FinCoalgebra(sig, states, dict(zip(states, steps)))
