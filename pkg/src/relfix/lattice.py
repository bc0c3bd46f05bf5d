"""Monotone operators on finite powerset lattices and the safety check.

Subsets are bitmasks over the declared state order (Python integers, so any
state count works; up to 64 states this is a single machine word).  The
least solution above a post-fixed start is the cumulative join chain, the
greatest solution below a pre-fixed start the cumulative meet chain; both
stabilize within |S| steps.  The safety check runs both chains in lockstep
and reports the first inclusion that fails.
"""
from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Iterable, Mapping

from .errors import NotPostFixed, NotPreFixed


@dataclass(frozen=True)
class TransitionSystem:
    """States, successor relation, initial states, and safe states."""

    states: tuple[str, ...]
    delta: dict[str, frozenset[str]]
    init: frozenset[str]
    safe: frozenset[str]

    def __post_init__(self):
        states = tuple(self.states)
        object.__setattr__(self, "states", states)
        state_set = set(states)
        if len(state_set) != len(states):
            raise ValueError("duplicate state names")
        norm: dict[str, frozenset[str]] = {}
        for x, succs in self.delta.items():
            if x not in state_set:
                raise ValueError(f"delta defined on non-state '{x}'")
            succs = frozenset(succs)
            if not succs <= state_set:
                raise ValueError(f"delta of '{x}' leaves the state set")
            norm[x] = succs
        for x in states:
            norm.setdefault(x, frozenset())
        object.__setattr__(self, "delta", norm)
        for field_name in ("init", "safe"):
            value = frozenset(getattr(self, field_name))
            if not value <= state_set:
                raise ValueError(f"{field_name} contains non-states")
            object.__setattr__(self, field_name, value)


class MonotoneOp:
    """A monotone operator on subsets of a fixed finite state set."""

    def __init__(self, states: tuple[str, ...], succ_masks=None, table=None):
        self.states = tuple(states)
        self._index = {s: i for i, s in enumerate(self.states)}
        self._succ_masks = succ_masks
        self._table = table
        self._mu_cache: dict[int, int] = {}
        self._nu_cache: dict[int, int] = {}

    @classmethod
    def from_transition_system(cls, ts: TransitionSystem) -> "MonotoneOp":
        """F(X) = union of delta over X; monotone by construction."""
        index = {s: i for i, s in enumerate(ts.states)}
        succ_masks = []
        for x in ts.states:
            m = 0
            for y in ts.delta[x]:
                m |= 1 << index[y]
            succ_masks.append(m)
        return cls(ts.states, succ_masks=succ_masks)

    @classmethod
    def from_table(
        cls,
        states: Iterable[str],
        table: Mapping[frozenset, Iterable[str]],
        samples: int = 200,
    ) -> "MonotoneOp":
        """An operator given pointwise on all subsets.

        Monotonicity is verified exhaustively up to 4 states and by seeded
        random sampling of comparable pairs beyond that.
        """
        states = tuple(states)
        index = {s: i for i, s in enumerate(states)}
        n = len(states)
        masked: dict[int, int] = {}
        for subset, image in table.items():
            k = 0
            for s in subset:
                k |= 1 << index[s]
            m = 0
            for s in image:
                m |= 1 << index[s]
            masked[k] = m
        if len(masked) != 1 << n:
            raise ValueError("table must cover every subset exactly once")
        if n <= 4:
            for a in range(1 << n):
                for b in range(1 << n):
                    if a | b == b and masked[a] | masked[b] != masked[b]:
                        raise ValueError("table is not monotone")
        else:
            rng = random.Random(0)
            for _ in range(samples):
                b = rng.randrange(1 << n)
                a = b & rng.randrange(1 << n)
                if masked[a] | masked[b] != masked[b]:
                    raise ValueError("table is not monotone")
        return cls(states, table=masked)

    def mask_of(self, subset: Iterable[str]) -> int:
        m = 0
        for s in subset:
            if s not in self._index:
                raise ValueError(f"'{s}' is not a state")
            m |= 1 << self._index[s]
        return m

    def set_of(self, mask: int) -> frozenset[str]:
        return frozenset(s for i, s in enumerate(self.states) if mask >> i & 1)

    def apply_mask(self, mask: int) -> int:
        if self._succ_masks is not None:
            out = 0
            rest = mask
            while rest:
                low = rest & -rest
                out |= self._succ_masks[low.bit_length() - 1]
                rest ^= low
            return out
        return self._table[mask]

    def _min_state(self, mask: int) -> str:
        return self.states[(mask & -mask).bit_length() - 1]

    def mu_post_mask(self, mask: int) -> int:
        cached = self._mu_cache.get(mask)
        if cached is not None:
            return cached
        stray = mask & ~self.apply_mask(mask)
        if stray:
            raise NotPostFixed(self._min_state(stray))
        z = mask
        while True:
            nxt = z | self.apply_mask(z)
            if nxt == z:
                break
            z = nxt
        self._mu_cache[mask] = z
        return z

    def nu_pre_mask(self, mask: int) -> int:
        cached = self._nu_cache.get(mask)
        if cached is not None:
            return cached
        stray = self.apply_mask(mask) & ~mask
        if stray:
            raise NotPreFixed(self._min_state(stray))
        z = mask
        while True:
            nxt = z & self.apply_mask(z)
            if nxt == z:
                break
            z = nxt
        self._nu_cache[mask] = z
        return z


def f_apply(op: MonotoneOp, subset: Iterable[str]) -> frozenset[str]:
    """One application of the operator."""
    return op.set_of(op.apply_mask(op.mask_of(subset)))


def mu_post(op: MonotoneOp, start: Iterable[str]) -> frozenset[str]:
    """Least fixed point above a post-fixed start, by the join chain."""
    return op.set_of(op.mu_post_mask(op.mask_of(start)))


def nu_pre(op: MonotoneOp, start: Iterable[str]) -> frozenset[str]:
    """Greatest fixed point below a pre-fixed start, by the meet chain."""
    return op.set_of(op.nu_pre_mask(op.mask_of(start)))


def galois_check(op: MonotoneOp, post_start: Iterable[str], pre_start: Iterable[str]) -> bool:
    """mu_post(I) below P exactly when I below nu_pre(P); always true."""
    i_mask = op.mask_of(post_start)
    p_mask = op.mask_of(pre_start)
    lhs = op.mu_post_mask(i_mask) & ~p_mask == 0
    rhs = i_mask & ~op.nu_pre_mask(p_mask) == 0
    return lhs == rhs


UNSAFE_FORWARD = "F^n(I) ⊄ P"
UNSAFE_BACKWARD = "I ⊄ F^n(P)"


@dataclass(frozen=True)
class SafetyVerdict:
    result: str  # "safe" | "unsafe"
    stage: int
    side: str | None = None
    witness: str | None = None

    @property
    def is_safe(self) -> bool:
        return self.result == "safe"


def safety_check(ts: TransitionSystem) -> SafetyVerdict:
    """Unfold the reach chain from init and the trim chain from safe together.

    Requires init post-fixed and safe pre-fixed; under those preconditions
    the cumulative chains coincide with the plain iterates F^n.  Stops Unsafe
    at the first failed inclusion, Safe as soon as either chain stabilizes.
    """
    op = MonotoneOp.from_transition_system(ts)
    i_mask = op.mask_of(ts.init)
    p_mask = op.mask_of(ts.safe)
    stray = i_mask & ~op.apply_mask(i_mask)
    if stray:
        raise NotPostFixed(op._min_state(stray))
    stray = op.apply_mask(p_mask) & ~p_mask
    if stray:
        raise NotPreFixed(op._min_state(stray))
    reach, trim = i_mask, p_mask
    stage = 0
    while True:
        out = reach & ~p_mask
        if out:
            return SafetyVerdict("unsafe", stage, UNSAFE_FORWARD, op._min_state(out))
        out = i_mask & ~trim
        if out:
            return SafetyVerdict("unsafe", stage, UNSAFE_BACKWARD, op._min_state(out))
        next_reach = reach | op.apply_mask(reach)
        next_trim = trim & op.apply_mask(trim)
        if next_reach == reach or next_trim == trim:
            return SafetyVerdict("safe", stage)
        reach, trim = next_reach, next_trim
        stage += 1
