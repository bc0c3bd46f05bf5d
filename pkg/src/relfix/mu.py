"""The least solution of a machine, presented by generators and relations.

A machine b with states B presents a quotient of the terms over B by the
congruence generated by x = step(x) for every state.  Equality in that
quotient is a ground word problem, so it is decided by congruence closure;
maps out of the quotient into an algebra correspond exactly to solutions of
the recursion square, which gives the hom-count below.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping

from .errors import NotCaMorphism, UnboundVariable
from .finstruct import (
    DEFAULT_BUDGET,
    FinAlgebra,
    FinCoalgebra,
    enumerate_hylo,
    eval_term,
    is_ca_morphism,
)
from .sigterm import (
    CongruenceClosure,
    EquationSet,
    Term,
    substitute,
    validate_term,
    var,
)


@dataclass(frozen=True)
class MuPresentation:
    """Generators (the states) and relations x = step(x) of the least solution."""

    base: FinCoalgebra
    eqs: EquationSet

    def closure(self) -> CongruenceClosure:
        return CongruenceClosure(self.eqs)


def mu_presentation(coalg: FinCoalgebra) -> MuPresentation:
    eqs = EquationSet(
        coalg.sig,
        tuple((var(x), coalg.step_term(x)) for x in coalg.states),
    )
    return MuPresentation(coalg, eqs)


def _check_term_over(coalg: FinCoalgebra, t: Term) -> None:
    validate_term(coalg.sig, t)
    states = set(coalg.states)
    for name in t.variables():
        if name not in states:
            raise UnboundVariable(name)


def mu_equal(coalg: FinCoalgebra, s: Term, t: Term) -> bool:
    """Are s and t identified in the presented quotient?"""
    _check_term_over(coalg, s)
    _check_term_over(coalg, t)
    return mu_presentation(coalg).closure().equal(s, t)


def unfold_once(coalg: FinCoalgebra, t: Term) -> Term:
    """Replace every state variable in t by its flat successor term."""
    _check_term_over(coalg, t)
    return substitute(t, {x: coalg.step_term(x) for x in coalg.states})


def mu_hom_count(
    coalg: FinCoalgebra, alg: FinAlgebra, budget: int = DEFAULT_BUDGET
) -> int:
    """Number of algebra maps out of the presented quotient, counted through
    the one-to-one correspondence with solutions of the square."""
    return len(enumerate_hylo(coalg, alg, budget))


def mu_soundness_check(
    coalg: FinCoalgebra,
    alg: FinAlgebra,
    f: Mapping[str, str],
    s: Term,
    t: Term,
) -> bool:
    """Identified terms evaluate equally under any solution f; returns that
    comparison, which the library promises to be true."""
    f = getattr(f, "mapping", f)
    if not is_ca_morphism(coalg, alg, f):
        raise NotCaMorphism("the given map does not solve the square")
    if not mu_equal(coalg, s, t):
        raise ValueError("the two terms are not identified by the presentation")
    return eval_term(alg, f, s) == eval_term(alg, f, t)
