"""Depth-graded formula enumeration and seeded random formulas and rules."""
import logging
import random
from typing import List

from src.syntax.formula import (And, Bottom, BoxAgent, BoxE, BoxT, Formula, Implies, Not, Or, Rule,
                                Top, Var)

logger = logging.getLogger(__name__)


def _unary(agents: int):
    return [Not, BoxT, BoxE] + [lambda f, l=l: BoxAgent(l, f) for l in range(1, agents + 1)]


def enumerate_formulas(depth: int, var_count: int, agents: int) -> List[Formula]:
    """
    Formulas of connective depth <= `depth` over p1..p_var_count, each listed once.

    Level 0 is T, F, p1, p2, ...; each further level applies every connective to operands
    from the previous levels with at least one operand from the level just below. And/Or
    operands are taken in list order only (a commuted copy is never produced).
    """
    levels: List[List[Formula]] = [[Top(), Bottom()] + [Var(i) for i in range(1, var_count + 1)]]
    for _ in range(depth):
        known = [f for level in levels for f in level]
        fresh_start = len(known) - len(levels[-1])
        new: List[Formula] = []
        for make in _unary(agents):
            new.extend(make(f) for f in levels[-1])
        for op in (And, Or):
            for j in range(fresh_start, len(known)):
                for i in range(j + 1):
                    new.append(op(known[i], known[j]))
        fresh = set(levels[-1])
        for a in known:
            for b in known:
                if a in fresh or b in fresh:
                    new.append(Implies(a, b))
        levels.append(new)
    result = [f for level in levels for f in level]
    logger.debug(f"Enumerated {len(result)} formulas up to depth {depth}")
    return result


def random_formula(rng: random.Random, depth: int, var_count: int, agents: int) -> Formula:
    """A random formula of connective depth <= `depth`, drawn by recursive choice."""
    if depth == 0 or rng.random() < 0.25:
        choice = rng.randrange(var_count + 2)
        if choice == var_count:
            return Top()
        if choice == var_count + 1:
            return Bottom()
        return Var(choice + 1)
    kind = rng.randrange(6 + (1 if agents else 0))
    if kind < 3:
        op = (And, Or, Implies)[kind]
        return op(random_formula(rng, depth - 1, var_count, agents),
                  random_formula(rng, depth - 1, var_count, agents))
    sub = random_formula(rng, depth - 1, var_count, agents)
    if kind == 3:
        return Not(sub)
    if kind == 4:
        return BoxT(sub)
    if kind == 5:
        return BoxE(sub)
    return BoxAgent(rng.randint(1, agents), sub)


def random_rule(rng: random.Random, depth: int, var_count: int, agents: int, max_premises: int = 2) -> Rule:
    count = rng.randint(1, max_premises)
    premises = tuple(random_formula(rng, depth, var_count, agents) for _ in range(count))
    return Rule(premises, random_formula(rng, depth, var_count, agents))
