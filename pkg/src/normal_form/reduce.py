"""Transformation of a rule into reduced normal form eps / x0.

Every subformula of the premises and the conclusion gets a variable, boxes get
a companion variable for the negation of their argument, and the boolean
skeleton is expanded into the set of sign vectors it allows.
"""
import logging
from dataclasses import dataclass
from itertools import product
from typing import Dict, List, Optional, Tuple

from src.kripke.model import Model
from src.kripke.semantics import satisfies
from src.normal_form.theta import (DIAMOND_E, DIAMOND_T, Theta, ThetaSet, atom_formula,
                                   atom_width)
from src.syntax.formula import (And, Bottom, BoxAgent, BoxE, BoxT, Formula, Implies, Not, Or,
                                Rule, Top, Var, conjunction, diamond_agent, diamond_e, diamond_t,
                                disjunction, max_agent, node_count, rule_variables, subformulas)
from src.syntax.printer import format_formula
from src.utils.errors import NormalFormError

logger = logging.getLogger(__name__)


def _box_atom_kind(box: Formula) -> int:
    if isinstance(box, BoxT):
        return DIAMOND_T
    if isinstance(box, BoxE):
        return DIAMOND_E
    return 2 + box.agent


def _iff(left: Formula, right: Formula) -> Formula:
    return And(Implies(left, right), Implies(right, left))


@dataclass(frozen=True)
class ReducedRule:
    var_count: int
    agents: int
    thetas: ThetaSet
    origin: Tuple[Formula, ...]
    premise_index: int

    def variable_of(self, f: Formula) -> int:
        try:
            return self.origin.index(f)
        except ValueError:
            raise NormalFormError(f"{format_formula(f)} is not a subformula of the rule") from None

    def source_variables(self) -> Dict[int, int]:
        """Original variable index p_j -> reduced variable index x_i."""
        return {f.index: i for i, f in enumerate(self.origin) if isinstance(f, Var)}

    def definitions(self) -> List[Tuple[int, Formula]]:
        """Defining equivalences x_i <-> rhs over reduced variables; source variables have none."""
        index = {f: i for i, f in enumerate(self.origin)}
        result = []
        for i, f in enumerate(self.origin):
            if isinstance(f, Var):
                continue
            if isinstance(f, (Top, Bottom)):
                rhs = f
            elif isinstance(f, Not):
                rhs = Not(Var(index[f.sub]))
            elif isinstance(f, (And, Or, Implies)):
                rhs = type(f)(Var(index[f.left]), Var(index[f.right]))
            else:
                companion = Var(index[Not(f.sub)])
                if isinstance(f, BoxT):
                    rhs = Not(diamond_t(companion))
                elif isinstance(f, BoxE):
                    rhs = Not(diamond_e(companion))
                else:
                    rhs = Not(diamond_agent(f.agent, companion))
            result.append((i, rhs))
        return result

    def skeleton(self) -> Formula:
        return conjunction([Var(self.premise_index)] + [_iff(Var(i), rhs) for i, rhs in self.definitions()])


def _ordered_subformulas(rule: Rule, premise: Formula) -> List[Formula]:
    collected = set(subformulas(premise)) | set(subformulas(rule.conclusion))
    for f in list(collected):
        if isinstance(f, (BoxT, BoxE, BoxAgent)):
            collected.add(Not(f.sub))
    rest = sorted((f for f in collected if f != rule.conclusion),
                  key=lambda f: (node_count(f), format_formula(f)))
    return [rule.conclusion] + rest


def _evaluate_literals(origin: List[Formula], index: Dict[Formula, int], order: List[int],
                       sources: Dict[int, int], boxes: Dict[int, int]) -> int:
    truth = [0] * len(origin)
    for i in order:
        f = origin[i]
        if isinstance(f, Var):
            value = sources[i]
        elif isinstance(f, Top):
            value = 1
        elif isinstance(f, Bottom):
            value = 0
        elif isinstance(f, Not):
            value = 1 - truth[index[f.sub]]
        elif isinstance(f, And):
            value = truth[index[f.left]] & truth[index[f.right]]
        elif isinstance(f, Or):
            value = truth[index[f.left]] | truth[index[f.right]]
        elif isinstance(f, Implies):
            value = (1 - truth[index[f.left]]) | truth[index[f.right]]
        else:
            value = 1 - boxes[i]
        truth[i] = value
    return sum(bit << i for i, bit in enumerate(truth))


def reduce(rule: Rule, agents: int) -> ReducedRule:
    """
    Reduce a rule to normal form.

    Args:
        rule: The rule to transform.
        agents: Number of agents k.

    Returns:
        The reduced rule. Its conclusion is x0, the variable of the original conclusion.

    Raises:
        NormalFormError: When the rule mentions an agent above k.
    """
    if any(max_agent(f) > agents for f in rule.formulas()):
        raise NormalFormError(f"Rule mentions an agent above {agents}")
    premise = conjunction(rule.premises)
    origin = _ordered_subformulas(rule, premise)
    index = {f: i for i, f in enumerate(origin)}
    order = sorted(range(len(origin)), key=lambda i: node_count(origin[i]))

    source_indices = [i for i, f in enumerate(origin) if isinstance(f, Var)]
    box_indices = [i for i, f in enumerate(origin) if isinstance(f, (BoxT, BoxE, BoxAgent))]
    box_atoms = {i: (index[Not(origin[i].sub)], _box_atom_kind(origin[i])) for i in box_indices}
    width = atom_width(agents)
    constrained = sorted(set(box_atoms.values()), key=lambda a: a[0] * width + a[1])
    slot = {atom: t for t, atom in enumerate(constrained)}
    premise_index = index[premise]

    patterns = set()
    for values in product((0, 1), repeat=len(source_indices) + len(constrained)):
        sources = dict(zip(source_indices, values))
        atom_values = values[len(source_indices):]
        boxes = {i: atom_values[slot[box_atoms[i]]] for i in box_indices}
        lits = _evaluate_literals(origin, index, order, sources, boxes)
        if lits >> premise_index & 1:
            bits = sum(bit << t for t, bit in enumerate(atom_values))
            patterns.add((lits, bits))

    thetas = ThetaSet(len(origin), agents, constrained, patterns)
    logger.info(f"Reduced rule to m={len(origin)} variables, {len(patterns)} patterns, "
                f"{thetas.count} thetas")
    return ReducedRule(len(origin), agents, thetas, tuple(origin), premise_index)


def with_fresh_tautology(rule: Rule) -> Rule:
    """
    Add the premise x_f | ~x_f for a variable x_f the rule does not mention.

    The result is admissible iff `rule` is. With a satisfiable premise the free x_f keeps its
    literal vectors from all being equal.
    """
    fresh = max(rule_variables(rule), default=0) + 1
    return Rule(rule.premises + (Or(Var(fresh), Not(Var(fresh))),), rule.conclusion)


def materialize(rr: ReducedRule, max_thetas: Optional[int] = None) -> Rule:
    """The rule (theta_1 | ... | theta_s) / x0; an empty theta set gives F / x0."""
    if max_thetas is not None and rr.thetas.count > max_thetas:
        raise NormalFormError(f"{rr.thetas.count} thetas exceed the materialization limit {max_thetas}")
    return Rule((disjunction(t.to_formula() for t in rr.thetas),), Var(0))


def _flatten(f: Formula, kind) -> List[Formula]:
    if isinstance(f, kind):
        return _flatten(f.left, kind) + _flatten(f.right, kind)
    return [f]


def from_rule(rule: Rule, agents: int) -> ReducedRule:
    """
    Recognize a rule written in reduced normal form, as produced by `materialize`.

    Raises:
        NormalFormError: When the rule does not have that exact shape.
    """
    if len(rule.premises) != 1 or rule.conclusion != Var(0):
        raise NormalFormError("A reduced rule has one premise and the conclusion x0")
    premise = rule.premises[0]
    disjuncts = [] if premise == Bottom() else _flatten(premise, Or)
    width = atom_width(agents)
    thetas = []
    var_count = None
    for disjunct in disjuncts:
        literals = _flatten(disjunct, And)
        if len(literals) % width:
            raise NormalFormError(f"Disjunct with {len(literals)} literals is not a full sign vector")
        count = len(literals) // width
        if var_count is None:
            var_count = count
        elif count != var_count:
            raise NormalFormError("Disjuncts disagree on the number of variables")
        signs = []
        for pos, literal in enumerate(literals):
            expected = atom_formula(pos // width, pos % width)
            if literal == expected:
                signs.append(0)
            elif literal == Not(expected):
                signs.append(1)
            else:
                raise NormalFormError(f"Literal {format_formula(literal, 'x')} is out of place")
        thetas.append(Theta(tuple(signs), count, agents))
    var_count = var_count or 1
    theta_set = ThetaSet.from_thetas(var_count, agents, thetas)
    origin = tuple(Var(i) for i in range(var_count))
    return ReducedRule(var_count, agents, theta_set, origin, 0)


def theta_satisfied(model: Model, world: int, theta: Theta) -> bool:
    """True iff every atom of `theta` has the prescribed sign at `world`."""
    width = atom_width(theta.agents)
    for pos, sign in enumerate(theta.signs):
        holds = satisfies(model, world, atom_formula(pos // width, pos % width))
        if holds != (sign == 0):
            return False
    return True
