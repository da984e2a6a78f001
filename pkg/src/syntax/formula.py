"""Formula, rule and substitution types plus structural metrics."""
import logging
from dataclasses import dataclass
from functools import reduce
from typing import Dict, FrozenSet, Iterable, Iterator, Mapping, Tuple

from src.utils.errors import SubstitutionError

logger = logging.getLogger(__name__)


class Formula:
    """Base class of the formula tree. Nodes are immutable and hashable."""

    def children(self) -> Tuple['Formula', ...]:
        return ()

    def rebuild(self, children: Tuple['Formula', ...]) -> 'Formula':
        return self

    def __str__(self) -> str:
        from src.syntax.printer import format_formula
        return format_formula(self)


@dataclass(frozen=True)
class Var(Formula):
    index: int


@dataclass(frozen=True)
class Top(Formula):
    pass


@dataclass(frozen=True)
class Bottom(Formula):
    pass


@dataclass(frozen=True)
class Not(Formula):
    sub: Formula

    def children(self):
        return (self.sub,)

    def rebuild(self, children):
        return Not(children[0])


@dataclass(frozen=True)
class _Binary(Formula):
    left: Formula
    right: Formula

    def children(self):
        return (self.left, self.right)

    def rebuild(self, children):
        return type(self)(children[0], children[1])


@dataclass(frozen=True)
class And(_Binary):
    pass


@dataclass(frozen=True)
class Or(_Binary):
    pass


@dataclass(frozen=True)
class Implies(_Binary):
    pass


@dataclass(frozen=True)
class BoxT(Formula):
    sub: Formula

    def children(self):
        return (self.sub,)

    def rebuild(self, children):
        return BoxT(children[0])


@dataclass(frozen=True)
class BoxE(Formula):
    sub: Formula

    def children(self):
        return (self.sub,)

    def rebuild(self, children):
        return BoxE(children[0])


@dataclass(frozen=True)
class BoxAgent(Formula):
    agent: int
    sub: Formula

    def children(self):
        return (self.sub,)

    def rebuild(self, children):
        return BoxAgent(self.agent, children[0])


BOXES = (BoxT, BoxE, BoxAgent)


def is_box(f: Formula) -> bool:
    return isinstance(f, BOXES)


def diamond_t(f: Formula) -> Formula:
    return Not(BoxT(Not(f)))


def diamond_e(f: Formula) -> Formula:
    return Not(BoxE(Not(f)))


def diamond_agent(agent: int, f: Formula) -> Formula:
    return Not(BoxAgent(agent, Not(f)))


def conjunction(formulas: Iterable[Formula]) -> Formula:
    """Left-nested conjunction; the empty conjunction is Top."""
    items = list(formulas)
    if not items:
        return Top()
    return reduce(And, items)


def disjunction(formulas: Iterable[Formula]) -> Formula:
    """Left-nested disjunction; the empty disjunction is Bottom."""
    items = list(formulas)
    if not items:
        return Bottom()
    return reduce(Or, items)


@dataclass(frozen=True)
class Rule:
    premises: Tuple[Formula, ...]
    conclusion: Formula

    def __post_init__(self):
        if not self.premises:
            raise ValueError("A rule needs at least one premise")
        object.__setattr__(self, 'premises', tuple(self.premises))

    def formulas(self) -> Tuple[Formula, ...]:
        return self.premises + (self.conclusion,)

    def __str__(self) -> str:
        from src.syntax.printer import format_rule
        return format_rule(self)


@dataclass(frozen=True)
class Substitution:
    """A finite map from variable indices to formulas, stored as sorted pairs."""
    mapping: Tuple[Tuple[int, Formula], ...]

    @classmethod
    def of(cls, mapping: Mapping[int, Formula]) -> 'Substitution':
        return cls(tuple(sorted(mapping.items(), key=lambda item: item[0])))

    def as_dict(self) -> Dict[int, Formula]:
        return dict(self.mapping)

    def __str__(self) -> str:
        from src.syntax.printer import format_formula
        return "{" + ", ".join(f"p{i} -> {format_formula(f)}" for i, f in self.mapping) + "}"


def iter_nodes(f: Formula) -> Iterator[Formula]:
    """Pre-order traversal of every node occurrence."""
    stack = [f]
    while stack:
        node = stack.pop()
        yield node
        stack.extend(reversed(node.children()))


def subformulas(f: Formula) -> FrozenSet[Formula]:
    return frozenset(iter_nodes(f))


def variables(f: Formula) -> FrozenSet[int]:
    return frozenset(node.index for node in iter_nodes(f) if isinstance(node, Var))


def rule_variables(rule: Rule) -> FrozenSet[int]:
    result: FrozenSet[int] = frozenset()
    for f in rule.formulas():
        result |= variables(f)
    return result


def node_count(f: Formula) -> int:
    return sum(1 for _ in iter_nodes(f))


def time_degree(f: Formula) -> int:
    """Nesting depth of [T]; the other modalities and connectives do not add to it."""
    if isinstance(f, BoxT):
        return time_degree(f.sub) + 1
    children = f.children()
    if not children:
        return 0
    return max(time_degree(c) for c in children)


def modal_depth(f: Formula) -> int:
    """Nesting depth of all boxes."""
    inner = max((modal_depth(c) for c in f.children()), default=0)
    return inner + 1 if is_box(f) else inner


def max_agent(f: Formula) -> int:
    return max((node.agent for node in iter_nodes(f) if isinstance(node, BoxAgent)), default=0)


def apply_substitution(s: Substitution, f: Formula) -> Formula:
    """Replace every variable of `f` simultaneously by its image under `s`."""
    images = s.as_dict()

    def walk(node: Formula) -> Formula:
        if isinstance(node, Var):
            if node.index not in images:
                raise SubstitutionError(f"Substitution does not map p{node.index}")
            return images[node.index]
        children = node.children()
        if not children:
            return node
        return node.rebuild(tuple(walk(c) for c in children))

    return walk(f)


def apply_substitution_to_rule(s: Substitution, rule: Rule) -> Rule:
    return Rule(tuple(apply_substitution(s, p) for p in rule.premises),
                apply_substitution(s, rule.conclusion))
