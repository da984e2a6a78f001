"""Recursive-descent parser for the ASCII formula and rule grammar.

Precedence, loosest first: `->` (right associative), `|`, `&`, then the unary
operators `~`, boxes and diamonds. A rule is `prem ; prem / concl`.
"""
import logging
import re
from typing import List, NamedTuple, Union

from src.syntax.formula import (And, Bottom, BoxAgent, BoxE, BoxT, Formula, Implies, Not, Or,
                                Rule, Top, Var)
from src.utils.errors import AgentIndexError, ParseError

logger = logging.getLogger(__name__)


class Token(NamedTuple):
    kind: str
    value: str
    offset: int


TOKEN_PATTERN = re.compile(r"""
    (?P<ws>\s+)
  | (?P<box>\[\s*(?:T|E|A\s*\d+)\s*\])
  | (?P<diamond><\s*(?:T|E|A\s*\d+)\s*>)
  | (?P<implies>->)
  | (?P<var>[px]\d+)
  | (?P<const>[TF])(?![A-Za-z0-9])
  | (?P<op>[~&|();/])
""", re.VERBOSE)


def tokenize(text: str) -> List[Token]:
    tokens: List[Token] = []
    position = 0
    while position < len(text):
        match = TOKEN_PATTERN.match(text, position)
        if not match:
            raise ParseError(f"Unexpected character {text[position]!r}", position)
        kind = match.lastgroup
        if kind != 'ws':
            value = re.sub(r"\s+", "", match.group(kind))
            tokens.append(Token(kind if kind != 'op' else value, value, position))
        position = match.end()
    tokens.append(Token('end', '', len(text)))
    return tokens


class _Parser:
    def __init__(self, text: str, agents: int):
        self.tokens = tokenize(text)
        self.agents = agents
        self.position = 0

    @property
    def current(self) -> Token:
        return self.tokens[self.position]

    def advance(self) -> Token:
        token = self.current
        self.position += 1
        return token

    def expect(self, kind: str) -> Token:
        if self.current.kind != kind:
            found = self.current.value or 'end of input'
            raise ParseError(f"Expected {kind!r} but found {found!r}", self.current.offset)
        return self.advance()

    def implication(self) -> Formula:
        left = self.disjunction()
        if self.current.kind == 'implies':
            self.advance()
            return Implies(left, self.implication())
        return left

    def disjunction(self) -> Formula:
        left = self.conjunction()
        while self.current.kind == '|':
            self.advance()
            left = Or(left, self.conjunction())
        return left

    def conjunction(self) -> Formula:
        left = self.unary()
        while self.current.kind == '&':
            self.advance()
            left = And(left, self.unary())
        return left

    def _modality(self, token: Token, sub: Formula) -> Formula:
        name = token.value[1:-1]
        if name == 'T':
            return BoxT(sub)
        if name == 'E':
            return BoxE(sub)
        agent = int(name[1:])
        if not 1 <= agent <= self.agents:
            raise AgentIndexError(f"Agent index {agent} outside 1..{self.agents}", token.offset)
        return BoxAgent(agent, sub)

    def unary(self) -> Formula:
        token = self.current
        if token.kind == '~':
            self.advance()
            return Not(self.unary())
        if token.kind == 'box':
            self.advance()
            return self._modality(token, self.unary())
        if token.kind == 'diamond':
            self.advance()
            return Not(self._modality(token, Not(self.unary())))
        return self.atom()

    def atom(self) -> Formula:
        token = self.advance()
        if token.kind == 'var':
            return Var(int(token.value[1:]))
        if token.kind == 'const':
            return Top() if token.value == 'T' else Bottom()
        if token.kind == '(':
            inner = self.implication()
            self.expect(')')
            return inner
        found = token.value or 'end of input'
        raise ParseError(f"Unexpected {found!r}", token.offset)

    def formula_or_rule(self) -> Union[Formula, Rule]:
        first = self.implication()
        if self.current.kind not in (';', '/'):
            self.expect('end')
            return first
        premises = [first]
        while self.current.kind == ';':
            self.advance()
            premises.append(self.implication())
        self.expect('/')
        conclusion = self.implication()
        self.expect('end')
        return Rule(tuple(premises), conclusion)


def parse(text: str, agents: int = 1) -> Union[Formula, Rule]:
    """
    Parse a formula or a rule.

    Args:
        text: Source text; `p<n>` and `x<n>` name the same variable index n.
        agents: Number of agents k; agent modalities must name 1..k.

    Returns:
        A Rule when the text contains `/`, otherwise a Formula.

    Raises:
        ParseError: For text outside the grammar (the error carries the offset).
        AgentIndexError: For an agent index outside 1..k.
    """
    if agents < 0:
        raise ValueError(f"Agent count must be non-negative, got {agents}")
    result = _Parser(text, agents).formula_or_rule()
    logger.debug(f"Parsed {text!r}")
    return result


def parse_formula(text: str, agents: int = 1) -> Formula:
    result = parse(text, agents)
    if isinstance(result, Rule):
        raise ParseError("Expected a formula but found a rule", text.find('/'))
    return result


def parse_rule(text: str, agents: int = 1) -> Rule:
    result = parse(text, agents)
    if not isinstance(result, Rule):
        raise ParseError("Expected a rule of the form 'premise ; ... / conclusion'", len(text))
    return result