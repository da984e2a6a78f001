import os
import sys

import pytest

sys.path.insert(0, os.path.abspath(os.path.join(os.path.dirname(__file__), '..')))

from src.syntax.formula import (And, Bottom, BoxAgent, BoxE, BoxT, Implies, Not, Or, Rule, Substitution,
                                Top, Var, apply_substitution, apply_substitution_to_rule, conjunction,
                                diamond_e, disjunction, max_agent, modal_depth, node_count, subformulas,
                                time_degree, variables)
from src.syntax.parser import parse, parse_formula, parse_rule, tokenize
from src.syntax.printer import format_formula, format_rule
from src.utils.errors import AgentIndexError, ParseError, SubstitutionError

p1, p2, p3 = Var(1), Var(2), Var(3)


def test_parse_box_implication():
    """A box binds tighter than implication."""
    assert parse("[T] p1 -> p1") == Implies(BoxT(p1), p1)


def test_parse_expands_diamond():
    """Diamonds are stored as negated boxes of negations."""
    assert parse("<E> p1") == Not(BoxE(Not(p1)))


def test_parse_rule():
    """A slash turns the text into a rule."""
    assert parse("p1 / p2") == Rule((p1,), p2)


def test_parse_rule_with_several_premises():
    """Premises are separated by semicolons."""
    rule = parse_rule("x1 ; x2 & x3 / x1", agents=1)
    assert rule.premises == (p1, And(p2, p3))
    assert rule.conclusion == p1


def test_p_and_x_share_indices():
    """p<n> and x<n> name the same variable."""
    assert parse("x4") == parse("p4") == Var(4)


def test_implication_is_right_associative():
    assert parse("p1 -> p2 -> p3") == Implies(p1, Implies(p2, p3))


def test_precedence_and_over_or():
    assert parse("p1 | p2 & p3") == Or(p1, And(p2, p3))
    assert parse("~p1 & p2") == And(Not(p1), p2)


def test_constants_and_agent_boxes():
    assert parse("[A2] T | F", agents=2) == Or(BoxAgent(2, Top()), Bottom())


def test_agent_outside_range_is_rejected():
    """Agent modalities must name 1..k."""
    with pytest.raises(AgentIndexError, match="outside 1..1") as info:
        parse("p1 & [A2] p1", agents=1)
    assert info.value.offset == 5


def test_syntax_error_carries_offset():
    with pytest.raises(ParseError) as info:
        parse("p1 &", agents=1)
    assert info.value.offset == 4


def test_unexpected_character():
    with pytest.raises(ParseError, match="Unexpected character"):
        tokenize("p1 $ p2")


def test_parse_formula_rejects_rules():
    with pytest.raises(ParseError, match="Expected a formula"):
        parse_formula("p1 / p2")


def test_parse_rule_rejects_formulas():
    with pytest.raises(ParseError):
        parse_rule("p1 -> p2")


def test_rule_needs_premises():
    with pytest.raises(ValueError, match="at least one premise"):
        Rule((), p1)


def test_print_examples():
    """Canonical text for boxes, diamonds and constants."""
    assert format_formula(Implies(BoxT(p1), p1)) == "[T] p1 -> p1"
    assert format_formula(Not(BoxE(Not(p1)))) == "<E> p1"
    assert format_formula(Bottom()) == "F"


def test_print_keeps_needed_parentheses():
    f = And(Or(p1, p2), Implies(p1, p2))
    assert format_formula(f) == "(p1 | p2) & (p1 -> p2)"
    assert format_formula(Implies(Implies(p1, p2), p3)) == "(p1 -> p2) -> p3"
    assert format_formula(BoxT(And(p1, p2))) == "[T] (p1 & p2)"


@pytest.mark.parametrize("text", [
    "[T] p1 -> p1",
    "<E> p1",
    "~p1 & p2 | p3",
    "(p1 -> p2) -> p3",
    "<T> <A1> ~p1 -> [E] (p1 | T)",
    "p1 & (p2 & p3)",
])
def test_print_parse_identity_on_canonical_text(text):
    assert format_formula(parse(text)) == text


def test_rule_printing():
    rule = Rule((Or(p1, Not(p1)),), Bottom())
    assert format_rule(rule) == "x1 | ~x1 / F"
    assert str(rule) == format_rule(rule)
    assert parse(format_rule(rule)) == rule


def test_time_degree():
    """Only [T] adds to the time degree."""
    assert time_degree(p1) == 0
    assert time_degree(BoxT(p1)) == 1
    assert time_degree(And(BoxE(BoxT(p1)), BoxT(BoxT(p1)))) == 2
    assert time_degree(BoxAgent(1, BoxE(p1))) == 0


def test_apply_substitution_examples():
    assert apply_substitution(Substitution.of({1: Top()}), Or(p1, Not(p1))) == Or(Top(), Not(Top()))
    f = Implies(BoxT(p1), diamond_e(p2))
    assert apply_substitution(Substitution.of({1: p1, 2: p2}), f) == f
    assert apply_substitution(Substitution.of({1: p2}), BoxT(p1)) == BoxT(p2)


def test_apply_substitution_is_simultaneous():
    swap = Substitution.of({1: p2, 2: p1})
    assert apply_substitution(swap, And(p1, p2)) == And(p2, p1)


def test_apply_substitution_to_rule():
    rule = Rule((p1,), BoxE(p1))
    result = apply_substitution_to_rule(Substitution.of({1: BoxT(p2)}), rule)
    assert result == Rule((BoxT(p2),), BoxE(BoxT(p2)))


def test_unmapped_variable():
    with pytest.raises(SubstitutionError, match="p2"):
        apply_substitution(Substitution.of({1: Top()}), And(p1, p2))


def test_subformulas():
    assert subformulas(p1) == {p1}
    assert subformulas(BoxT(p1)) == {p1, BoxT(p1)}
    assert subformulas(Implies(p1, p2)) == {p1, p2, Implies(p1, p2)}
    shared = And(p1, p1)
    assert len(subformulas(shared)) == 2 < node_count(shared)


def test_metrics():
    f = Implies(BoxAgent(2, BoxT(p3)), diamond_e(p1))
    assert variables(f) == {1, 3}
    assert modal_depth(f) == 2
    assert max_agent(f) == 2
    assert node_count(p1) == 1


def test_empty_conjunction_and_disjunction():
    assert conjunction([]) == Top()
    assert disjunction([]) == Bottom()
    assert disjunction([p1, p2, p3]) == Or(Or(p1, p2), p3)
