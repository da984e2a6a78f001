import os
import sys

import pytest

sys.path.insert(0, os.path.abspath(os.path.join(os.path.dirname(__file__), '..')))

from src.kripke.frame import ChainFrame, Cluster, ClusterShape
from src.kripke.model import Model, Valuation
from src.kripke.semantics import rule_valid_on_frame
from src.normal_form.labeling import LabelingEngine, block_unions, reduced_rule_valid_on_frame
from src.normal_form.realizability import realizable_patterns
from src.normal_form.reduce import (ReducedRule, from_rule, materialize, reduce, theta_satisfied,
                                     with_fresh_tautology)
from src.normal_form.theta import LIT, Theta, ThetaSet
from src.syntax.formula import Bottom, BoxAgent, Not, Or, Rule, Var
from src.syntax.parser import parse_rule
from src.syntax.printer import format_formula, format_rule
from src.utils.errors import NormalFormError


def one_theta_rule(signs):
    thetas = ThetaSet.from_thetas(1, 1, [Theta(tuple(signs), 1, 1)])
    return ReducedRule(1, 1, thetas, (Var(0),), 0)


@pytest.fixture
def excluded_middle():
    return reduce(parse_rule("x1 | ~x1 / F"), 1)


def test_reduce_identity_rule():
    """x1/x1: one variable, literal forced, modal atoms free."""
    rr = reduce(parse_rule("x1 / x1"), 1)
    assert rr.var_count == 1
    assert len(rr.thetas) == 8
    assert all(t.sign(0, LIT) == 0 for t in rr.thetas)


def test_reduce_two_variable_rule():
    rr = reduce(parse_rule("x1 / x2"), 1)
    assert rr.var_count == 2
    assert rr.thetas.count == 128
    assert rr.source_variables() == {2: 0, 1: 1}


def test_reduce_orders_variables(excluded_middle):
    """The conclusion is x0; the other subformulas follow by size."""
    origin = [format_formula(f) for f in excluded_middle.origin]
    assert origin == ["F", "p1", "~p1", "p1 | ~p1"]
    assert excluded_middle.thetas.lit_vectors() == (10, 12)


def test_reduce_adds_box_companions():
    rr = reduce(parse_rule("x1 / [E] x1"), 1)
    assert Not(Var(1)) in rr.origin
    assert rr.variable_of(Not(Var(1))) > rr.variable_of(Var(1))


def test_reduce_rejects_unknown_agent():
    with pytest.raises(NormalFormError, match="agent above 1"):
        reduce(Rule((BoxAgent(2, Var(1)),), Var(1)), 1)


def test_unsatisfiable_premise_gives_empty_set():
    rr = reduce(parse_rule("F / x1"), 1)
    assert rr.thetas.count == 0
    assert not rr.thetas
    assert materialize(rr) == Rule((Bottom(),), Var(0))


def test_materialize_single_theta():
    rule = materialize(one_theta_rule((0, 0, 0, 0)))
    assert format_rule(rule) == "x0 & <T> x0 & <E> x0 & <A1> x0 / x0"


def test_materialize_limit():
    with pytest.raises(NormalFormError, match="exceed"):
        materialize(reduce(parse_rule("x1 / x2"), 1), max_thetas=10)


def test_from_rule_reads_back_materialized_thetas():
    rr = reduce(parse_rule("x1 / x1"), 1)
    back = from_rule(materialize(rr), 1)
    assert sorted(back.thetas) == sorted(rr.thetas)


def test_from_rule_rejects_other_shapes():
    with pytest.raises(NormalFormError):
        from_rule(parse_rule("x1 / x1"), 1)
    with pytest.raises(NormalFormError):
        from_rule(Rule((Or(Var(0), Var(1)),), Var(0)), 1)


def test_theta_rank_and_unrank_agree():
    thetas = reduce(parse_rule("x1 / x2"), 1).thetas
    members = list(thetas)
    assert members == sorted(members)
    assert len(set(members)) == 128
    for rank in (0, 1, 63, 127):
        assert thetas.index(thetas[rank]) == rank
    with pytest.raises(IndexError):
        thetas[128]


def test_theta_describe():
    assert Theta((0, 0, 1, 0), 1, 1).describe() == "+x0 +<T>x0 -<E>x0 +<A1>x0"


def test_theta_satisfied_examples():
    frame = ChainFrame.of([Cluster.trivial((0,), 1)], 1)
    model = Model(frame, Valuation.of({0: {0}}))
    assert theta_satisfied(model, 0, Theta((0, 0, 0, 0), 1, 1))
    assert not theta_satisfied(model, 0, Theta((1, 0, 0, 0), 1, 1))

    pair = ChainFrame.of([Cluster.trivial((0, 1), 1)], 1)
    model = Model(pair, Valuation.of({0: {0}}))
    assert theta_satisfied(model, 1, Theta((1, 0, 0, 0), 1, 1))


def test_realizable_patterns(excluded_middle):
    result = realizable_patterns(excluded_middle.thetas)
    assert result.refutable
    assert result.lits == (10, 12)
    assert result.theta_count == 32


def test_identity_rule_cannot_be_refuted():
    result = realizable_patterns(reduce(parse_rule("x1 / x1"), 1).thetas)
    assert not result.refutable
    assert result.theta_count == 1


def test_block_unions():
    shape = ClusterShape(3, (((0, 1), (2,)),))
    assert block_unions(shape, (1, 2, 4)) == ((3,), (3,), (4,))


def test_labeling_refutation_on_one_point_frame(excluded_middle):
    frame = ChainFrame.of([Cluster.trivial((0,), 1)], 1)
    assignment = LabelingEngine(excluded_middle.thetas).refutation(frame)
    assert assignment is not None
    assert assignment[0] in (10, 12)


@pytest.mark.parametrize("text", ["x1 / x1", "x1 | ~x1 / F", "<T> x1 / x1", "x1 / [E] x1", "F / x1"])
def test_reduced_rule_agrees_with_original(text):
    rule = parse_rule(text, 1)
    rr = reduce(rule, 1)
    frames = [
        ChainFrame.of([Cluster.trivial((0,), 1)], 1),
        ChainFrame.of([Cluster.trivial((0,), 1), Cluster.trivial((1,), 1)], 1),
        ChainFrame.of([Cluster.discrete((0, 1), 1), Cluster.trivial((2,), 1)], 1),
    ]
    for frame in frames:
        assert reduced_rule_valid_on_frame(frame, rr) == rule_valid_on_frame(frame, rule)


def test_fresh_tautology_premise():
    rule = with_fresh_tautology(parse_rule("x1 ; [E] x3 / x2"))
    assert rule.premises[:2] == parse_rule("x1 ; [E] x3 / x2").premises
    assert rule.premises[2] == Or(Var(4), Not(Var(4)))
    assert rule.conclusion == Var(2)


def test_fresh_tautology_frees_the_literal_vectors():
    assert reduce(parse_rule("x1 / F"), 1).thetas.lit_vectors() == (2,)
    padded = reduce(with_fresh_tautology(parse_rule("x1 / F")), 1)
    assert len(padded.thetas.lit_vectors()) == 2
