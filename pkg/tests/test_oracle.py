import os
import random
import sys

import pytest

sys.path.insert(0, os.path.abspath(os.path.join(os.path.dirname(__file__), '..')))

from src.admissibility.search import NotAdmissible, decide_admissible
from src.oracle.brute import brute_not_admissible, equivalid_nf
from src.oracle.formulas import enumerate_formulas, random_formula, random_rule
from src.oracle.frames import FrameBounds, enumerate_chain_frames, refute_formula
from src.syntax.formula import Substitution, Top, max_agent, variables
from src.syntax.parser import parse_formula, parse_rule
from src.utils.errors import ConfigError


@pytest.fixture
def small_bounds():
    return FrameBounds(max_clusters=3, max_cluster_size=1, agents=1)


def test_frame_bounds_must_be_positive():
    with pytest.raises(ConfigError, match="max_clusters"):
        FrameBounds(0, 1, 1)


@pytest.mark.parametrize("bounds, expected", [
    (FrameBounds(1, 1, 1), 1),
    (FrameBounds(2, 1, 1), 2),
    (FrameBounds(1, 2, 1), 3),
    (FrameBounds(2, 2, 1), 12),
])
def test_enumerate_chain_frames_counts(bounds, expected):
    assert len(list(enumerate_chain_frames(bounds))) == expected


def test_refutes_intransitivity(small_bounds):
    """Two clusters are not enough: the counterexample needs a third one."""
    f = parse_formula("[T] p1 -> [T] [T] p1")
    countermodel = refute_formula(f, small_bounds)
    assert countermodel is not None
    assert countermodel.verify()
    assert len(countermodel.model.frame.clusters) == 3
    assert countermodel.world == 0


def test_no_countermodel_for_tautology(small_bounds):
    assert refute_formula(parse_formula("p1 -> p1"), small_bounds) is None


def test_agent_knowledge_within_indistinguishability():
    f = parse_formula("[E] p1 -> [A1] p1")
    assert refute_formula(f, FrameBounds(2, 2, 1)) is None


def test_refute_rejects_agents_beyond_bounds(small_bounds):
    with pytest.raises(ConfigError, match="agent 2"):
        refute_formula(parse_formula("[A2] p1", agents=2), small_bounds)


def test_enumerate_formulas_depth_one():
    formulas = enumerate_formulas(1, 1, 1)
    assert len(formulas) == 36
    assert len(set(formulas)) == 36
    assert formulas[:3] == [Top(), parse_formula("F"), parse_formula("p1")]


def test_random_formulas_are_seeded():
    first = [random_formula(random.Random(7), 2, 2, 2) for _ in range(5)]
    second = [random_formula(random.Random(7), 2, 2, 2) for _ in range(5)]
    assert first == second
    for f in first:
        assert variables(f) <= {1, 2}
        assert max_agent(f) <= 2


def test_random_rule_premise_count():
    rng = random.Random(3)
    for _ in range(20):
        rule = random_rule(rng, 2, 2, 1, max_premises=2)
        assert 1 <= len(rule.premises) <= 2


def test_brute_certifies_excluded_middle(small_bounds):
    rule = parse_rule("x1 | ~x1 / F")
    found = brute_not_admissible(rule, 1, 1, small_bounds)
    assert found is not None
    assert found.substitution == Substitution.of({1: Top()})
    assert found.verify()


def test_brute_is_inconclusive_for_identity(small_bounds):
    assert brute_not_admissible(parse_rule("x1 / x1"), 1, 1, small_bounds) is None


def test_brute_and_decider_agree_on_excluded_middle(small_bounds):
    rule = parse_rule("x1 | ~x1 / F")
    assert brute_not_admissible(rule, 1, 1, small_bounds) is not None
    assert isinstance(decide_admissible(rule, 1), NotAdmissible)


@pytest.mark.parametrize("text", ["x1 / x1", "x1 | ~x1 / F", "[T] x1 / x1", "x1 / [E] x1"])
def test_normal_form_is_equivalid(text):
    assert equivalid_nf(parse_rule(text), FrameBounds(2, 1, 1), 1)
