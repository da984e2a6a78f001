import json
import os
import sys

import pytest

sys.path.insert(0, os.path.abspath(os.path.join(os.path.dirname(__file__), '..')))

from src.admissibility.comparators import FrameComparator, ModelComparator, get_comparator
from src.admissibility.search import (Admissible, NotAdmissible, NotTheorem, Theorem, decide_admissible,
                                      decide_theorem)
from src.admissibility.sp_frame import SearchBounds, build_sp_frame, enumerate_sp_frames
from src.admissibility.witness import Witness, check_witness, make_witness, witness_from_dict, witness_to_dict
from src.kripke.frame import ClusterShape
from src.normal_form.reduce import reduce, with_fresh_tautology
from src.syntax.parser import parse_formula, parse_rule
from src.utils.errors import ConfigError, FrameError

EXCLUDED_MIDDLE = "x1 | ~x1 / F"


@pytest.fixture(scope="module")
def excluded_middle():
    rule = parse_rule(EXCLUDED_MIDDLE, agents=1)
    return reduce(rule, 1), decide_admissible(rule, 1)


def _single(size: int) -> ClusterShape:
    return ClusterShape(size, ((tuple(range(size)),),))


def test_search_bounds_validation():
    with pytest.raises(ConfigError, match="max_tail_len"):
        SearchBounds(0, 1, 1)
    with pytest.raises(ConfigError, match="max_cluster_size"):
        SearchBounds(0, 0, 2)
    with pytest.raises(ConfigError, match="max_d"):
        SearchBounds(-1, 1, 2)


def test_search_bounds_from_theta_count_and_clip():
    bounds = SearchBounds.from_theta_count(8)
    assert bounds == SearchBounds(10, 8, 10)
    assert bounds.clip(SearchBounds(1, 2, 3)) == SearchBounds(1, 2, 3)


def test_enumerate_sp_frames_counts():
    """One partition shape per cluster size for k=1 at size 1, two at size 2."""
    assert len(list(enumerate_sp_frames(SearchBounds(0, 1, 2), 1))) == 1
    assert len(list(enumerate_sp_frames(SearchBounds(0, 2, 2), 1))) == 3


def test_build_sp_frame_layout():
    sp = build_sp_frame([_single(2)], [3], 1)
    assert sp.d == 0
    assert sp.main_cluster(0).worlds == (0, 1)
    assert sp.top == 2
    assert sp.tails == ((3, 4, 5),)
    assert sp.dimensions == SearchBounds(0, 2, 3)
    frame = sp.frame
    assert frame.successors[frame.cluster_index_of(5)] == 0
    assert frame.successors[frame.cluster_index_of(0)] == frame.cluster_index_of(2)


def test_build_sp_frame_rejects_short_tails():
    with pytest.raises(FrameError):
        build_sp_frame([_single(1)], [1], 1)


def test_comparators():
    assert get_comparator('frame').isomorphic([12], None, 10)
    assert not get_comparator('model').isomorphic([12], None, 10)
    assert ModelComparator().isomorphic([10], None, 10)
    assert not FrameComparator().isomorphic([10, 12], None, 10)


def test_unknown_iso_mode_is_a_config_error():
    with pytest.raises(ConfigError, match="iso mode"):
        get_comparator('graph')


@pytest.mark.parametrize("text", ["x1 / x1", "F / x1", "x1 / [E] x1"])
def test_admissible_rules(text):
    verdict = decide_admissible(parse_rule(text, agents=1), 1)
    assert isinstance(verdict, Admissible)


def test_rule_without_refuting_theta_is_settled_by_elimination():
    verdict = decide_admissible(parse_rule("x1 / x1", agents=1), 1)
    assert verdict.reason == 'no-realizable-refutation'
    assert verdict.frames_examined == 0


def test_excluded_middle_is_not_admissible(excluded_middle):
    rr, verdict = excluded_middle
    assert isinstance(verdict, NotAdmissible)
    assert verdict.within_bounds
    assert verdict.theta_count == 32
    assert check_witness(rr, verdict.witness).ok


def test_excluded_middle_witness_shape(excluded_middle):
    """C_0 cannot be a copy of @, so w_2 needs a third tail world before it reaches C_0."""
    _, verdict = excluded_middle
    sp = verdict.witness.sp
    assert sp.d == 0
    assert len(sp.last_cluster.worlds) == 1
    assert len(sp.tails[0]) == 3
    assert verdict.witness.failing_world == 0


def test_frame_reading_needs_a_larger_last_cluster():
    rule = parse_rule(EXCLUDED_MIDDLE, agents=1)
    verdict = decide_admissible(rule, 1, iso_mode='frame')
    assert isinstance(verdict, NotAdmissible)
    assert len(verdict.witness.sp.last_cluster.worlds) == 2
    assert check_witness(reduce(rule, 1), verdict.witness, 'frame').ok


def test_bound_overrides_are_applied():
    verdict = decide_admissible(parse_rule(EXCLUDED_MIDDLE, agents=1), 1, bound_overrides={'max_d': 0})
    assert verdict.bounds_used.max_d == 0
    assert isinstance(verdict, NotAdmissible)


def test_parallel_search_matches_sequential(excluded_middle):
    _, sequential = excluded_middle
    parallel = decide_admissible(parse_rule(EXCLUDED_MIDDLE, agents=1), 1, jobs=2, batch_size=1)
    assert parallel.witness == sequential.witness
    assert parallel.frames_examined == sequential.frames_examined


def test_witness_json_round_trip(excluded_middle):
    rr, verdict = excluded_middle
    data = json.loads(json.dumps(witness_to_dict(rr, verdict.witness, EXCLUDED_MIDDLE, verdict.bounds_used)))
    witness, rule_text, agents, iso_mode = witness_from_dict(data)
    assert witness == verdict.witness
    assert (rule_text, agents, iso_mode) == (EXCLUDED_MIDDLE, 1, 'model')


def test_hand_built_witness_passes():
    rr = reduce(parse_rule(EXCLUDED_MIDDLE, agents=1), 1)
    sp = build_sp_frame([_single(2)], [3], 1)
    witness = make_witness(rr, sp, {0: 10, 1: 12, 2: 10, 3: 10, 4: 10, 5: 10})
    assert check_witness(rr, witness).ok


def test_shared_theta_in_last_cluster_is_rejected():
    rr = reduce(parse_rule(EXCLUDED_MIDDLE, agents=1), 1)
    sp = build_sp_frame([_single(2)], [3], 1)
    witness = make_witness(rr, sp, {0: 12, 1: 12, 2: 10, 3: 10, 4: 10, 5: 10})
    report = check_witness(rr, witness)
    assert not report.ok
    assert [v.condition for v in report.violations] == ['4']


def test_witness_without_refutation_is_rejected():
    """Every theta of x1 / x1 makes x0 true, so no labeling refutes it."""
    rr = reduce(parse_rule("x1 / x1", agents=1), 1)
    sp = build_sp_frame([_single(1)], [2], 1)
    witness = Witness(sp, tuple((w, 0) for w in sp.frame.world_ids), 0, 0)
    report = check_witness(rr, witness)
    assert not report.ok
    assert '1' in {v.condition for v in report.violations}


@pytest.mark.parametrize("text", ["[T] p1 -> p1", "[E] p1 -> p1", "[A1] p1 -> p1", "[T] p1 -> [E] p1",
                                  "[E] p1 -> [A1] p1", "<E> p1 -> [E] <E> p1"])
def test_theorems(text):
    verdict = decide_theorem(parse_formula(text, agents=1), 1)
    assert isinstance(verdict, Theorem)


@pytest.mark.parametrize("text", ["[T] p1 -> [T] [T] p1", "[E] p1 -> [T] [T] p1"])
def test_non_theorems_come_with_countermodels(text):
    f = parse_formula(text, agents=1)
    verdict = decide_theorem(f, 1)
    assert isinstance(verdict, NotTheorem)
    assert verdict.countermodel.formula == f
    assert verdict.countermodel.verify()


@pytest.mark.parametrize("text", ["T / F", "x1 / F", "[E] x1 / F", "x1 / x1 & ~x1", "[E] ~F / F"])
def test_rules_forcing_one_literal_vector_are_not_admissible(text):
    rule = parse_rule(text, agents=1)
    verdict = decide_admissible(rule, 1)
    assert isinstance(verdict, NotAdmissible)
    assert verdict.rule.conclusion == rule.conclusion
    assert check_witness(verdict.reduced, verdict.witness).ok


def test_exhausted_search_is_repeated_with_a_fresh_premise():
    rule = parse_rule("T / F", agents=1)
    verdict = decide_admissible(rule, 1)
    assert verdict.rule == with_fresh_tautology(rule)


def test_witnessed_rule_is_the_input_when_no_retry_is_needed(excluded_middle):
    _, verdict = excluded_middle
    assert verdict.rule == parse_rule(EXCLUDED_MIDDLE, agents=1)


@pytest.mark.parametrize("text", ["F", "~T", "[T] F", "[E] F"])
def test_contradictions_are_not_theorems(text):
    f = parse_formula(text, agents=1)
    verdict = decide_theorem(f, 1)
    assert isinstance(verdict, NotTheorem)
    assert verdict.countermodel.verify()
