import json
import os
import sys

import pytest

sys.path.insert(0, os.path.abspath(os.path.join(os.path.dirname(__file__), '..')))

from src.kripke.canonical import canonical_cluster_model, cluster_shapes, set_partitions
from src.kripke.frame import ChainFrame, Cluster, ClusterFrame, ClusterShape, rt_successors
from src.kripke.model import Countermodel, Model, Valuation, generated_chain
from src.kripke.semantics import (extension, formula_valid_on_model, refute_rule_on_frame,
                                  rule_valid_on_frame, satisfies)
from src.kripke.serialization import dump_model, load_model, model_from_dict, model_to_dict
from src.syntax.formula import Var
from src.syntax.parser import parse_formula, parse_rule
from src.utils.errors import FrameError, UncoveredVariableError, UnknownWorldError


def singleton_chain(length, agents=1):
    return ChainFrame.of([Cluster.trivial((i,), agents) for i in range(length)], agents)


@pytest.fixture
def three_chain_model():
    """C_0={0}, C_1={1}, C_2={2} with p1 true at 0 and 1."""
    return Model(singleton_chain(3), Valuation.of({1: {0, 1}}))


def test_rt_successors_single_cluster():
    assert rt_successors(singleton_chain(1), 0) == {0}


def test_rt_successors_next_cluster_only():
    frame = singleton_chain(3)
    assert rt_successors(frame, 0) == {0, 1}
    assert 2 not in rt_successors(frame, 0)
    assert rt_successors(frame, 2) == {2}


def test_rt_successors_unknown_world():
    with pytest.raises(UnknownWorldError):
        rt_successors(singleton_chain(1), 7)


def test_cluster_validation():
    with pytest.raises(FrameError):
        Cluster((0, 1), (((0,),),))
    with pytest.raises(FrameError):
        Cluster((), ())
    with pytest.raises(FrameError, match="overlap"):
        ChainFrame.of([Cluster.trivial((0,), 1), Cluster.trivial((0,), 1)], 1)


def test_environment_box_on_reflexive_singleton():
    model = Model(singleton_chain(1), Valuation.of({1: {0}}))
    assert satisfies(model, 0, parse_formula("[E] p1"))


def test_time_box_and_diamond():
    model = Model(singleton_chain(2), Valuation.of({1: {1}}))
    assert not satisfies(model, 0, parse_formula("[T] p1"))
    assert satisfies(model, 0, parse_formula("<T> p1"))


def test_intransitive_time(three_chain_model):
    """World 1 sees world 2, which world 0 does not."""
    assert satisfies(three_chain_model, 0, parse_formula("[T] p1"))
    assert not satisfies(three_chain_model, 0, parse_formula("[T] [T] p1"))
    assert not formula_valid_on_model(three_chain_model, parse_formula("[T] p1 -> [T] [T] p1"))


def test_agent_box_uses_blocks():
    cluster = Cluster((0, 1), (((0,), (1,)),))
    model = Model(ChainFrame.of([cluster], 1), Valuation.of({1: {0}}))
    assert satisfies(model, 0, parse_formula("[A1] p1"))
    assert not satisfies(model, 0, parse_formula("[E] p1"))
    assert extension(model, parse_formula("<E> p1")) == {0, 1}


def test_valid_formulas_on_model(three_chain_model):
    for text in ["p1 -> p1", "[T] p1 -> p1", "[E] p1 -> [A1] p1", "<E> p1 -> [E] <E> p1"]:
        assert formula_valid_on_model(three_chain_model, parse_formula(text))


def test_uncovered_variable(three_chain_model):
    with pytest.raises(UncoveredVariableError, match="p2"):
        satisfies(three_chain_model, 0, Var(2))


def test_valuation_rejects_unknown_worlds():
    with pytest.raises(UnknownWorldError):
        Model(singleton_chain(1), Valuation.of({1: {5}}))


def test_locality_under_truncation(three_chain_model):
    """Clusters more than td(f) steps ahead do not matter."""
    f = parse_formula("[T] p1 & <T> ~p1")
    truncated = Model(ChainFrame.of(three_chain_model.frame.clusters[:2], 1), Valuation.of({1: {0, 1}}))
    assert satisfies(truncated, 0, f) == satisfies(three_chain_model, 0, f)


def test_rule_validity_examples():
    frames = [singleton_chain(2), ChainFrame.of([Cluster.trivial((0, 1), 1), Cluster.discrete((2, 3), 1)], 1)]
    for frame in frames:
        assert rule_valid_on_frame(frame, parse_rule("x1 / x1"))
        assert not rule_valid_on_frame(frame, parse_rule("x1 | ~x1 / F"))
        assert rule_valid_on_frame(frame, parse_rule("x1 / [E] x1"))


def test_refute_rule_returns_first_valuation():
    valuation = refute_rule_on_frame(singleton_chain(2), parse_rule("T / x1"))
    assert valuation == Valuation.of({1: set()})


def test_countermodel_verify(three_chain_model):
    f = parse_formula("[T] p1 -> [T] [T] p1")
    assert Countermodel(three_chain_model, 0, f).verify()
    assert not Countermodel(three_chain_model, 2, f).verify()


def test_generated_chain_follows_successors():
    clusters = (Cluster.trivial((0,), 1), Cluster.trivial((1,), 1), Cluster.trivial((2,), 1))
    forest = ClusterFrame(clusters, (None, 0, 0), 1)
    model = Model(forest, Valuation.of({1: {0, 2}}))
    chain = generated_chain(model, 2)
    assert chain.frame.world_ids == (2, 0)
    assert chain.valuation.get(1) == {0, 2}
    assert satisfies(chain, 2, parse_formula("[T] p1"))


def test_set_partitions_counts():
    assert [len(list(set_partitions(n))) for n in range(5)] == [1, 1, 2, 5, 15]


def test_cluster_shapes_up_to_isomorphism():
    assert len(cluster_shapes(1, 1)) == 1
    assert len(cluster_shapes(2, 1)) == 2
    assert len(cluster_shapes(3, 1)) == 3
    assert len(cluster_shapes(2, 2)) == 4
    assert cluster_shapes(2, 0) == (ClusterShape(2, ()),)


def test_canonical_cluster_model_ignores_world_order():
    shape = ClusterShape(2, (((0, 1),),))
    assert canonical_cluster_model((1, 0), shape) == canonical_cluster_model((0, 1), shape)
    assert canonical_cluster_model((1, 1), shape) != canonical_cluster_model((0, 1), shape)


def test_model_json_round_trip(tmp_path, three_chain_model):
    path = tmp_path / "model.json"
    dump_model(path, three_chain_model, cluster_tags=[{'layer': i} for i in range(3)])
    loaded = load_model(path)
    assert loaded.model == three_chain_model
    assert [tag['layer'] for tag in loaded.cluster_tags] == [0, 1, 2]
    data = json.loads(path.read_text())
    assert data['valuation'] == {'p1': [0, 1]}
    assert 'next' not in data['clusters'][0]


def test_forest_json_keeps_successors():
    clusters = (Cluster.trivial((0,), 1), Cluster.trivial((1,), 1), Cluster.trivial((2,), 1))
    model = Model(ClusterFrame(clusters, (None, 0, 0), 1), Valuation.of({}))
    data = model_to_dict(model, sp={'main': [0]})
    loaded = model_from_dict(json.loads(json.dumps(data)))
    assert loaded.model.frame.successors == (None, 0, 0)
    assert loaded.sp == {'main': [0]}


def test_malformed_model_json():
    with pytest.raises(FrameError):
        model_from_dict({'agents': 1})
