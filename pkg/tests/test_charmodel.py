import os
import sys

import pytest

sys.path.insert(0, os.path.abspath(os.path.join(os.path.dirname(__file__), '..')))

from src.charmodel.catalogue import build_catalogue
from src.charmodel.slices import (bounded_bisim_classes, build_slices, duplicate_disagreements,
                                  duplicate_world_pairs, expected_layer_sizes, layer_sizes, mc_on_slices,
                                  singleton_classes)
from src.kripke.wellformed import check_well_formed
from src.oracle.formulas import enumerate_formulas
from src.syntax.parser import parse_formula
from src.utils.errors import ConfigError, UncoveredVariableError


@pytest.fixture(scope="module")
def one_var_slices():
    """Singleton clusters over p1: two catalogue entries, three layers."""
    return build_slices(build_catalogue(1, 1, 1), 3)


@pytest.mark.parametrize("var_count, cap, expected", [(0, 1, 1), (1, 1, 2), (1, 2, 8), (0, 2, 3)])
def test_catalogue_sizes(var_count, cap, expected):
    assert len(build_catalogue(var_count, cap, 1)) == expected


def test_catalogue_is_ordered_by_size():
    sizes = [entry.size for entry in build_catalogue(1, 2, 1)]
    assert sizes == sorted(sizes)


def test_catalogue_rejects_bad_cap():
    with pytest.raises(ConfigError, match="size cap"):
        build_catalogue(1, 0, 1)


def test_slices_reject_zero_depth():
    with pytest.raises(ConfigError, match="depth"):
        build_slices(build_catalogue(1, 1, 1), 0)


def test_layer_sizes(one_var_slices):
    assert layer_sizes(one_var_slices) == (2, 2, 4)
    assert layer_sizes(one_var_slices) == expected_layer_sizes(2, 3)


def test_layer_sizes_with_every_entry_at_step_two():
    sm = build_slices(build_catalogue(1, 1, 1), 3, step2_all=True)
    assert layer_sizes(sm) == (2, 4, 8) == expected_layer_sizes(2, 3, step2_all=True)


def test_expected_layer_sizes():
    assert expected_layer_sizes(8, 3) == (8, 56, 448)


def test_slice_frame_is_well_formed(one_var_slices):
    assert check_well_formed(one_var_slices.frame) == []


def test_labels_follow_catalogue(one_var_slices):
    assert [one_var_slices.label_of(w) for w in (0, 1)] == [0, 1]
    assert one_var_slices.layer_of(0) == 1


def test_theorem_holds_at_evaluable_worlds(one_var_slices):
    report = mc_on_slices(one_var_slices, parse_formula("[T] p1 -> p1"))
    assert report.refuted_at == frozenset()
    assert len(report.evaluable_at) == 6


def test_non_theorem_is_refuted_in_the_top_layer(one_var_slices):
    report = mc_on_slices(one_var_slices, parse_formula("[T] p1 -> [T] [T] p1"))
    assert report.refuted_at
    assert all(one_var_slices.layer_of(w) == 3 for w in report.evaluable_at)


def test_mc_rejects_uncovered_variables(one_var_slices):
    with pytest.raises(UncoveredVariableError, match="p2"):
        mc_on_slices(one_var_slices, parse_formula("p2"))


def test_bisim_round_zero_groups_by_valuation(one_var_slices):
    classes = bounded_bisim_classes(one_var_slices, 0)
    assert len(classes) == 2
    assert frozenset().union(*classes) == frozenset(one_var_slices.frame.world_ids)


def test_bisim_refinement_only_splits(one_var_slices):
    coarse = bounded_bisim_classes(one_var_slices, 1)
    fine = bounded_bisim_classes(one_var_slices, 2)
    assert len(fine) >= len(coarse)
    for group in fine:
        assert any(group <= c for c in coarse)


def test_layer_one_worlds_are_told_apart(one_var_slices):
    """Layer-3 worlds over a uniform parent match the layer-1 worlds for one round, not for two."""
    assert {0, 1} <= singleton_classes(one_var_slices, 2)


def test_duplicate_pairs_in_two_world_clusters():
    """Without variables both two-world clusters consist of interchangeable worlds."""
    sm = build_slices(build_catalogue(0, 2, 1), 1)
    assert len(duplicate_world_pairs(sm)) == 2
    formulas = enumerate_formulas(1, 0, 1)
    assert duplicate_disagreements(sm, formulas) == []


def test_no_duplicates_among_singletons(one_var_slices):
    assert duplicate_world_pairs(one_var_slices) == ()
