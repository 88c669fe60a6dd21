from __future__ import annotations

import pytest

from stratakit.errors import InvalidObstructionPair, NotAnIdeal, NotAStratification, NotMinimalObject, NotParallel
from stratakit.fmod import simple_at
from stratakit.strata import (
    check_cover_theorem,
    check_restricted_resolution,
    check_restriction_preserves_projectives,
    contravariant_finiteness_obstruction,
    find_stratifications,
    findim_bound,
    finest_stratification,
    gldim_bound,
    ideals,
    is_minimal,
    layer_stratifying_reports,
    recollement_condition_check,
    simples_support_check,
    standardly_stratified_check,
    stratification_from_groups,
    support_profile,
)
from tests.helpers import _algebra, _chain_text, _fixture_algebra, _settings

A3 = _chain_text(3, relations=("a2*a1",))


def test_a3_has_every_directed_stratification():
    a = _algebra(A3)
    found = find_stratifications(a)
    assert [s.labels for s in found] == [("1,2,3",), ("1,2", "3"), ("1", "2,3"), ("1", "2", "3")]
    assert not is_minimal(a)
    assert finest_stratification(a).length == 3


def test_local_algebra_is_minimal():
    a = _fixture_algebra("local-dual-numbers")
    assert is_minimal(a)
    assert [s.labels for s in find_stratifications(a)] == [("1",)]


def test_stratification_from_groups_checks_direction():
    a = _algebra(A3)
    s = stratification_from_groups(a, [["1", "2"], ["3"]])
    assert s.labels == ("1,2", "3")
    with pytest.raises(NotAStratification):
        stratification_from_groups(a, [["3"], ["1", "2"]])
    with pytest.raises(NotAStratification):
        stratification_from_groups(a, [["1", "2", "9"]])


def test_support_profile_of_middle_simple():
    a = _algebra(A3)
    s = finest_stratification(a)
    profile = support_profile(simple_at(a, "2"), s)
    assert profile.minimal == ("2",)
    assert profile.closure == ("2", "3")
    assert profile.dim_at("1") == 0


def test_ideals_are_closed_under_incoming_homs():
    s = finest_stratification(_algebra(A3))
    assert ideals(s) == [(), ("1",), ("1", "2"), ("1", "2", "3")]
    assert check_restriction_preserves_projectives(s, ("1", "2")).passed
    with pytest.raises(NotAnIdeal):
        check_restriction_preserves_projectives(s, ("2",))


def test_structure_checks_on_a3():
    a = _algebra(A3)
    s = finest_stratification(a)
    assert simples_support_check(s).passed
    assert check_cover_theorem(simple_at(a, "2"), s).passed
    assert check_restricted_resolution(simple_at(a, "1"), s, "1").passed
    with pytest.raises(NotMinimalObject):
        check_restricted_resolution(simple_at(a, "1"), s, "2")


def test_layers_of_a3_are_stratifying_and_standard():
    a = _algebra(A3)
    s = finest_stratification(a)
    reports = layer_stratifying_reports(s, tor_depth=3, config=_settings())
    assert [objs for objs, _ in reports] == [("3",), ("2", "3"), ("1", "2", "3")]
    assert all(report.passed for _, report in reports)
    assert all(report.multiplication_iso and report.tor_vanishes for _, report in reports)
    standard = standardly_stratified_check(a, s)
    assert standard.passed
    assert standard.webb is None


def test_gldim_bound_sums_strata():
    a = _algebra(A3)
    report = gldim_bound(a, finest_stratification(a))
    assert report.bound == 2
    assert report.algebra_value.value == 2
    assert report.inequality_holds is True
    assert [entry.corner_dim for entry in report.strata] == [1, 1, 1]


def test_findim_bound_uses_self_injective_strata():
    a = _fixture_algebra("ei-char2")
    report = findim_bound(a, finest_stratification(a))
    assert report.bound == 1
    assert [entry.source for entry in report.strata] == ["self-injective", "self-injective"]


def test_findim_bound_prefers_the_oracle():
    a = _fixture_algebra("ei-char2")
    report = findim_bound(a, finest_stratification(a), oracle={"x": 3})
    assert report.bound == 4
    with pytest.raises(KeyError):
        findim_bound(a, finest_stratification(a), oracle={"z": 0})


def test_findim_bound_of_self_injective_algebra_is_zero():
    a = _fixture_algebra("local-dual-numbers")
    report = findim_bound(a, finest_stratification(a))
    assert report.bound == 0
    assert report.known


def test_recollement_at_the_unit_passes():
    a = _algebra(A3)
    report = recollement_condition_check(a, a.unit, config=_settings())
    assert report.quotient_dim == a.dim
    assert [(s.vertex, s.proj_dim.value) for s in report.summands] == [("1", 0), ("2", 0), ("3", 0)]
    assert report.left_proj_dim.value == 0
    assert report.right_proj_dim.value == 0
    assert report.passed is True


def test_recollement_left_dimension_is_the_largest_summand():
    a = _algebra(A3)
    e = a.field.normalize(a.vertex("1") + a.vertex("2"))
    report = recollement_condition_check(a, e, config=_settings())
    assert report.quotient_dim == 3
    assert [s.vertex for s in report.summands] == ["1", "2"]
    assert report.left_proj_dim.value == max(s.proj_dim.value for s in report.summands)


def test_obstruction_rejects_bad_pairs():
    a = _fixture_algebra("five-vertex")
    with pytest.raises(NotParallel):
        contravariant_finiteness_obstruction(a, "beta", ["gamma"])
    with pytest.raises(InvalidObstructionPair):
        contravariant_finiteness_obstruction(a, "beta", ["beta"])
    with pytest.raises(InvalidObstructionPair):
        contravariant_finiteness_obstruction(_fixture_algebra("ei-char2"), "alpha", ["alpha"])


def test_obstruction_is_absent_for_a_zero_path():
    a = _algebra(
        """\
        field Q
        quiver
          vertex 1
          vertex 2
          vertex 3
          arrow a : 1 -> 2
          arrow b : 2 -> 3
          arrow p : 1 -> 3
        relations
          b*a
        """
    )
    verdict = contravariant_finiteness_obstruction(a, "p", ["b", "a"])
    assert not verdict.q_nonzero
    assert not verdict.present
    assert verdict.q_proj_dim.status == "unknown"
    assert verdict.top_proj_dim.is_finite
