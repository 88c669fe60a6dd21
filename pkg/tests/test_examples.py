from __future__ import annotations

import pytest

from stratakit.algebra import corner
from stratakit.dsl import build_module
from stratakit.fmod import (
    dimension_vector,
    indecomposable_projectives,
    is_projective,
    left_ideal_module,
    right_multiplication_map,
    simple_at,
)
from stratakit.models import RunOptions
from stratakit.report import AnalysisEngine
from stratakit.resolution import CertifiedInfinite, is_self_injective, minimal_resolution, verify_certificate
from stratakit.strata import (
    contravariant_finiteness_obstruction,
    find_stratifications,
    findim_bound,
    finest_stratification,
    layer_stratifying_reports,
    recollement_condition_check,
    standardly_stratified_check,
    stratification_from_groups,
)
from tests.helpers import _catalog, _fixture_algebra, _settings


def _engine(example: str, field_name: str | None = None) -> AnalysisEngine:
    return AnalysisEngine(_catalog().document(example, field_name), RunOptions(), _settings())


# -- two objects over F2 -----------------------------------------------------


def test_ei_char2_dimensions():
    a = _fixture_algebra("ei-char2")
    assert a.dim == 5
    assert a.vertex_labels == ("y", "x")
    b = build_module(_catalog().document("ei-char2"), a, "B")
    assert dimension_vector(b).values == (2, 0)
    assert [dimension_vector(p).values for p in indecomposable_projectives(a)] == [(2, 1), (0, 2)]


def test_ei_char2_module_b_never_stops():
    a = _fixture_algebra("ei-char2")
    b = build_module(_catalog().document("ei-char2"), a, "B")
    res = minimal_resolution(b, min_length=6)
    labels = res.term_labels()
    assert labels[0] == ["y"]
    assert all(term == ["x"] for term in labels[1:])
    assert isinstance(res.status, CertifiedInfinite)
    assert (res.status.first, res.status.second) == (1, 2)
    assert verify_certificate(res)


def test_ei_char2_has_no_recollement_at_y():
    a = _fixture_algebra("ei-char2")
    report = recollement_condition_check(a, a.vertex("y"), config=_settings())
    assert report.quotient_dim == 2
    assert report.left_proj_dim.status == "infinite"
    assert report.passed is False


def test_ei_char2_findim_bound_is_one():
    a = _fixture_algebra("ei-char2")
    report = findim_bound(a, finest_stratification(a))
    assert report.known
    assert report.bound == 1


def test_ei_char2_engine_matches_library():
    engine = _engine("ei-char2")
    section = engine.run("verify", ["recollement", "y"])
    assert section.error is None
    assert section.result["passed"] is False
    resolved = engine.run("resolve", ["B"]).result
    assert resolved["status"]["kind"] == "certified_infinite"
    assert resolved["status"]["certificate"]["verified"] is True


# -- stratifying but not standardly stratified in characteristic two ----------


def test_ei_remark_in_characteristic_two():
    a = _fixture_algebra("ei-remark")
    s = stratification_from_groups(a, [["y"], ["x"]])
    reports = layer_stratifying_reports(s, tor_depth=6, config=_settings())
    assert all(report.passed for _, report in reports)
    assert all(dim == 0 for _, report in reports for _, dim in report.tor)
    standard = standardly_stratified_check(a, s)
    assert not standard.passed
    assert standard.webb is not None and not standard.webb.passed
    assert [entry.stabilizer_order for entry in standard.webb.entries] == [2]


def test_ei_remark_in_characteristic_three():
    a = _fixture_algebra("ei-remark", "F3")
    s = stratification_from_groups(a, [["y"], ["x"]])
    assert all(report.passed for _, report in layer_stratifying_reports(s, tor_depth=6, config=_settings()))
    standard = standardly_stratified_check(a, s)
    assert standard.passed
    assert standard.webb.passed


def test_ei_remark_engine_reports_both_verdicts():
    engine = _engine("ei-remark")
    stratifying = engine.run("verify", ["stratifying"]).result
    standard = engine.run("verify", ["standard"]).result
    assert stratifying["passed"] is True
    assert standard["passed"] is False


# -- five vertices with a commutative square ---------------------------------


@pytest.mark.parametrize("field_name", ["Q", "F2"])
def test_five_vertex_alpha_generates_a_projective(field_name):
    a = _fixture_algebra("five-vertex", field_name)
    assert a.dim == 21
    module, _ = left_ideal_module(a, a.element("alpha"))
    assert module.dim == 5
    assert is_projective(module)
    assert right_multiplication_map(a, a.element("alpha"), a.vertex("2")).is_isomorphism()


@pytest.mark.parametrize("field_name", ["Q", "F2"])
def test_five_vertex_simple_at_two_has_infinite_projective_dimension(field_name):
    a = _fixture_algebra("five-vertex", field_name)
    res = minimal_resolution(simple_at(a, "2"))
    assert isinstance(res.status, CertifiedInfinite)
    assert verify_certificate(res)


def test_five_vertex_stratifications_and_corner_at_five():
    a = _fixture_algebra("five-vertex")
    assert ("1,2,3,4", "5") in [s.labels for s in find_stratifications(a)]
    rho = corner(a, a.vertex("5"), "5").algebra
    assert rho.dim == 5
    assert is_self_injective(rho)
    report = findim_bound(a, finest_stratification(a))
    entry = next(e for e in report.strata if e.label == "5")
    assert entry.source == "self-injective"
    assert entry.value.value == 0


@pytest.mark.parametrize("field_name", ["Q", "F2"])
def test_five_vertex_obstruction_is_present(field_name):
    a = _fixture_algebra("five-vertex", field_name)
    verdict = contravariant_finiteness_obstruction(a, "beta", ["alpha"])
    assert verdict.present
    assert verdict.q_matches_target
    assert verdict.q_proj_dim.value == 0


def test_five_vertex_recollement_fails_at_vertex_two():
    a = _fixture_algebra("five-vertex")
    e = a.field.normalize(sum((a.vertex(v) for v in ("1", "2", "3", "4")), a.zero()))
    report = recollement_condition_check(a, e, config=_settings())
    assert report.passed is False
    infinite = [s.vertex for s in report.summands if s.proj_dim.status == "infinite"]
    assert "2" in infinite


@pytest.mark.parametrize("example", ["ei-char2", "ei-remark", "five-vertex", "acyclic-a3", "local-dual-numbers"])
def test_catalog_commands_run_cleanly(example):
    engine = _engine(example)
    sections = engine.run_all(_catalog().get(example).commands)
    assert [section.error for section in sections] == [None] * len(sections)
