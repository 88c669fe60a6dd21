from __future__ import annotations

import pytest

from stratakit.algebra import opposite
from stratakit.dsl import build_module
from stratakit.errors import DimensionMismatch
from stratakit.fmod import dimension_vector, indecomposable_projectives, regular_module, simple_at
from stratakit.resolution import (
    CertifiedInfinite,
    Cutoff,
    Finite,
    ext_n,
    gl_dim,
    is_self_injective,
    minimal_resolution,
    nakayama_permutation,
    proj_dim,
    tor_n,
    verify_certificate,
    verify_resolution,
)
from tests.helpers import _algebra, _catalog, _chain_text, _fixture_algebra, _settings

A3 = _chain_text(3, relations=("a2*a1",))


def _module_b():
    document = _catalog().document("ei-char2")
    a = _fixture_algebra("ei-char2")
    return a, build_module(document, a, "B")


def test_simple_of_a3_has_projective_dimension_two():
    a = _algebra(A3)
    res = minimal_resolution(simple_at(a, "1"))
    assert res.status == Finite(2)
    assert res.term_labels() == [["1"], ["2"], ["3"]]
    assert verify_resolution(res).ok


def test_global_dimension_of_a3():
    a = _algebra(A3)
    assert gl_dim(a).to_json() == {"status": "finite", "value": 2}


def test_projective_module_resolves_in_one_step():
    a = _algebra(A3)
    assert proj_dim(indecomposable_projectives(a)[0]).value == 0


def test_dual_numbers_simple_is_periodic():
    a = _fixture_algebra("local-dual-numbers")
    res = minimal_resolution(simple_at(a, "1"))
    assert isinstance(res.status, CertifiedInfinite)
    assert (res.status.first, res.status.second) == (1, 2)
    assert res.status.certificate.kind == "isomorphism"
    assert verify_certificate(res)
    assert gl_dim(a).status == "infinite"
    assert is_self_injective(a)


def test_module_b_resolves_by_projectives_at_y_then_x():
    a, b = _module_b()
    assert dimension_vector(b).values == (2, 0)
    res = minimal_resolution(b)
    assert res.term_labels() == [["y"], ["x"], ["x"]]
    assert [dimension_vector(t).values for t in res.terms] == [(2, 1), (0, 2), (0, 2)]
    assert isinstance(res.status, CertifiedInfinite)
    assert (res.status.first, res.status.second) == (1, 2)
    assert verify_certificate(res)
    assert verify_resolution(res).ok


def test_min_length_extends_past_the_certificate():
    _, b = _module_b()
    res = minimal_resolution(b, cutoff=10, min_length=5)
    assert len(res.stages) == 5
    assert isinstance(res.status, CertifiedInfinite)


def test_cutoff_without_certificate_is_reported():
    a, b = _module_b()
    res = minimal_resolution(b, cutoff=1)
    assert res.status == Cutoff(1)
    assert proj_dim(b, cutoff=1).status == "unknown"


def test_cutoff_must_be_positive():
    a = _algebra(A3)
    with pytest.raises(ValueError):
        minimal_resolution(simple_at(a, "1"), cutoff=0)


def test_ext_between_simples_of_a3():
    a = _algebra(A3)
    s1, s2, s3 = (simple_at(a, v) for v in ("1", "2", "3"))
    assert ext_n(s1, s1, 0) == 1
    assert ext_n(s1, s2, 1) == 1
    assert ext_n(s1, s3, 1) == 0
    assert ext_n(s1, s3, 2) == 1
    assert ext_n(s1, s2, 2) == 0


def test_group_algebras_in_characteristic_two_are_self_injective():
    a = _fixture_algebra("ei-char2")
    assert not is_self_injective(a)
    inner = _algebra(
        """
        field F2
        eicategory
          object y
          identity 1y at y
          mor g : y -> y
          compose g g = 1y
        """
    )
    assert is_self_injective(inner)
    assert nakayama_permutation(inner) == {"y": "y"}


def test_semisimple_algebra_has_global_dimension_zero():
    a = _algebra(_chain_text(2).replace("arrow a1 : 1 -> 2\n", ""))
    assert gl_dim(a, config=_settings()).to_json() == {"status": "finite", "value": 0}


def test_tor_against_free_and_simple_right_modules():
    a = _algebra(A3)
    op = opposite(a)
    s1, s2 = simple_at(a, "1"), simple_at(a, "2")
    assert tor_n(regular_module(op), s2, 0) == 1
    assert tor_n(regular_module(op), s2, 1) == 0
    right = simple_at(op, "3")
    assert tor_n(right, s2, 1) == 1
    assert tor_n(right, s1, 1) == 0
    assert tor_n(right, s1, 2) == 1
    with pytest.raises(DimensionMismatch):
        tor_n(s1, s2, 1)
    with pytest.raises(ValueError):
        tor_n(right, s1, -1)
