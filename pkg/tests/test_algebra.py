from __future__ import annotations

import numpy as np
import pytest

from stratakit.algebra import (
    PathAlgebraPresentation,
    Relation,
    associated_category,
    build_path_algebra,
    corner,
    element_of_path,
    opposite,
    peirce_dimensions,
    quotient_algebra,
    stratification_failure,
    two_sided_ideal,
)
from stratakit.errors import NonAdmissible, NotAnIdeal, NotEI, NotParallel
from stratakit.linalg import FieldSpec, Subspace
from stratakit.quiver import Quiver, path_from_word
from stratakit.radical import loewy_length, radical
from tests.helpers import _algebra, _chain_text, _fixture_algebra

Q = FieldSpec.parse("Q")


@pytest.mark.parametrize(
    ("example", "expected"),
    [
        ("five-vertex", 21),
        ("acyclic-a3", 5),
        ("local-dual-numbers", 2),
        ("ei-char2", 5),
        ("ei-remark", 4),
    ],
)
def test_fixture_dimensions(example, expected):
    assert _fixture_algebra(example).dim == expected


def test_five_vertex_dimension_does_not_depend_on_the_field():
    assert _fixture_algebra("five-vertex", "F2").dim == 21


def test_path_algebra_basis_is_surviving_paths():
    a = _algebra(_chain_text(3, relations=("a2*a1",)))
    assert set(a.basis) == {"e_1", "e_2", "e_3", "a1", "a2"}
    assert np.all(a.multiply(a.element("a2"), a.element("a1")) == a.zero())
    assert np.all(a.multiply(a.element("a1"), a.vertex("1")) == a.element("a1"))


def test_commutativity_relation_identifies_paths():
    a = _fixture_algebra("five-vertex")
    quiver = a.origin.presentation.quiver
    top = element_of_path(a, path_from_word(quiver, ["eps2", "eps1"]))
    bottom = element_of_path(a, path_from_word(quiver, ["delta2", "delta1"]))
    assert np.any(top)
    assert np.all(top == bottom)


def test_loop_truncation_at_five():
    a = _fixture_algebra("five-vertex")
    quiver = a.origin.presentation.quiver
    assert np.any(element_of_path(a, path_from_word(quiver, ["rho"] * 4)))
    assert not np.any(element_of_path(a, path_from_word(quiver, ["rho"] * 5)))
    assert corner(a, a.vertex("5")).algebra.dim == 5


def test_short_relation_is_not_admissible():
    q = Quiver.build(["1", "2"], [("a", "1", "2")])
    with pytest.raises(NonAdmissible):
        PathAlgebraPresentation(q, (Relation(((1, path_from_word(q, ["a"])),)),), Q)


def test_relation_terms_must_be_parallel():
    q = Quiver.build(["1", "2", "3", "4"], [("a", "1", "2"), ("b", "2", "3"), ("c", "3", "4")])
    relation = Relation(((1, path_from_word(q, ["b", "a"])), (1, path_from_word(q, ["c", "b"]))))
    with pytest.raises(NotParallel):
        PathAlgebraPresentation(q, (relation,), Q)


def test_free_loop_never_stabilises():
    q = Quiver.build(["1"], [("x", "1", "1")])
    with pytest.raises(NonAdmissible):
        build_path_algebra(PathAlgebraPresentation(q, (), Q), degree_cap=4)


def test_non_invertible_endomorphism_is_rejected():
    text = """
    field Q
    eicategory
      object x
      identity 1x at x
      mor h : x -> x
      compose h h = h
    """
    with pytest.raises(NotEI):
        _algebra(text)


def test_directedness_failure_names_the_witness():
    a = _fixture_algebra("ei-char2")
    assert a.vertex_labels == ("y", "x")
    failure = stratification_failure(a, [a.vertex("x"), a.vertex("y")])
    assert failure is not None
    assert failure.kind == "directedness"
    assert failure.witness == "alpha"
    assert stratification_failure(a, [a.vertex("y"), a.vertex("x")]) is None


def test_incomplete_family_is_reported():
    a = _algebra(_chain_text(2))
    failure = stratification_failure(a, [a.vertex("1")])
    assert failure.kind == "completeness"


def test_associated_category_homs_follow_arrows():
    a = _algebra(_chain_text(3, relations=("a2*a1",)))
    category = associated_category(a, list(a.vertex_idempotents), ["1", "2", "3"])
    assert category.hom_nonzero(0, 1)
    assert not category.hom_nonzero(1, 0)
    assert not category.hom_nonzero(0, 2)
    assert category.hom_labels(1, 2) == ["a2"]


def test_peirce_dimensions_of_a3():
    a = _algebra(_chain_text(3, relations=("a2*a1",)))
    assert peirce_dimensions(a, list(a.vertex_idempotents)) == [[1, 0, 0], [1, 1, 0], [0, 1, 1]]


def test_opposite_reverses_products():
    a = _algebra(_chain_text(3))
    op = opposite(a)
    x, y = a.element("a2"), a.element("a1")
    assert np.all(op.multiply(y, x) == a.multiply(x, y))
    assert np.all(opposite(op).mult == a.mult)


def test_quotient_by_arrow_ideal_is_semisimple():
    a = _algebra(_chain_text(3, relations=("a2*a1",)))
    ideal = two_sided_ideal(a, [a.element("a1"), a.element("a2")])
    assert ideal == radical(a)
    quotient = quotient_algebra(a, ideal)
    assert quotient.algebra.dim == 3
    assert radical(quotient.algebra).dim == 0


def test_quotient_by_non_ideal_is_rejected():
    a = _algebra(_chain_text(2))
    with pytest.raises(NotAnIdeal):
        quotient_algebra(a, Subspace.span(a.field, a.dim, [a.vertex("1")]))


def test_radical_in_positive_characteristic():
    assert radical(_fixture_algebra("ei-char2")).dim == 3
    assert radical(_fixture_algebra("ei-char2", "F3")).dim == 1
    assert loewy_length(_fixture_algebra("ei-char2")) == 2


def test_loewy_length_of_truncated_loop():
    assert loewy_length(_fixture_algebra("local-dual-numbers")) == 2
    assert loewy_length(_fixture_algebra("five-vertex")) >= 5
