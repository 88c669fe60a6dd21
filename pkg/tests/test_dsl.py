from __future__ import annotations

import pytest

from stratakit.dsl import build_module, load_document, parse, render, render_relation, with_field
from stratakit.errors import DocumentError
from tests.helpers import FIXTURES, _algebra, _catalog, _chain_text


def _lines(*lines: str) -> str:
    return "\n".join(lines) + "\n"


A2_HEADER = ("field Q", "quiver", "  vertex 1", "  vertex 2", "  arrow a : 1 -> 2")


def _diagnostics(text: str) -> list[str]:
    with pytest.raises(DocumentError) as excinfo:
        parse(text)
    return [str(d) for d in excinfo.value.diagnostics]


def test_five_vertex_document_parses():
    document = load_document(FIXTURES / "five-vertex.stk")
    assert document.field == "Q"
    assert document.quiver.vertices == ["1", "2", "3", "4", "5"]
    assert len(document.quiver.arrows) == 8
    assert len(document.relations) == 10
    commutativity = document.relations[6]
    assert [t.coefficient for t in commutativity.terms] == ["1", "-1"]
    assert [t.word for t in commutativity.terms] == [["eps2", "eps1"], ["delta2", "delta1"]]
    assert document.relations[-1].terms[0].word == ["rho"] * 5
    assert document.analyses == ["stratify", "resolve simple:2", "verify obstruction beta alpha"]


@pytest.mark.parametrize("name", ["ei-char2", "ei-remark", "five-vertex", "acyclic-a3", "local-dual-numbers"])
def test_rendered_documents_parse_back(name):
    document = _catalog().document(name)
    assert parse(render(document)) == document


def test_coefficients_are_kept_exact():
    text = _lines(
        "field Q",
        "quiver",
        "  vertex 1",
        "  vertex 2",
        "  vertex 3",
        "  arrow a : 1 -> 2",
        "  arrow b : 2 -> 3",
        "  arrow c : 1 -> 2",
        "  arrow d : 2 -> 3",
        "relations",
        "  -b*a + 1/2*d*c  # comment",
    )
    relation = parse(text).relations[0]
    assert [t.coefficient for t in relation.terms] == ["-1", "1/2"]
    assert render_relation(relation) == "-b*a + 1/2*d*c"


def test_unknown_arrow_is_located():
    assert _diagnostics(_lines(*A2_HEADER, "relations", "  z*a")) == ["7:3: unknown arrow 'z'"]


def test_non_composing_word_is_reported():
    text = _chain_text(3, relations=("a1*a2",))
    messages = _diagnostics(text)
    assert len(messages) == 1
    assert "do not compose" in messages[0]


def test_length_one_relation_is_not_admissible():
    messages = _diagnostics(_lines(*A2_HEADER, "relations", "  a"))
    assert "length < 2" in messages[0]


def test_compose_mismatch_is_reported():
    text = _lines(
        "field F2",
        "eicategory",
        "  object y",
        "  object x",
        "  identity 1y at y",
        "  identity 1x at x",
        "  mor h : x -> x",
        "  mor alpha : y -> x",
        "  compose alpha h = alpha",
    )
    messages = _diagnostics(text)
    assert len(messages) == 1
    assert messages[0].startswith("9:3:")
    assert "not composable" in messages[0]


def test_action_shape_is_checked():
    text = _lines(*A2_HEADER, "module M", "  dim 1 = 1", "  dim 2 = 1", "  act a = [[1, 2]]")
    assert _diagnostics(text) == ["9:3: matrix for a must be 1x1, got 1x2"]


def test_every_problem_is_reported_in_order():
    text = _lines(
        "field F4",
        "quiver",
        "  vertex 1",
        "  vertex 1",
        "  arrow a : 1 -> 3",
    )
    messages = _diagnostics(text)
    assert [m.split(":")[0] for m in messages] == ["1", "4", "5"]
    assert messages[0].startswith("1:7:")


def test_statement_outside_a_block():
    messages = _diagnostics(_lines("vertex 1", "quiver", "  vertex 1"))
    assert messages == ["1:1: statement 'vertex' outside a block"]


def test_document_needs_exactly_one_presentation():
    assert "neither" in _diagnostics(_lines("field Q"))[0]
    both = _lines(*A2_HEADER, "eicategory", "  object y", "  identity 1y at y")
    assert any("both" in m for m in _diagnostics(both))


def test_matrix_entries_must_be_numbers():
    text = _lines(*A2_HEADER, "module M", "  dim 1 = 1", "  dim 2 = 1", "  act a = [[x]]")
    assert "integers or fractions" in _diagnostics(text)[0]


def test_with_field_normalises_names():
    document = parse(_chain_text(2))
    assert with_field(document, "GF(3)").field == "F3"
    assert with_field(document, None) is document


def test_missing_document():
    with pytest.raises(FileNotFoundError):
        load_document(FIXTURES / "missing.stk")


def test_empty_matrix_means_zero_map():
    text = _lines(*A2_HEADER, "module M", "  dim 1 = 1", "  act a = []")
    document = parse(text)
    module = build_module(document, _algebra(text), "M")
    assert module.dim == 1
    with pytest.raises(KeyError):
        build_module(document, _algebra(text), "N")
