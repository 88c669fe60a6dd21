"""Line-oriented input documents: quivers with relations, EI categories, modules.

A document is a sequence of blocks. ``field``, ``quiver``, ``relations``,
``eicategory``, ``module <name>`` and ``analyses`` open a block; the lines
that follow belong to it until the next header. ``#`` starts a comment.
Parsing collects every problem as a :class:`Diagnostic` before failing.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Any

import yaml
from pydantic import ValidationError

from stratakit.algebra import (
    Algebra,
    EICategory,
    Morphism,
    PathAlgebraPresentation,
    Relation,
    build_ei_category_algebra,
    build_path_algebra,
)
from stratakit.errors import Diagnostic, DimensionMismatch, DocumentError, UnsupportedField
from stratakit.fmod import FModule, module_from_representation
from stratakit.linalg import FieldSpec
from stratakit.models import (
    ActionDecl,
    ArrowDecl,
    CompositionDecl,
    EICategoryBlock,
    IdentityDecl,
    InputDocument,
    ModuleDecl,
    MorphismDecl,
    QuiverBlock,
    RelationDecl,
    RelationTerm,
    normalize_number,
)
from stratakit.quiver import Arrow, Path as QuiverPath, Quiver, path_from_word
from stratakit.settings import Settings
from stratakit.settings import settings as default_settings

HEADERS = ("field", "quiver", "relations", "eicategory", "module", "analyses")

_LABEL = re.compile(r"^[A-Za-z0-9_][A-Za-z0-9_'.]*$")
_ARROW = re.compile(r"^[A-Za-z_][A-Za-z0-9_']*$")
_NUMBER = re.compile(r"^\d+(?:/\d+)?$")
_VERTEX = re.compile(r"^vertex\s+(?P<v>\S+)$")
_ARROW_LINE = re.compile(r"^arrow\s+(?P<label>\S+)\s*:\s*(?P<s>\S+)\s*->\s*(?P<t>\S+)$")
_OBJECT = re.compile(r"^object\s+(?P<x>\S+)$")
_MOR = re.compile(r"^mor\s+(?P<label>\S+)\s*:\s*(?P<s>\S+)\s*->\s*(?P<t>\S+)$")
_COMPOSE = re.compile(r"^compose\s+(?P<g>\S+)\s+(?P<f>\S+)\s*=\s*(?P<h>\S+)$")
_IDENTITY = re.compile(r"^identity\s+(?P<label>\S+)\s+at\s+(?P<x>\S+)$")
_DIM = re.compile(r"^dim\s+(?P<v>\S+)\s*=\s*(?P<n>\d+)$")
_ACT = re.compile(r"^act\s+(?P<label>\S+)\s*=\s*(?P<matrix>.*)$")


@dataclass
class _Draft:
    field_name: str | None = None
    quiver: QuiverBlock | None = None
    relations: list[RelationDecl] = field(default_factory=list)
    eicategory: EICategoryBlock | None = None
    modules: list[ModuleDecl] = field(default_factory=list)
    analyses: list[str] = field(default_factory=list)


class _Parser:
    def __init__(self, text: str) -> None:
        self.text = text
        self.draft = _Draft()
        self.diagnostics: list[Diagnostic] = []
        self.block: str | None = None
        self.spans: dict[tuple, tuple[int, int]] = {}

    def error(self, line: int, column: int, message: str) -> None:
        self.diagnostics.append(Diagnostic(line, column, message))

    def run(self) -> InputDocument:
        for number, raw in enumerate(self.text.splitlines(), start=1):
            stripped = raw.split("#", 1)[0].rstrip()
            body = stripped.lstrip()
            if not body:
                continue
            column = len(stripped) - len(body) + 1
            self.line(body, number, column)
        self.validate()
        if self.diagnostics:
            raise DocumentError(sorted(self.diagnostics, key=lambda d: (d.line, d.column)))
        d = self.draft
        try:
            return InputDocument(
                field=d.field_name or "Q",
                quiver=d.quiver,
                relations=d.relations,
                eicategory=d.eicategory,
                modules=d.modules,
                analyses=d.analyses,
            )
        except ValidationError as exc:
            raise DocumentError(
                [Diagnostic(1, 1, f"{'.'.join(str(p) for p in e['loc'])}: {e['msg']}") for e in exc.errors()]
            ) from None

    # -- lines -------------------------------------------------------------

    def line(self, body: str, number: int, column: int) -> None:
        head, *tail = body.split(None, 1)
        rest = tail[0].strip() if tail else ""
        if head in HEADERS:
            self.header(head, rest, number, column)
            return
        handler = {
            "quiver": self.quiver_line,
            "relations": self.relation_line,
            "eicategory": self.category_line,
            "module": self.module_line,
            "analyses": self.analysis_line,
        }.get(self.block or "")
        if handler is None:
            self.error(number, column, f"statement {head!r} outside a block")
            return
        handler(body, number, column)

    def header(self, head: str, rest: str, number: int, column: int) -> None:
        d = self.draft
        if head == "field":
            self.block = None
            if d.field_name is not None:
                self.error(number, column, "field declared twice")
            try:
                d.field_name = FieldSpec.parse(rest).name
            except UnsupportedField as exc:
                self.error(number, column + len(head) + 1, str(exc))
            return
        if head == "module":
            if not _ARROW.match(rest):
                self.error(number, column + len(head) + 1, f"invalid module name {rest!r}")
                self.block = None
                return
            if any(m.name == rest for m in d.modules):
                self.error(number, column, f"module {rest} declared twice")
            d.modules.append(ModuleDecl(name=rest))
            self.spans[("module", len(d.modules) - 1)] = (number, column)
            self.block = "module"
            return
        if rest:
            self.error(number, column + len(head) + 1, f"unexpected text after {head!r}")
        if head == "quiver":
            if d.quiver is not None:
                self.error(number, column, "quiver declared twice")
            d.quiver = d.quiver or QuiverBlock()
        elif head == "eicategory":
            if d.eicategory is not None:
                self.error(number, column, "eicategory declared twice")
            d.eicategory = d.eicategory or EICategoryBlock()
            self.spans[("eicategory",)] = (number, column)
        self.block = head

    def quiver_line(self, body: str, number: int, column: int) -> None:
        q = self.draft.quiver
        match = _VERTEX.match(body)
        if match:
            v = match.group("v")
            if not _LABEL.match(v):
                self.error(number, column, f"invalid vertex label {v!r}")
            elif v in q.vertices:
                self.error(number, column, f"vertex {v} declared twice")
            else:
                q.vertices.append(v)
            return
        match = _ARROW_LINE.match(body)
        if match:
            label, s, t = match.group("label", "s", "t")
            if not _ARROW.match(label) or label in HEADERS:
                self.error(number, column, f"invalid arrow label {label!r}")
            elif not (_LABEL.match(s) and _LABEL.match(t)):
                self.error(number, column, f"invalid vertex label in arrow {label}")
            elif any(a.label == label for a in q.arrows):
                self.error(number, column, f"arrow {label} declared twice")
            else:
                q.arrows.append(ArrowDecl(label=label, source=s, target=t))
                self.spans[("arrow", label)] = (number, column)
            return
        self.error(number, column, "expected 'vertex <label>' or 'arrow <label> : <v> -> <w>'")

    def relation_line(self, body: str, number: int, column: int) -> None:
        terms: list[RelationTerm] = []
        pieces = re.split(r"([+-])", body)
        offset, sign = 0, 1
        for k, piece in enumerate(pieces):
            here = column + offset
            offset += len(piece)
            if k % 2 == 1:
                sign = -1 if piece == "-" else 1
                continue
            if not piece.strip():
                if k == 0 and len(pieces) > 1:
                    continue
                self.error(number, here, "missing term")
                return
            factors = [f.strip() for f in piece.split("*")]
            coefficient = Fraction(1)
            if _NUMBER.match(factors[0]):
                coefficient = Fraction(factors.pop(0))
            if not factors or not all(_ARROW.match(f) for f in factors):
                self.error(number, here, f"term {piece.strip()!r} is not a product of arrow labels")
                return
            terms.append(RelationTerm(coefficient=str(sign * coefficient), word=factors))
            sign = 1
        self.draft.relations.append(RelationDecl(terms=terms))
        self.spans[("relation", len(self.draft.relations) - 1)] = (number, column)

    def category_line(self, body: str, number: int, column: int) -> None:
        c = self.draft.eicategory
        match = _OBJECT.match(body)
        if match:
            x = match.group("x")
            if not _LABEL.match(x):
                self.error(number, column, f"invalid object label {x!r}")
            elif x in c.objects:
                self.error(number, column, f"object {x} declared twice")
            else:
                c.objects.append(x)
            return
        match = _IDENTITY.match(body)
        if match:
            label, x = match.group("label", "x")
            if not (_LABEL.match(label) and _LABEL.match(x)):
                self.error(number, column, f"invalid morphism label {label!r}")
                return
            c.identities.append(IdentityDecl(label=label, obj=x))
            self.spans[("identity", len(c.identities) - 1)] = (number, column)
            return
        match = _MOR.match(body)
        if match:
            label, s, t = match.group("label", "s", "t")
            if not all(_LABEL.match(x) for x in (label, s, t)):
                self.error(number, column, f"invalid label in morphism {label!r}")
                return
            c.morphisms.append(MorphismDecl(label=label, source=s, target=t))
            self.spans[("mor", len(c.morphisms) - 1)] = (number, column)
            return
        match = _COMPOSE.match(body)
        if match:
            g, f, h = match.group("g", "f", "h")
            c.compositions.append(CompositionDecl(outer=g, inner=f, result=h))
            self.spans[("compose", len(c.compositions) - 1)] = (number, column)
            return
        self.error(number, column, "expected 'object', 'identity', 'mor' or 'compose'")

    def module_line(self, body: str, number: int, column: int) -> None:
        index = len(self.draft.modules) - 1
        m = self.draft.modules[index]
        match = _DIM.match(body)
        if match:
            v, n = match.group("v"), int(match.group("n"))
            if v in m.dims:
                self.error(number, column, f"dimension at {v} given twice")
            m.dims[v] = n
            self.spans[("dim", index, v)] = (number, column)
            return
        match = _ACT.match(body)
        if match:
            label = match.group("label")
            matrix_column = column + match.start("matrix")
            try:
                raw = yaml.safe_load(match.group("matrix"))
            except yaml.YAMLError:
                self.error(number, matrix_column, "matrix is not a [[..],[..]] literal")
                return
            rows = _matrix_rows(raw)
            if rows is None:
                self.error(number, matrix_column, "matrix entries must be integers or fractions in [[..],[..]]")
                return
            if any(a.label == label for a in m.actions):
                self.error(number, column, f"action of {label} given twice")
            m.actions.append(ActionDecl(label=label, matrix=rows))
            self.spans[("act", index, len(m.actions) - 1)] = (number, column)
            return
        self.error(number, column, "expected 'dim <v> = <n>' or 'act <label> = [[..]]'")

    def analysis_line(self, body: str, number: int, column: int) -> None:
        self.draft.analyses.append(" ".join(body.split()))

    # -- cross references --------------------------------------------------

    def validate(self) -> None:
        d = self.draft
        if d.quiver is None and d.eicategory is None:
            self.error(1, 1, "document declares neither a quiver nor an eicategory")
        if d.quiver is not None and d.eicategory is not None:
            self.error(1, 1, "document declares both a quiver and an eicategory")
        if d.relations and d.quiver is None:
            self.error(*self.spans.get(("relation", 0), (1, 1)), "relations need a quiver block")
        if d.quiver is not None:
            self.validate_quiver(d.quiver)
        if d.eicategory is not None:
            self.validate_category(d.eicategory)
        for index, m in enumerate(d.modules):
            self.validate_module(index, m)

    def validate_quiver(self, q: QuiverBlock) -> None:
        vertices = set(q.vertices)
        good = True
        for a in q.arrows:
            for end in (a.source, a.target):
                if end not in vertices:
                    good = False
                    self.error(*self.spans[("arrow", a.label)], f"arrow {a.label} uses unknown vertex {end!r}")
        if not good:
            return
        quiver = quiver_of(q)
        labels = {a.label for a in q.arrows}
        for index, relation in enumerate(self.draft.relations):
            where = self.spans[("relation", index)]
            ends = set()
            for term in relation.terms:
                unknown = [f for f in term.word if f not in labels]
                if unknown:
                    self.error(*where, f"unknown arrow {unknown[0]!r}")
                    break
                path = _path_or_none(quiver, term.word)
                if path is None:
                    self.error(*where, f"arrows in {'*'.join(term.word)} do not compose")
                    break
                if path.length < 2:
                    self.error(*where, f"term {'*'.join(term.word)} has length < 2; relations must be admissible")
                    break
                ends.add((path.source, path.target))
            else:
                if len(ends) > 1:
                    self.error(*where, "relation mixes paths with different endpoints")

    def validate_category(self, c: EICategoryBlock) -> None:
        objects = set(c.objects)
        ends: dict[str, tuple[str, str]] = {}
        header = self.spans.get(("eicategory",), (1, 1))
        for index, ident in enumerate(c.identities):
            where = self.spans[("identity", index)]
            if ident.obj not in objects:
                self.error(*where, f"unknown object {ident.obj!r}")
            elif ident.label in ends:
                self.error(*where, f"morphism {ident.label} declared twice")
            else:
                ends[ident.label] = (ident.obj, ident.obj)
        for index, mor in enumerate(c.morphisms):
            where = self.spans[("mor", index)]
            bad = [x for x in (mor.source, mor.target) if x not in objects]
            if bad:
                self.error(*where, f"unknown object {bad[0]!r}")
            elif mor.label in ends:
                self.error(*where, f"morphism {mor.label} declared twice")
            else:
                ends[mor.label] = (mor.source, mor.target)
        for x in c.objects:
            count = sum(1 for i in c.identities if i.obj == x)
            if count != 1:
                self.error(*header, f"object {x} needs exactly one identity, found {count}")
        for index, comp in enumerate(c.compositions):
            where = self.spans[("compose", index)]
            unknown = [m for m in (comp.outer, comp.inner, comp.result) if m not in ends]
            if unknown:
                self.error(*where, f"unknown morphism {unknown[0]!r}")
                continue
            (fs, ft), (gs, gt), (hs, ht) = ends[comp.inner], ends[comp.outer], ends[comp.result]
            if ft != gs:
                self.error(*where, f"{comp.outer} o {comp.inner} is not composable ({comp.inner} ends at {ft}, {comp.outer} starts at {gs})")
            elif (hs, ht) != (fs, gt):
                self.error(*where, f"{comp.result} does not run {fs} -> {gt}")

    def validate_module(self, index: int, m: ModuleDecl) -> None:
        d = self.draft
        if d.quiver is not None:
            vertices = set(d.quiver.vertices)
            ends = {a.label: (a.source, a.target) for a in d.quiver.arrows}
        elif d.eicategory is not None:
            vertices = set(d.eicategory.objects)
            ends = {mor.label: (mor.source, mor.target) for mor in d.eicategory.morphisms}
        else:
            return
        for v in m.dims:
            if v not in vertices:
                self.error(*self.spans[("dim", index, v)], f"unknown vertex {v!r}")
        for k, action in enumerate(m.actions):
            where = self.spans[("act", index, k)]
            if action.label not in ends:
                self.error(*where, f"unknown arrow or morphism {action.label!r}")
                continue
            source, target = ends[action.label]
            rows, cols = m.dims.get(target, 0), m.dims.get(source, 0)
            shape = (len(action.matrix), len(action.matrix[0]) if action.matrix else 0)
            if not action.matrix and rows * cols == 0:
                continue
            if shape != (rows, cols) or any(len(r) != cols for r in action.matrix):
                self.error(*where, f"matrix for {action.label} must be {rows}x{cols}, got {shape[0]}x{shape[1]}")


def _matrix_rows(raw: Any) -> list[list[str]] | None:
    if not isinstance(raw, list) or not all(isinstance(r, list) for r in raw):
        return None
    if any(isinstance(x, (list, dict, bool, float)) or x is None for row in raw for x in row):
        return None
    try:
        return [[normalize_number(x) for x in row] for row in raw]
    except (ValueError, ZeroDivisionError):
        return None


def _path_or_none(quiver: Quiver, word: list[str]) -> QuiverPath | None:
    try:
        return path_from_word(quiver, word)
    except (DimensionMismatch, KeyError):
        return None


def parse(text: str) -> InputDocument:
    """Parse a document or raise :class:`DocumentError` listing every problem."""
    return _Parser(text).run()


def load_document(path: str | Path) -> InputDocument:
    document_path = Path(path)
    if not document_path.exists():
        raise FileNotFoundError(f"Input document not found: {document_path}")
    return parse(document_path.read_text(encoding="utf-8"))


# -- rendering ---------------------------------------------------------------


def _render_term(term: RelationTerm, first: bool) -> str:
    c = Fraction(term.coefficient)
    body = "*".join(term.word)
    if abs(c) != 1:
        body = f"{normalize_number(abs(c))}*{body}"
    if first:
        return f"-{body}" if c < 0 else body
    return f"{'-' if c < 0 else '+'} {body}"


def render_relation(relation: RelationDecl) -> str:
    return " ".join(_render_term(t, i == 0) for i, t in enumerate(relation.terms))


def _render_matrix(rows: list[list[str]]) -> str:
    return "[" + ", ".join("[" + ", ".join(row) + "]" for row in rows) + "]"


def render(document: InputDocument) -> str:
    """Normalised text of a document; ``parse(render(d)) == d``."""
    lines = [f"field {document.field}"]
    if document.quiver is not None:
        lines.append("quiver")
        lines.extend(f"  vertex {v}" for v in document.quiver.vertices)
        lines.extend(f"  arrow {a.label} : {a.source} -> {a.target}" for a in document.quiver.arrows)
    if document.relations:
        lines.append("relations")
        lines.extend(f"  {render_relation(r)}" for r in document.relations)
    c = document.eicategory
    if c is not None:
        lines.append("eicategory")
        lines.extend(f"  object {x}" for x in c.objects)
        lines.extend(f"  identity {i.label} at {i.obj}" for i in c.identities)
        lines.extend(f"  mor {m.label} : {m.source} -> {m.target}" for m in c.morphisms)
        lines.extend(f"  compose {k.outer} {k.inner} = {k.result}" for k in c.compositions)
    for m in document.modules:
        lines.append(f"module {m.name}")
        lines.extend(f"  dim {v} = {n}" for v, n in m.dims.items())
        lines.extend(f"  act {a.label} = {_render_matrix(a.matrix)}" for a in m.actions)
    if document.analyses:
        lines.append("analyses")
        lines.extend(f"  {cmd}" for cmd in document.analyses)
    return "\n".join(lines) + "\n"


# -- interpretation ----------------------------------------------------------


def with_field(document: InputDocument, field_name: str | None) -> InputDocument:
    if not field_name:
        return document
    return document.model_copy(update={"field": FieldSpec.parse(field_name).name})


def quiver_of(block: QuiverBlock) -> Quiver:
    return Quiver(tuple(block.vertices), tuple(Arrow(a.label, a.source, a.target) for a in block.arrows))


def presentation_of(document: InputDocument) -> PathAlgebraPresentation:
    quiver = quiver_of(document.quiver)
    field_ = FieldSpec.parse(document.field)
    relations = tuple(
        Relation(tuple((field_.coerce(t.coefficient), path_from_word(quiver, t.word)) for t in r.terms))
        for r in document.relations
    )
    return PathAlgebraPresentation(quiver, relations, field_)


def category_of(document: InputDocument) -> EICategory:
    block = document.eicategory
    morphisms = [Morphism(i.label, i.obj, i.obj) for i in block.identities]
    morphisms.extend(Morphism(m.label, m.source, m.target) for m in block.morphisms)
    return EICategory(
        tuple(block.objects),
        tuple(morphisms),
        {(k.outer, k.inner): k.result for k in block.compositions},
        {i.obj: i.label for i in block.identities},
    )


def build_algebra(document: InputDocument, name: str = "A", config: Settings | None = None) -> Algebra:
    config = config or default_settings
    if document.quiver is not None:
        return build_path_algebra(presentation_of(document), degree_cap=config.degree_cap, name=name)
    return build_ei_category_algebra(category_of(document), FieldSpec.parse(document.field), name=name)


def build_module(document: InputDocument, a: Algebra, name: str) -> FModule:
    decl = document.module(name)
    if decl is None:
        raise KeyError(f"no module named {name!r}")
    maps = {action.label: action.matrix for action in decl.actions}
    return module_from_representation(a, decl.dims, maps, name=name)
