"""Finite-dimensional algebras given by structure constants.

``mult[i, j]`` holds the coordinates of ``b_i * b_j``. Left modules over an
algebra built from a quiver are representations: ``e_v M`` is the space at
``v`` and an arrow ``a: i -> j`` maps ``e_i M`` to ``e_j M``.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Iterable, Mapping, Sequence

import networkx as nx
import numpy as np

from stratakit.errors import (
    DimensionMismatch,
    NonAdmissible,
    NotAnIdeal,
    NotAssociative,
    NotAStratification,
    NotEI,
    NotIdempotent,
    NotParallel,
    NotSkeletal,
)
from stratakit.linalg import EchelonBuilder, FieldSpec, Matrix, Raw, Subspace, Vector, format_raw, rref
from stratakit.quiver import Path, Quiver, enumerate_paths, trivial_path

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class Algebra:
    field: FieldSpec
    basis: tuple[str, ...]
    mult: np.ndarray
    unit: Vector
    vertex_idempotents: tuple[Vector, ...]
    vertex_labels: tuple[str, ...]
    name: str = ""
    origin: Any = None
    memo: dict = field(default_factory=dict, init=False, repr=False)

    @property
    def dim(self) -> int:
        return len(self.basis)

    @property
    def left_stack(self) -> np.ndarray:
        """``left_stack[i]`` is the matrix of left multiplication by ``b_i``."""
        if "left_stack" not in self.memo:
            self.memo["left_stack"] = np.ascontiguousarray(self.mult.transpose(0, 2, 1))
        return self.memo["left_stack"]

    def index(self, label: str) -> int:
        try:
            return self.basis.index(label)
        except ValueError:
            raise KeyError(f"{label!r} is not a basis element of {self.name or 'the algebra'}") from None

    def basis_vector(self, i: int) -> Vector:
        return self.field.unit_vector(self.dim, i)

    def element(self, label: str) -> Vector:
        return self.basis_vector(self.index(label))

    def vertex(self, label: str) -> Vector:
        return self.vertex_idempotents[self.vertex_labels.index(label)].copy()

    def zero(self) -> Vector:
        return self.field.zeros(self.dim)

    def combine(self, coefficients: Vector, stack: np.ndarray) -> np.ndarray:
        """``sum_i coefficients[i] * stack[i]`` touching only nonzero terms."""
        out = self.field.zeros(stack.shape[1:])
        for i in np.nonzero(coefficients)[0]:
            out = out + coefficients[i] * stack[i]
        return self.field.normalize(out)

    def left_matrix(self, x: Vector) -> np.ndarray:
        return self.combine(x, self.left_stack)

    def right_matrix(self, y: Vector) -> np.ndarray:
        """Columns are ``b_i * y``."""
        return self.combine(y, self.mult.transpose(1, 2, 0))

    def multiply(self, x: Vector, y: Vector) -> Vector:
        return self.field.matmul(self.left_matrix(x), y)

    def is_idempotent(self, x: Vector) -> bool:
        return bool(np.all(self.multiply(x, x) == x))

    def corner_space(self, e: Vector, f: Vector) -> Subspace:
        """The subspace ``e A f``."""
        m = self.field.matmul(self.left_matrix(e), self.right_matrix(f))
        return Subspace.span(self.field, self.dim, m.T.copy())

    def format_element(self, x: Vector) -> str:
        terms = []
        for i in np.nonzero(x)[0]:
            c = self.field.coerce(x[i])
            terms.append(self.basis[i] if c == 1 else f"{format_raw(c)}*{self.basis[i]}")
        return " + ".join(terms) if terms else "0"


def _sparse_table(mult: np.ndarray) -> list[list[list[tuple[int, Raw]]]]:
    n = mult.shape[0]
    table: list[list[list[tuple[int, Raw]]]] = [[[] for _ in range(n)] for _ in range(n)]
    for i, j, k in zip(*np.nonzero(mult)):
        table[i][j].append((int(k), mult[i, j, k]))
    return table


def check_associative(field_: FieldSpec, mult: np.ndarray) -> tuple[int, int, int] | None:
    """First basis triple violating associativity, or None."""
    n = mult.shape[0]
    table = _sparse_table(mult)
    for i in range(n):
        for j in range(n):
            for k in range(n):
                left: dict[int, Raw] = {}
                for l, c in table[i][j]:
                    for m, d in table[l][k]:
                        left[m] = left.get(m, 0) + c * d
                right: dict[int, Raw] = {}
                for l, c in table[j][k]:
                    for m, d in table[i][l]:
                        right[m] = right.get(m, 0) + c * d
                if _reduced(field_, left) != _reduced(field_, right):
                    return (i, j, k)
    return None


def _reduced(field_: FieldSpec, terms: dict[int, Raw]) -> dict[int, Raw]:
    out = {}
    for key, value in terms.items():
        value = field_.coerce(value)
        if value != 0:
            out[key] = value
    return out


def make_algebra(
    field_: FieldSpec,
    basis: Sequence[str],
    mult: np.ndarray,
    unit: Vector,
    vertex_idempotents: Sequence[Vector],
    vertex_labels: Sequence[str],
    name: str = "",
    origin: Any = None,
    verify: bool = True,
) -> Algebra:
    n = len(basis)
    if mult.shape != (n, n, n):
        raise DimensionMismatch(f"structure constants of shape {mult.shape} for {n} basis elements")
    if len(vertex_idempotents) != len(vertex_labels):
        raise DimensionMismatch("one label per vertex idempotent")
    mult = field_.normalize(np.array(mult, dtype=field_.dtype, copy=True))
    mult.setflags(write=False)
    algebra = Algebra(
        field_,
        tuple(basis),
        mult,
        np.array(unit, dtype=field_.dtype),
        tuple(np.array(e, dtype=field_.dtype) for e in vertex_idempotents),
        tuple(vertex_labels),
        name,
        origin,
    )
    if verify:
        verify_algebra(algebra)
    return algebra


def verify_algebra(a: Algebra) -> None:
    bad = check_associative(a.field, a.mult)
    if bad is not None:
        i, j, k = bad
        raise NotAssociative(f"({a.basis[i]}*{a.basis[j]})*{a.basis[k]} != {a.basis[i]}*({a.basis[j]}*{a.basis[k]})")
    identity = a.field.eye(a.dim)
    if not (np.all(a.left_matrix(a.unit) == identity) and np.all(a.right_matrix(a.unit) == identity)):
        raise NotAssociative("unit is not a two-sided identity")
    total = a.zero()
    for label, e in zip(a.vertex_labels, a.vertex_idempotents):
        if not a.is_idempotent(e):
            raise NotIdempotent(f"vertex idempotent {label} is not idempotent")
        for other_label, f in zip(a.vertex_labels, a.vertex_idempotents):
            if other_label != label and np.any(a.multiply(e, f)):
                raise NotIdempotent(f"vertex idempotents {label} and {other_label} are not orthogonal")
        total = a.field.normalize(total + e)
    if not np.all(total == a.unit):
        raise NotIdempotent("vertex idempotents do not sum to the unit")


# -- path algebras -----------------------------------------------------------


@dataclass(frozen=True)
class Relation:
    terms: tuple[tuple[Raw, Path], ...]

    @property
    def source(self) -> str:
        return self.terms[0][1].source

    @property
    def target(self) -> str:
        return self.terms[0][1].target

    @property
    def max_length(self) -> int:
        return max(p.length for _, p in self.terms)

    def __str__(self) -> str:
        parts: list[str] = []
        for c, p in self.terms:
            c = Fraction(c)
            body = str(p) if abs(c) == 1 else f"{format_raw(abs(c))}*{p}"
            if not parts:
                parts.append(f"-{body}" if c < 0 else body)
            else:
                parts.append(f"{'-' if c < 0 else '+'} {body}")
        return " ".join(parts)


@dataclass(frozen=True)
class PathAlgebraPresentation:
    quiver: Quiver
    relations: tuple[Relation, ...]
    field: FieldSpec

    def __post_init__(self) -> None:
        for relation in self.relations:
            if not relation.terms:
                raise NonAdmissible("empty relation")
            ends = {(p.source, p.target) for _, p in relation.terms}
            if len(ends) != 1:
                raise NotParallel(f"relation {relation} mixes paths with different endpoints")
            if min(p.length for _, p in relation.terms) < 2:
                raise NonAdmissible(f"relation {relation} has a term of length < 2")


@dataclass(frozen=True)
class PathOrigin:
    presentation: PathAlgebraPresentation
    paths: tuple[Path, ...]
    nilpotency_degree: int
    ideal: Subspace
    columns: Mapping[Path, int]


def _path_vector(columns: Mapping[Path, int], size: int, field_: FieldSpec, terms: Mapping[Path, Raw]) -> Vector:
    v = field_.zeros(size)
    for path, c in terms.items():
        if path in columns:
            v[columns[path]] = field_.coerce(c)
    return v


def _relation_ideal(
    quiver: Quiver, relations: Sequence[Relation], field_: FieldSpec, degree: int
) -> tuple[list[Path], dict[Path, int], EchelonBuilder]:
    paths = enumerate_paths(quiver, degree)
    descending = list(reversed(paths))
    columns = {p: i for i, p in enumerate(descending)}
    builder = EchelonBuilder(field_, len(paths))
    pending: list[dict[Path, Raw]] = [
        {p: field_.coerce(c) for c, p in r.terms if p.length <= degree} for r in relations
    ]
    while pending:
        terms = pending.pop()
        terms = {p: c for p, c in terms.items() if p.length <= degree}
        if not terms or not builder.add(_path_vector(columns, len(paths), field_, terms)):
            continue
        for arrow in quiver.arrows:
            single = Path(arrow.source, arrow.target, (arrow.label,))
            left: dict[Path, Raw] = {}
            right: dict[Path, Raw] = {}
            for p, c in terms.items():
                composite = single.after(p)
                if composite is not None:
                    left[composite] = left.get(composite, 0) + c
                composite = p.after(single)
                if composite is not None:
                    right[composite] = right.get(composite, 0) + c
            pending.extend(t for t in (left, right) if t)
    return paths, columns, builder


def build_path_algebra(
    p: PathAlgebraPresentation, degree_cap: int | None = None, name: str = ""
) -> Algebra:
    """kQ/I with basis the normal-form paths; the largest path of each relation is rewritten."""
    quiver, field_ = p.quiver, p.field
    longest = max((r.max_length for r in p.relations), default=0)
    cap = degree_cap or 2 * longest * len(quiver.vertices) + 8
    for degree in range(1, cap + 1):
        paths, columns, builder = _relation_ideal(quiver, p.relations, field_, degree)
        top = [q for q in paths if q.length == degree]
        if all(builder.contains(field_.unit_vector(len(paths), columns[q])) for q in top):
            break
    else:
        raise NonAdmissible(f"surviving paths did not stabilise below degree {cap}")

    ideal = builder.subspace()
    survivors = [paths[len(paths) - 1 - c] for c in reversed(ideal.complement_indices())]
    position = {q: i for i, q in enumerate(survivors)}
    n = len(survivors)
    mult = field_.zeros((n, n, n))
    for i, left in enumerate(survivors):
        for j, right in enumerate(survivors):
            composite = left.after(right)
            if composite is None or composite.length >= degree:
                continue
            if composite in position:
                mult[i, j, position[composite]] = field_.one
                continue
            reduced = ideal.reduce(field_.unit_vector(len(paths), columns[composite]))
            for c in np.nonzero(reduced)[0]:
                mult[i, j, position[paths[len(paths) - 1 - int(c)]]] = reduced[c]
    idempotents = [field_.unit_vector(n, position[trivial_path(v)]) for v in quiver.vertices]
    unit = field_.normalize(sum(idempotents, field_.zeros(n)))
    origin = PathOrigin(p, tuple(survivors), degree, ideal, columns)
    algebra = make_algebra(
        field_, [str(q) for q in survivors], mult, unit, idempotents, quiver.vertices, name=name, origin=origin
    )
    logger.info(
        "path_algebra_built",
        extra={"algebra": name, "field": field_.name, "degree": degree, "status": f"dim={n}"},
    )
    return algebra


def element_of_path(a: Algebra, path: Path) -> Vector:
    origin = a.origin
    if not isinstance(origin, PathOrigin):
        raise DimensionMismatch("algebra was not built from a quiver")
    if path.length >= origin.nilpotency_degree:
        return a.zero()
    size = len(origin.columns)
    reduced = origin.ideal.reduce(a.field.unit_vector(size, origin.columns[path]))
    out = a.zero()
    position = {q: i for i, q in enumerate(origin.paths)}
    lookup = {c: q for q, c in origin.columns.items()}
    for c in np.nonzero(reduced)[0]:
        out[position[lookup[int(c)]]] = reduced[c]
    return out


# -- EI categories -----------------------------------------------------------


@dataclass(frozen=True)
class Morphism:
    label: str
    source: str
    target: str


@dataclass(frozen=True, eq=False)
class EICategory:
    objects: tuple[str, ...]
    morphisms: tuple[Morphism, ...]
    composition: Mapping[tuple[str, str], str]
    identities: Mapping[str, str]

    def morphism(self, label: str) -> Morphism:
        for m in self.morphisms:
            if m.label == label:
                return m
        raise KeyError(label)

    def compose(self, g: str, f: str) -> str | None:
        """``g o f`` or None when ``f`` does not end where ``g`` starts."""
        mf, mg = self.morphism(f), self.morphism(g)
        if mf.target != mg.source:
            return None
        if f == self.identities[mf.target]:
            return g
        if g == self.identities[mg.source]:
            return f
        return self.composition.get((g, f))

    def hom(self, x: str, y: str) -> list[str]:
        return [m.label for m in self.morphisms if m.source == x and m.target == y]

    def automorphisms(self, x: str) -> list[str]:
        return self.hom(x, x)

    def stabilizer_order(self, label: str) -> int:
        """Order of ``{t in Aut(target) : t o alpha = alpha}``."""
        alpha = self.morphism(label)
        return sum(1 for t in self.automorphisms(alpha.target) if self.compose(t, label) == label)

    def validate(self) -> None:
        labels = [m.label for m in self.morphisms]
        if len(set(labels)) != len(labels):
            raise DimensionMismatch("morphism labels must be unique")
        for x in self.objects:
            ident = self.identities.get(x)
            if ident is None:
                raise DimensionMismatch(f"object {x} has no identity")
            m = self.morphism(ident)
            if m.source != x or m.target != x:
                raise DimensionMismatch(f"identity {ident} is not an endomorphism of {x}")
        for (g, f), h in self.composition.items():
            mg, mf, mh = self.morphism(g), self.morphism(f), self.morphism(h)
            if mf.target != mg.source or mh.source != mf.source or mh.target != mg.target:
                raise DimensionMismatch(f"composition {g} o {f} = {h} has mismatched endpoints")
        for g in self.morphisms:
            for f in self.morphisms:
                if f.target == g.source and self.compose(g.label, f.label) is None:
                    raise DimensionMismatch(f"composition {g.label} o {f.label} is not defined")
        for h in self.morphisms:
            for g in self.morphisms:
                for f in self.morphisms:
                    if f.target != g.source or g.target != h.source:
                        continue
                    if self.compose(h.label, self.compose(g.label, f.label)) != self.compose(
                        self.compose(h.label, g.label), f.label
                    ):
                        raise NotAssociative(f"({h.label} o {g.label}) o {f.label} differs")
        for x in self.objects:
            ident = self.identities[x]
            group = self.automorphisms(x)
            for f in group:
                if not any(
                    self.compose(g, f) == ident and self.compose(f, g) == ident for g in group
                ):
                    raise NotEI(f"endomorphism {f} of {x} is not invertible")
        for x in self.objects:
            for y in self.objects:
                if x == y:
                    continue
                for f in self.hom(x, y):
                    for g in self.hom(y, x):
                        if self.compose(g, f) == self.identities[x]:
                            raise NotSkeletal(f"objects {x} and {y} are isomorphic via {f}")

    def object_order(self) -> list[str]:
        """Objects ordered so no non-isomorphism runs backwards."""
        graph = nx.DiGraph()
        graph.add_nodes_from(self.objects)
        graph.add_edges_from((m.source, m.target) for m in self.morphisms if m.source != m.target)
        position = {x: i for i, x in enumerate(self.objects)}
        return list(nx.lexicographical_topological_sort(graph, key=position.__getitem__))


@dataclass(frozen=True)
class EIOrigin:
    category: EICategory


def build_ei_category_algebra(c: EICategory, field_: FieldSpec, name: str = "") -> Algebra:
    c.validate()
    order = c.object_order()
    basis: list[str] = []
    for x in order:
        basis.append(c.identities[x])
        basis.extend(m.label for m in c.morphisms if m.source == x and m.label != c.identities[x])
    position = {label: i for i, label in enumerate(basis)}
    n = len(basis)
    mult = field_.zeros((n, n, n))
    for g in basis:
        for f in basis:
            h = c.compose(g, f)
            if h is not None:
                mult[position[g], position[f], position[h]] = field_.one
    idempotents = [field_.unit_vector(n, position[c.identities[x]]) for x in order]
    unit = field_.normalize(sum(idempotents, field_.zeros(n)))
    return make_algebra(field_, basis, mult, unit, idempotents, order, name=name, origin=EIOrigin(c))


# -- derived algebras --------------------------------------------------------


@dataclass(frozen=True)
class CornerOrigin:
    parent: Algebra
    idempotent: Vector
    space: Subspace


@dataclass(frozen=True, eq=False)
class CornerAlgebra:
    parent: Algebra
    idempotent: Vector
    algebra: Algebra
    space: Subspace

    def embed(self, coords: Vector) -> Vector:
        return self.parent.field.matmul(coords, self.space.basis)

    def project(self, x: Vector) -> Vector:
        return self.space.coordinates(x)


def _unit_rows(space: Subspace) -> bool:
    return all(int(np.count_nonzero(row)) == 1 for row in space.basis)


def corner(a: Algebra, e: Vector, label: str = "e") -> CornerAlgebra:
    if not a.is_idempotent(e):
        raise NotIdempotent(f"{a.format_element(e)} is not idempotent")
    field_ = a.field
    space = a.corner_space(e, e)
    m = space.dim
    pivots = list(space.pivots)
    if _unit_rows(space):
        labels = [a.basis[p] for p in pivots]
    else:
        labels = [f"{label}[{k}]" for k in range(m)]
    mult = field_.zeros((m, m, m))
    transposed = space.basis.T.copy()
    for i in range(m):
        products = field_.matmul(a.left_matrix(space.basis[i]), transposed)
        mult[i] = products[pivots, :].T
    unit = space.coordinates(e)
    support = []
    for v_label, ev in zip(a.vertex_labels, a.vertex_idempotents):
        product = a.multiply(e, ev)
        if np.any(product):
            support.append((v_label, ev, product))
    parts = [ev for _, ev, _ in support]
    if all(np.all(product == ev) for _, ev, product in support) and np.all(
        field_.normalize(sum(parts, a.zero())) == e
    ):
        idempotents = [space.coordinates(ev) for ev in parts]
        vertex_labels = [v for v, _, _ in support]
    else:
        idempotents, vertex_labels = [unit], [label]
    inner = make_algebra(
        field_,
        labels,
        mult,
        unit,
        idempotents,
        vertex_labels,
        name=f"{a.name}[{label}]" if a.name else label,
        origin=CornerOrigin(a, e, space),
        verify=False,
    )
    return CornerAlgebra(a, e, inner, space)


@dataclass(frozen=True)
class OppositeOrigin:
    parent: Algebra


def opposite(a: Algebra, verify: bool = True) -> Algebra:
    return make_algebra(
        a.field,
        a.basis,
        a.mult.transpose(1, 0, 2),
        a.unit,
        a.vertex_idempotents,
        a.vertex_labels,
        name=f"{a.name}^op" if a.name else "op",
        origin=OppositeOrigin(a),
        verify=verify,
    )


@dataclass(frozen=True)
class QuotientOrigin:
    parent: Algebra
    ideal: Subspace


@dataclass(frozen=True, eq=False)
class QuotientAlgebra:
    parent: Algebra
    ideal: Subspace
    algebra: Algebra

    def lift(self, coords: Vector) -> Vector:
        out = self.parent.zero()
        out[self.ideal.complement_indices()] = coords
        return out

    def project(self, x: Vector) -> Vector:
        return self.ideal.project_to_quotient(x)


def _span_columns(field_: FieldSpec, ambient: int, blocks: Iterable[np.ndarray]) -> Subspace:
    rows = [b.T for b in blocks if b.size]
    if not rows:
        return Subspace.zero(field_, ambient)
    return Subspace.span(field_, ambient, np.vstack(rows))


def left_ideal(a: Algebra, x: Vector) -> Subspace:
    """``A x``."""
    return _span_columns(a.field, a.dim, [a.right_matrix(x)])


def right_ideal(a: Algebra, x: Vector) -> Subspace:
    """``x A``."""
    return _span_columns(a.field, a.dim, [a.left_matrix(x)])


def two_sided_ideal(a: Algebra, gens: Iterable[Vector]) -> Subspace:
    left = _span_columns(a.field, a.dim, [a.right_matrix(g) for g in gens])
    return _span_columns(a.field, a.dim, [a.left_matrix(x) for x in left.basis])


def product_space(a: Algebra, first: Subspace, second: Subspace) -> Subspace:
    """Span of all products ``u v``."""
    if first.dim == 0 or second.dim == 0:
        return Subspace.zero(a.field, a.dim)
    transposed = second.basis.T.copy()
    return _span_columns(a.field, a.dim, [a.field.matmul(a.left_matrix(u), transposed) for u in first.basis])


def is_two_sided_ideal(a: Algebra, space: Subspace) -> bool:
    whole = Subspace.whole(a.field, a.dim)
    return product_space(a, whole, space).is_subspace_of(space) and product_space(
        a, space, whole
    ).is_subspace_of(space)


def quotient_algebra(a: Algebra, ideal: Subspace, name: str = "") -> QuotientAlgebra:
    if not is_two_sided_ideal(a, ideal):
        raise NotAnIdeal("subspace is not a two-sided ideal")
    field_ = a.field
    keep = ideal.complement_indices()
    m = len(keep)
    mult = field_.zeros((m, m, m))
    for i, bi in enumerate(keep):
        for j, bj in enumerate(keep):
            mult[i, j] = ideal.project_to_quotient(a.mult[bi, bj])
    idempotents, labels = [], []
    for label, e in zip(a.vertex_labels, a.vertex_idempotents):
        image = ideal.project_to_quotient(e)
        if np.any(image):
            idempotents.append(image)
            labels.append(label)
    inner = make_algebra(
        field_,
        [a.basis[i] for i in keep],
        mult,
        ideal.project_to_quotient(a.unit),
        idempotents,
        labels,
        name=name or (f"{a.name}/J" if a.name else "A/J"),
        origin=QuotientOrigin(a, ideal),
        verify=False,
    )
    return QuotientAlgebra(a, ideal, inner)


def peirce_dimensions(a: Algebra, es: Sequence[Vector]) -> list[list[int]]:
    """``result[i][j] = dim e_i A e_j``."""
    return [[a.corner_space(e, f).dim for f in es] for e in es]


def generators(a: Algebra) -> list[Vector]:
    """Vertex idempotents plus basis elements that generate ``a`` as an algebra."""
    if "generators" in a.memo:
        return a.memo["generators"]
    field_ = a.field
    chosen: list[Vector] = list(a.vertex_idempotents)
    extra: list[Vector] = []
    closure = EchelonBuilder(field_, a.dim)
    for v in [a.unit, *chosen]:
        closure.add(v)
    members: list[Vector] = [a.unit, *chosen]

    def grow(new_generator: Vector) -> None:
        frontier = [new_generator]
        for m in list(members):
            frontier.append(a.multiply(m, new_generator))
            frontier.append(a.multiply(new_generator, m))
        while frontier:
            v = frontier.pop()
            if closure.add(v):
                members.append(v)
                for g in chosen + extra:
                    frontier.append(a.multiply(v, g))
                    frontier.append(a.multiply(g, v))

    for i in range(a.dim):
        if len(closure) == a.dim:
            break
        b = a.basis_vector(i)
        if closure.contains(b):
            continue
        extra.append(b)
        grow(b)
    result = chosen + extra
    a.memo["generators"] = result
    return result


# -- stratification data -----------------------------------------------------


@dataclass(frozen=True)
class StratificationFailure:
    kind: str
    pair: tuple[int, int] | None
    witness: str | None
    message: str


def stratification_failure(a: Algebra, es: Sequence[Vector]) -> StratificationFailure | None:
    """The first violated condition of a directed stratification, or None."""
    field_ = a.field
    for i, e in enumerate(es):
        for j, f in enumerate(es):
            expected = e if i == j else a.zero()
            if not np.all(a.multiply(e, f) == expected):
                return StratificationFailure(
                    "orthogonality", (i, j), None, f"e_{i + 1} e_{j + 1} != delta e_{i + 1}"
                )
    if not np.all(field_.normalize(sum(es, a.zero())) == a.unit):
        return StratificationFailure("completeness", None, None, "idempotents do not sum to 1")
    for i, e in enumerate(es):
        left = a.left_matrix(e)
        for j in range(i + 1, len(es)):
            block = field_.matmul(left, a.right_matrix(es[j]))
            columns = np.nonzero(np.any(block != 0, axis=0))[0]
            if columns.size:
                witness = block[:, int(columns[0])]
                return StratificationFailure(
                    "directedness",
                    (i, j),
                    a.format_element(witness),
                    f"e_{i + 1} A e_{j + 1} contains {a.format_element(witness)}",
                )
    return None


@dataclass(frozen=True, eq=False)
class AssociatedCategory:
    algebra: Algebra
    objects: tuple[str, ...]
    idempotents: tuple[Vector, ...]
    hom_basis: Mapping[tuple[int, int], tuple[Vector, ...]]
    composition: Mapping[tuple[int, int, int], np.ndarray]

    def hom_nonzero(self, i: int, j: int) -> bool:
        return bool(self.hom_basis[(i, j)])

    def hom_labels(self, i: int, j: int) -> list[str]:
        return [self.algebra.format_element(v) for v in self.hom_basis[(i, j)]]


def _hom_space_basis(a: Algebra, space: Subspace) -> tuple[Vector, ...]:
    picked = [
        a.basis_vector(k)
        for k in range(a.dim)
        if space.contains(a.basis_vector(k))
    ]
    if len(picked) == space.dim:
        return tuple(picked)
    return tuple(space.vectors)


def associated_category(
    a: Algebra, es: Sequence[Vector], labels: Sequence[str] | None = None
) -> AssociatedCategory:
    failure = stratification_failure(a, es)
    if failure is not None:
        raise NotAStratification(failure.message, failure)
    n = len(es)
    objects = tuple(labels) if labels else tuple(f"x{i + 1}" for i in range(n))
    hom: dict[tuple[int, int], tuple[Vector, ...]] = {}
    spaces: dict[tuple[int, int], Subspace] = {}
    for i in range(n):
        for j in range(n):
            spaces[(i, j)] = a.corner_space(es[j], es[i])
            hom[(i, j)] = _hom_space_basis(a, spaces[(i, j)])
    composition: dict[tuple[int, int, int], np.ndarray] = {}
    for i in range(n):
        for j in range(n):
            for k in range(n):
                first, second, target = hom[(i, j)], hom[(j, k)], hom[(i, k)]
                table = a.field.zeros((len(second), len(first), len(target)))
                if target:
                    basis_matrix = Matrix(a.field, np.stack(target, axis=1))
                    for s, g in enumerate(second):
                        for t, f in enumerate(first):
                            table[s, t] = _coordinates(basis_matrix, a.multiply(g, f))
                composition[(i, j, k)] = table
    return AssociatedCategory(a, objects, tuple(es), hom, composition)


def _coordinates(basis_matrix: Matrix, x: Vector) -> Vector:
    reduced, pivots = rref(Matrix(basis_matrix.field, np.hstack([basis_matrix.data, x.reshape(-1, 1)])))
    if basis_matrix.cols in pivots:
        raise DimensionMismatch("element outside the hom space")
    out = basis_matrix.field.zeros(basis_matrix.cols)
    for row, p in enumerate(pivots):
        out[p] = reduced.data[row, basis_matrix.cols]
    return out
