"""Finite-dimensional left modules, module maps, tops, covers and Hom spaces.

A module stores one action matrix per basis element of its algebra, so
``action[i]`` is the matrix of ``b_i`` acting on the module.
"""

from __future__ import annotations

import itertools
import logging
import random
from dataclasses import dataclass, field
from typing import Iterator, Mapping, Sequence, Union

import numpy as np

from stratakit.algebra import (
    Algebra,
    CornerAlgebra,
    EIOrigin,
    PathOrigin,
    QuotientAlgebra,
    corner,
    generators,
    left_ideal,
    opposite,
    right_ideal,
)
from stratakit.errors import DimensionMismatch, InvalidModule, InvariantViolation, NotIdempotent
from stratakit.idempotents import PrimitiveIdempotent, class_representatives
from stratakit.linalg import EchelonBuilder, Matrix, NoSolution, Subspace, Vector, kernel_basis, solve
from stratakit.metrics import ISO_SEARCHES
from stratakit.radical import radical
from stratakit.settings import Settings
from stratakit.settings import settings as default_settings

logger = logging.getLogger(__name__)

_SUM_BUDGET = 2000


@dataclass(frozen=True, eq=False)
class FModule:
    algebra: Algebra
    dim: int
    action: np.ndarray
    name: str = ""
    memo: dict = field(default_factory=dict, init=False, repr=False)

    def act(self, x: Vector) -> np.ndarray:
        """Matrix by which the algebra element ``x`` acts."""
        return self.algebra.combine(x, self.action)

    def orbit(self, v: Vector) -> np.ndarray:
        """Row ``i`` is ``b_i . v``."""
        if self.dim == 0:
            return self.algebra.field.zeros((self.algebra.dim, 0))
        return self.algebra.field.normalize(self.action @ v)

    def __repr__(self) -> str:
        return f"FModule({self.name or '?'}, dim={self.dim}, over={self.algebra.name or '?'})"


def make_module(a: Algebra, action: np.ndarray, name: str = "", verify: bool = False) -> FModule:
    if action.ndim != 3 or action.shape[0] != a.dim or action.shape[1] != action.shape[2]:
        raise InvalidModule(f"action of shape {action.shape} for an algebra of dimension {a.dim}")
    action = a.field.normalize(np.array(action, dtype=a.field.dtype, copy=True))
    action.setflags(write=False)
    module = FModule(a, action.shape[1], action, name)
    if verify:
        verify_module(module)
    return module


def verify_module(m: FModule) -> None:
    a, field_ = m.algebra, m.algebra.field
    if not np.all(m.act(a.unit) == field_.eye(m.dim)):
        raise InvalidModule(f"unit does not act as the identity on {m.name or 'module'}")
    for i in range(a.dim):
        for j in range(a.dim):
            if not np.all(field_.matmul(m.action[i], m.action[j]) == m.act(a.mult[i, j])):
                raise InvalidModule(
                    f"{a.basis[i]} acting after {a.basis[j]} differs from {a.basis[i]}*{a.basis[j]} on {m.name or 'module'}"
                )


@dataclass(frozen=True, eq=False)
class ModuleMap:
    source: FModule
    target: FModule
    matrix: np.ndarray

    def __post_init__(self) -> None:
        if self.source.algebra is not self.target.algebra:
            raise DimensionMismatch("module map between modules over different algebras")
        if self.matrix.shape != (self.target.dim, self.source.dim):
            raise DimensionMismatch(
                f"map matrix of shape {self.matrix.shape} for {self.source.dim} -> {self.target.dim}"
            )

    @property
    def field(self):
        return self.source.algebra.field

    def apply(self, v: Vector) -> Vector:
        return self.field.matmul(self.matrix, v)

    def compose(self, first: "ModuleMap") -> "ModuleMap":
        """``self o first``."""
        if first.target is not self.source:
            raise DimensionMismatch("maps do not compose")
        return ModuleMap(first.source, self.target, self.field.matmul(self.matrix, first.matrix))

    def is_homomorphism(self) -> bool:
        for g in generators(self.source.algebra):
            lhs = self.field.matmul(self.matrix, self.source.act(g))
            rhs = self.field.matmul(self.target.act(g), self.matrix)
            if not np.all(lhs == rhs):
                return False
        return True

    def rank(self) -> int:
        return Matrix(self.field, self.matrix).rank()

    def kernel(self) -> Subspace:
        return Subspace.span(self.field, self.source.dim, kernel_basis(Matrix(self.field, self.matrix)))

    def image(self) -> Subspace:
        return Subspace.span(self.field, self.target.dim, self.matrix.T.copy())

    def is_injective(self) -> bool:
        return self.rank() == self.source.dim

    def is_surjective(self) -> bool:
        return self.rank() == self.target.dim

    def is_isomorphism(self) -> bool:
        return self.source.dim == self.target.dim and self.is_injective()

    def inverse(self) -> "ModuleMap":
        inverse = Matrix(self.field, self.matrix).inverse()
        return ModuleMap(self.target, self.source, np.array(inverse.data, copy=True))


def identity_map(m: FModule) -> ModuleMap:
    return ModuleMap(m, m, m.algebra.field.eye(m.dim))


def zero_module(a: Algebra) -> FModule:
    return make_module(a, a.field.zeros((a.dim, 0, 0)), name="0")


# -- constructions -----------------------------------------------------------


def regular_module(a: Algebra) -> FModule:
    if "regular_module" not in a.memo:
        a.memo["regular_module"] = make_module(a, a.left_stack, name=f"{a.name or 'A'}")
    return a.memo["regular_module"]


def submodule(m: FModule, space: Subspace, name: str = "") -> tuple[FModule, ModuleMap]:
    """The submodule on ``space`` and its inclusion into ``m``."""
    a, field_ = m.algebra, m.algebra.field
    if space.ambient != m.dim:
        raise DimensionMismatch(f"subspace of ambient dimension {space.ambient} in a module of dimension {m.dim}")
    basis_t = space.basis.T.copy()
    pivots = list(space.pivots)
    action = field_.zeros((a.dim, space.dim, space.dim))
    for i in range(a.dim):
        images = field_.matmul(m.action[i], basis_t)
        if space.dim and np.any(space.reduce_rows(images.T.copy())):
            raise InvalidModule(f"subspace is not closed under {a.basis[i]}")
        action[i] = images[pivots, :]
    sub = make_module(a, action, name=name)
    return sub, ModuleMap(sub, m, basis_t)


def quotient_module(m: FModule, space: Subspace, name: str = "") -> tuple[FModule, ModuleMap]:
    """``m / space`` with coordinates on the non-pivot positions, and the projection."""
    a, field_ = m.algebra, m.algebra.field
    comp = space.complement_indices()
    for i in range(a.dim):
        if space.dim and np.any(space.reduce_rows(field_.matmul(m.action[i], space.basis.T.copy()).T.copy())):
            raise InvalidModule(f"subspace is not closed under {a.basis[i]}")
    projection = space.reduce_rows(field_.eye(m.dim))[:, comp].T.copy()
    action = field_.zeros((a.dim, len(comp), len(comp)))
    for i in range(a.dim):
        action[i] = field_.matmul(projection, m.action[i][:, comp])
    quotient = make_module(a, action, name=name)
    return quotient, ModuleMap(m, quotient, projection)


@dataclass(frozen=True, eq=False)
class DirectSum:
    module: FModule
    injections: tuple[ModuleMap, ...]
    projections: tuple[ModuleMap, ...]


def direct_sum(modules: Sequence[FModule], name: str = "") -> DirectSum:
    if not modules:
        raise DimensionMismatch("direct sum of no modules")
    a, field_ = modules[0].algebra, modules[0].algebra.field
    total = sum(m.dim for m in modules)
    action = field_.zeros((a.dim, total, total))
    offset = 0
    offsets = []
    for m in modules:
        if m.algebra is not a:
            raise DimensionMismatch("direct sum of modules over different algebras")
        action[:, offset : offset + m.dim, offset : offset + m.dim] = m.action
        offsets.append(offset)
        offset += m.dim
    module = make_module(a, action, name=name or " + ".join(m.name or "?" for m in modules))
    injections, projections = [], []
    for m, start in zip(modules, offsets):
        inj = field_.zeros((total, m.dim))
        for k in range(m.dim):
            inj[start + k, k] = field_.one
        injections.append(ModuleMap(m, module, inj))
        projections.append(ModuleMap(module, m, inj.T.copy()))
    return DirectSum(module, tuple(injections), tuple(projections))


def projective_at(a: Algebra, e: Vector, name: str = "") -> FModule:
    """The left ideal ``A e`` as a module."""
    if not a.is_idempotent(e):
        raise NotIdempotent(f"{a.format_element(e)} is not idempotent")
    module, _ = submodule(regular_module(a), left_ideal(a, e), name=name or f"A({a.format_element(e)})")
    return module


def left_ideal_module(a: Algebra, x: Vector, name: str = "") -> tuple[FModule, ModuleMap]:
    """The submodule ``A x`` of the regular module."""
    return submodule(regular_module(a), left_ideal(a, x), name=name or f"A({a.format_element(x)})")


def right_multiplication_map(a: Algebra, x: Vector, e: Vector) -> ModuleMap:
    """``A e -> A x``, ``v -> v x``."""
    source = projective_at(a, e)
    target, _ = left_ideal_module(a, x)
    space = left_ideal(a, e)
    image_space = left_ideal(a, x)
    products = a.field.matmul(space.basis, a.right_matrix(x).T.copy())
    matrix = image_space.coordinates_of_rows(products).T.copy()
    return ModuleMap(source, target, matrix)


def _vertex_projective(a: Algebra, rep: PrimitiveIdempotent) -> tuple[FModule, Subspace]:
    cache = a.memo.setdefault("vertex_projectives", {})
    if rep.label not in cache:
        space = left_ideal(a, rep.vector)
        module, _ = submodule(regular_module(a), space, name=f"P_{rep.label}")
        cache[rep.label] = (module, space)
    return cache[rep.label]


def indecomposable_projectives(a: Algebra) -> list[FModule]:
    return [_vertex_projective(a, rep)[0] for rep in class_representatives(a)]


def module_from_representation(
    a: Algebra,
    dims: Mapping[str, int],
    maps: Mapping[str, Union[np.ndarray, Sequence[Sequence]]],
    name: str = "",
) -> FModule:
    """Module from vertex spaces and one matrix per arrow (or per non-identity morphism).

    A map for ``a: i -> j`` has shape ``dims[j] x dims[i]``; missing maps are zero.
    """
    field_ = a.field
    for vertex in dims:
        if vertex not in a.vertex_labels:
            raise InvalidModule(f"unknown vertex {vertex!r}")
    sizes = [int(dims.get(v, 0)) for v in a.vertex_labels]
    offsets = dict(zip(a.vertex_labels, np.cumsum([0] + sizes[:-1]).tolist()))
    size_of = dict(zip(a.vertex_labels, sizes))
    total = sum(sizes)

    def block(label: str, source: str, target: str) -> np.ndarray:
        raw = maps.get(label)
        if raw is None:
            return field_.zeros((size_of[target], size_of[source]))
        matrix = field_.array(raw) if not isinstance(raw, np.ndarray) else field_.normalize(raw.astype(field_.dtype))
        if matrix.size == 0:
            matrix = field_.zeros((size_of[target], size_of[source]))
        if matrix.ndim != 2 or matrix.shape != (size_of[target], size_of[source]):
            raise InvalidModule(
                f"matrix for {label} has shape {matrix.shape}, expected {(size_of[target], size_of[source])}"
            )
        return matrix

    def place(action: np.ndarray, index: int, source: str, target: str, matrix: np.ndarray) -> None:
        s, t = offsets[source], offsets[target]
        action[index, t : t + size_of[target], s : s + size_of[source]] = matrix

    action = field_.zeros((a.dim, total, total))
    origin = a.origin
    if isinstance(origin, PathOrigin):
        arrows = {arrow.label: arrow for arrow in origin.presentation.quiver.arrows}
        unknown = set(maps) - set(arrows)
        if unknown:
            raise InvalidModule(f"unknown arrows {sorted(unknown)}")
        arrow_maps = {label: block(label, arrow.source, arrow.target) for label, arrow in arrows.items()}
        for index, path in enumerate(origin.paths):
            current = field_.eye(size_of[path.source])
            for label in path.arrows:
                current = field_.matmul(arrow_maps[label], current)
            place(action, index, path.source, path.target, current)
    elif isinstance(origin, EIOrigin):
        category = origin.category
        identities = set(category.identities.values())
        unknown = set(maps) - {m.label for m in category.morphisms}
        if unknown:
            raise InvalidModule(f"unknown morphisms {sorted(unknown)}")
        for index, label in enumerate(a.basis):
            morphism = category.morphism(label)
            if label in identities:
                matrix = field_.eye(size_of[morphism.source])
            else:
                matrix = block(label, morphism.source, morphism.target)
            place(action, index, morphism.source, morphism.target, matrix)
    else:
        raise InvalidModule("representations need an algebra built from a quiver or an EI category")
    return make_module(a, action, name=name, verify=True)


@dataclass(frozen=True)
class DimensionVector:
    labels: tuple[str, ...]
    values: tuple[int, ...]

    @property
    def total(self) -> int:
        return sum(self.values)

    def as_dict(self) -> dict[str, int]:
        return dict(zip(self.labels, self.values))

    def __str__(self) -> str:
        return "(" + ",".join(str(v) for v in self.values) + ")"


def dimension_vector(
    m: FModule, es: Sequence[Vector] | None = None, labels: Sequence[str] | None = None
) -> DimensionVector:
    """``dim e M`` per idempotent, the vertex idempotents by default."""
    a = m.algebra
    if es is None:
        es, labels = a.vertex_idempotents, a.vertex_labels
    labels = tuple(labels) if labels is not None else tuple(f"e{i + 1}" for i in range(len(es)))
    values = tuple(Matrix(a.field, m.act(e)).rank() for e in es)
    return DimensionVector(labels, values)


# -- tops, socles, simples ---------------------------------------------------


def radical_times(m: FModule, space: Subspace) -> Subspace:
    """``rad(A) . space``."""
    field_ = m.algebra.field
    rad = radical(m.algebra)
    if rad.dim == 0 or space.dim == 0:
        return Subspace.zero(field_, m.dim)
    rows = [field_.matmul(space.basis, m.act(r).T.copy()) for r in rad.basis]
    return Subspace.span(field_, m.dim, np.vstack(rows))


def radical_layers(m: FModule) -> list[int]:
    """Dimensions of ``rad^k M`` for ``k = 0, 1, ...`` until zero."""
    if "radical_layers" not in m.memo:
        current = Subspace.whole(m.algebra.field, m.dim)
        dims = [current.dim]
        while current.dim:
            following = radical_times(m, current)
            if following.dim == current.dim:
                raise InvariantViolation("radical powers of a module did not reach zero")
            current = following
            dims.append(current.dim)
        m.memo["radical_layers"] = dims
    return m.memo["radical_layers"]


@dataclass(frozen=True, eq=False)
class TopAndRadical:
    top: FModule
    projection: ModuleMap
    radical: FModule
    inclusion: ModuleMap
    radical_space: Subspace


def top_and_radical(m: FModule) -> TopAndRadical:
    if "top_and_radical" not in m.memo:
        space = radical_times(m, Subspace.whole(m.algebra.field, m.dim))
        rad_module, inclusion = submodule(m, space, name=f"rad {m.name}")
        top, projection = quotient_module(m, space, name=f"top {m.name}")
        m.memo["top_and_radical"] = TopAndRadical(top, projection, rad_module, inclusion, space)
    return m.memo["top_and_radical"]


def socle(m: FModule) -> Subspace:
    """Elements killed by the radical."""
    field_ = m.algebra.field
    rad = radical(m.algebra)
    if rad.dim == 0 or m.dim == 0:
        return Subspace.whole(field_, m.dim)
    stacked = np.vstack([m.act(r) for r in rad.basis])
    return Subspace.span(field_, m.dim, kernel_basis(Matrix(field_, stacked)))


def simples(a: Algebra) -> list[FModule]:
    """One simple module per isomorphism class, as ``top(A e)``."""
    if "simples" not in a.memo:
        found = []
        for rep in class_representatives(a):
            projective, _ = _vertex_projective(a, rep)
            top = top_and_radical(projective).top
            found.append(make_module(a, top.action, name=f"S_{rep.label}"))
        a.memo["simples"] = found
    return a.memo["simples"]


def simple_at(a: Algebra, label: str) -> FModule:
    for rep, module in zip(class_representatives(a), simples(a)):
        if label in (rep.label, rep.vertex):
            return module
    raise KeyError(f"no simple module labelled {label!r}")


def simple_multiplicities(m: FModule, semisimple_space: Subspace | None = None) -> dict[str, int]:
    """Multiplicity of each simple in a semisimple module (the top by default)."""
    target = top_and_radical(m).top if semisimple_space is None else submodule(m, semisimple_space)[0]
    return {
        rep.label: Matrix(m.algebra.field, target.act(rep.vector)).rank()
        for rep in class_representatives(m.algebra)
    }


# -- projective covers -------------------------------------------------------


@dataclass(frozen=True)
class CoverSummand:
    label: str
    idempotent: Vector
    space: Subspace
    offset: int
    generator_image: Vector


@dataclass(frozen=True, eq=False)
class ProjectiveCover:
    projective: FModule
    epi: ModuleMap
    summands: tuple[CoverSummand, ...]

    def components(self, v: Vector) -> list[Vector]:
        """Split an element of the cover into algebra elements, one per summand."""
        field_ = self.projective.algebra.field
        parts = []
        for s in self.summands:
            coords = v[s.offset : s.offset + s.space.dim]
            parts.append(field_.matmul(coords, s.space.basis))
        return parts


def projective_cover(m: FModule) -> ProjectiveCover:
    """Minimal projective cover built from generators of the top, one ``A e`` per generator."""
    if "projective_cover" in m.memo:
        return m.memo["projective_cover"]
    a, field_ = m.algebra, m.algebra.field
    if m.dim == 0:
        zero = zero_module(a)
        cover = ProjectiveCover(zero, ModuleMap(zero, m, field_.zeros((0, 0))), ())
        m.memo["projective_cover"] = cover
        return cover
    layers = top_and_radical(m)
    builder = EchelonBuilder(field_, m.dim)
    for v in layers.radical_space.basis:
        builder.add(v)
    modules, blocks, summands = [], [], []
    offset = 0
    for rep in class_representatives(a):
        image = m.act(rep.vector)
        for col in range(m.dim):
            v = image[:, col].copy()
            if not builder.add(v):
                continue
            module, space = _vertex_projective(a, rep)
            modules.append(module)
            blocks.append(field_.matmul(space.basis, m.orbit(v)).T.copy())
            summands.append(CoverSummand(rep.label, rep.vector, space, offset, v))
            offset += module.dim
    total = direct_sum(modules, name=" + ".join(f"P_{s.label}" for s in summands)).module
    epi = ModuleMap(total, m, np.hstack(blocks))
    if not epi.is_surjective():
        raise InvariantViolation(f"cover of {m.name or 'module'} is not surjective")
    if not epi.kernel().is_subspace_of(top_and_radical(total).radical_space):
        raise InvariantViolation(f"cover of {m.name or 'module'} is not minimal")
    cover = ProjectiveCover(total, epi, tuple(summands))
    m.memo["projective_cover"] = cover
    return cover


def is_projective(m: FModule) -> bool:
    return projective_cover(m).projective.dim == m.dim


# -- Hom spaces and isomorphism ----------------------------------------------


def _vertex_coordinates(m: FModule) -> list[tuple[np.ndarray, np.ndarray]]:
    """Per vertex idempotent: (basis columns of e M, coordinate read-off M -> e M)."""
    field_ = m.algebra.field
    blocks = []
    for e in m.algebra.vertex_idempotents:
        projector = m.act(e)
        space = Subspace.span(field_, m.dim, projector.T.copy())
        blocks.append((space.basis.T.copy(), projector[list(space.pivots), :].copy()))
    return blocks


def hom_space(m: FModule, n: FModule) -> list[ModuleMap]:
    """Basis of ``Hom_A(m, n)``."""
    if m.algebra is not n.algebra:
        raise DimensionMismatch("Hom between modules over different algebras")
    cache = m.memo.setdefault("hom", {})
    if id(n) in cache:
        return cache[id(n)][1]
    a, field_ = m.algebra, m.algebra.field
    candidates = []
    for (_, read_m), (cols_n, _) in zip(_vertex_coordinates(m), _vertex_coordinates(n)):
        for r in range(cols_n.shape[1]):
            for c in range(read_m.shape[0]):
                candidates.append(field_.normalize(np.outer(cols_n[:, r], read_m[c, :])))
    basis = np.stack(candidates) if candidates else field_.zeros((0, n.dim, m.dim))
    idempotent_count = len(a.vertex_idempotents)
    for g in generators(a)[idempotent_count:]:
        if basis.shape[0] == 0:
            break
        act_m, act_n = m.act(g), n.act(g)
        columns = [
            field_.normalize(field_.matmul(x, act_m) - field_.matmul(act_n, x)).ravel() for x in basis
        ]
        system = np.stack(columns, axis=1)
        system = system[np.any(system != 0, axis=1)]
        if system.shape[0] == 0:
            continue
        combos = kernel_basis(Matrix(field_, system))
        if not combos:
            basis = field_.zeros((0, n.dim, m.dim))
            break
        basis = field_.normalize(np.tensordot(np.vstack(combos), basis, axes=1))
    maps = [ModuleMap(m, n, x.copy()) for x in basis]
    cache[id(n)] = (n, maps)
    return maps


def _combination(maps: Sequence[ModuleMap], coefficients: Vector) -> ModuleMap:
    field_ = maps[0].field
    stack = np.stack([f.matrix for f in maps])
    return ModuleMap(maps[0].source, maps[0].target, field_.normalize(np.tensordot(coefficients, stack, axes=1)))


def candidate_maps(maps: Sequence[ModuleMap], rng: random.Random, max_terms: int, tries: int) -> Iterator[ModuleMap]:
    """Basis maps, then sums of up to ``max_terms`` of them, then seeded random combinations."""
    if not maps:
        return
    field_ = maps[0].field
    yield from maps
    produced = 0
    for size in range(2, max_terms + 1):
        for combo in itertools.combinations(range(len(maps)), size):
            if produced >= _SUM_BUDGET:
                break
            coefficients = field_.zeros(len(maps))
            for k in combo:
                coefficients[k] = field_.one
            produced += 1
            yield _combination(maps, coefficients)
    for _ in range(tries):
        yield _combination(maps, field_.random_array(rng, (len(maps),)))


@dataclass(frozen=True, eq=False)
class IsoYes:
    certificate: ModuleMap


@dataclass(frozen=True)
class IsoNo:
    reason: str


@dataclass(frozen=True)
class IsoInconclusive:
    reason: str


IsoResult = Union[IsoYes, IsoNo, IsoInconclusive]


def iso_obstruction(m: FModule, n: FModule) -> str | None:
    """A decidable reason the modules differ, or None."""
    if m.dim != n.dim:
        return f"dimensions {m.dim} and {n.dim} differ"
    dm, dn = dimension_vector(m), dimension_vector(n)
    if dm != dn:
        return f"dimension vectors {dm} and {dn} differ"
    if radical_layers(m) != radical_layers(n):
        return f"radical layers {radical_layers(m)} and {radical_layers(n)} differ"
    if len(hom_space(m, m)) != len(hom_space(n, n)):
        return f"endomorphism rings of dimension {len(hom_space(m, m))} and {len(hom_space(n, n))}"
    return None


def is_isomorphic(m: FModule, n: FModule, seed: int | None = None, config: Settings | None = None) -> IsoResult:
    config = config or default_settings
    if m is n:
        ISO_SEARCHES.labels(outcome="yes").inc()
        return IsoYes(identity_map(m))
    reason = iso_obstruction(m, n)
    if reason is not None:
        ISO_SEARCHES.labels(outcome="no").inc()
        return IsoNo(reason)
    if m.dim == 0:
        ISO_SEARCHES.labels(outcome="yes").inc()
        return IsoYes(ModuleMap(m, n, m.algebra.field.zeros((0, 0))))
    maps = hom_space(m, n)
    if not maps:
        ISO_SEARCHES.labels(outcome="no").inc()
        return IsoNo("no nonzero homomorphism")
    rng = random.Random(config.seed if seed is None else seed)
    for f in candidate_maps(maps, rng, config.iso_max_sum_terms, config.iso_random_tries):
        if f.is_isomorphism():
            ISO_SEARCHES.labels(outcome="yes").inc()
            return IsoYes(f)
    ISO_SEARCHES.labels(outcome="inconclusive").inc()
    logger.info(
        "iso_search_inconclusive",
        extra={"module_name": f"{m.name} ~ {n.name}", "status": f"hom_dim={len(maps)}"},
    )
    return IsoInconclusive(f"no invertible map among the searched combinations of {len(maps)} basis maps")


@dataclass(frozen=True, eq=False)
class SplitEmbedding:
    inclusion: ModuleMap
    retraction: ModuleMap


def split_embedding(
    small: FModule, big: FModule, seed: int | None = None, config: Settings | None = None
) -> SplitEmbedding | None:
    """A split monomorphism ``small -> big`` with its retraction, if the search finds one."""
    config = config or default_settings
    if small.dim == 0 or small.dim > big.dim:
        return None
    dims_small, dims_big = dimension_vector(small).values, dimension_vector(big).values
    if any(s > b for s, b in zip(dims_small, dims_big)):
        return None
    forward = hom_space(small, big)
    backward = hom_space(big, small)
    if not forward or not backward:
        return None
    field_ = small.algebra.field
    identity = field_.eye(small.dim).ravel()
    rng = random.Random(config.seed if seed is None else seed)
    for iota in candidate_maps(forward, rng, config.iso_max_sum_terms, config.iso_random_tries):
        if not iota.is_injective():
            continue
        system = np.stack([field_.matmul(h.matrix, iota.matrix).ravel() for h in backward], axis=1)
        coefficients = solve(Matrix(field_, system), identity)
        if isinstance(coefficients, NoSolution):
            continue
        return SplitEmbedding(iota, _combination(backward, coefficients))
    return None


# -- restriction and inflation -----------------------------------------------


def _key(a: Algebra, e: Vector) -> tuple:
    return tuple(a.field.coerce(v) for v in e)


def corner_of(a: Algebra, e: Vector, label: str = "e") -> CornerAlgebra:
    """``corner(a, e)`` computed once per idempotent."""
    cache = a.memo.setdefault("corners", {})
    key = _key(a, e)
    if key not in cache:
        cache[key] = corner(a, e, label)
    return cache[key]


def restriction_space(m: FModule, e: Vector) -> Subspace:
    """``e M`` inside ``M``."""
    return Subspace.span(m.algebra.field, m.dim, m.act(e).T.copy())


def restrict_module(m: FModule, e: Vector, label: str = "e") -> FModule:
    """``e M`` as a module over ``e A e``."""
    a = m.algebra
    if not a.is_idempotent(e):
        raise NotIdempotent(f"{a.format_element(e)} is not idempotent")
    cache = m.memo.setdefault("restrictions", {})
    key = _key(a, e)
    if key not in cache:
        inner = corner_of(a, e, label)
        space = restriction_space(m, e)
        pivots = list(space.pivots)
        basis_t = space.basis.T.copy()
        action = a.field.zeros((inner.algebra.dim, space.dim, space.dim))
        for k, x in enumerate(inner.space.basis):
            action[k] = a.field.matmul(m.act(x), basis_t)[pivots, :]
        cache[key] = make_module(inner.algebra, action, name=f"{m.name}({label})")
    return cache[key]


def restrict_map(f: ModuleMap, e: Vector, label: str = "e") -> ModuleMap:
    source = restrict_module(f.source, e, label)
    target = restrict_module(f.target, e, label)
    src_space = restriction_space(f.source, e)
    tgt_space = restriction_space(f.target, e)
    images = f.field.matmul(f.matrix, src_space.basis.T.copy())
    return ModuleMap(source, target, images[list(tgt_space.pivots), :].copy())


def inflate(m: FModule, quotient: QuotientAlgebra) -> FModule:
    """An ``A/J``-module viewed as an ``A``-module on which ``J`` acts as zero."""
    if m.algebra is not quotient.algebra:
        raise DimensionMismatch("module is not over the quotient algebra")
    parent = quotient.parent
    action = parent.field.zeros((parent.dim, m.dim, m.dim))
    for i in range(parent.dim):
        action[i] = m.act(quotient.project(parent.basis_vector(i)))
    return make_module(parent, action, name=m.name)


def deflate(m: FModule, quotient: QuotientAlgebra) -> FModule:
    """An ``A``-module killed by ``J`` viewed as an ``A/J``-module."""
    if m.algebra is not quotient.parent:
        raise DimensionMismatch("module is not over the parent algebra")
    for j in quotient.ideal.basis:
        if np.any(m.act(j)):
            raise InvalidModule(f"ideal does not annihilate {m.name or 'module'}")
    inner = quotient.algebra
    action = inner.field.zeros((inner.dim, m.dim, m.dim))
    for k in range(inner.dim):
        action[k] = m.act(quotient.lift(inner.basis_vector(k)))
    return make_module(inner, action, name=m.name)


def ideal_layer_module(a: Algebra, outer: Subspace, inner: Subspace, quotient: QuotientAlgebra) -> FModule:
    """``outer / inner`` for left ideals ``inner <= outer`` of ``A``, as an ``A/J``-module."""
    regular = regular_module(a)
    outer_module, _ = submodule(regular, outer)
    inner_in_outer = Subspace.span(a.field, outer.dim, outer.coordinates_of_rows(inner.basis))
    layer, _ = quotient_module(outer_module, inner_in_outer, name="layer")
    return deflate(layer, quotient)


@dataclass(frozen=True, eq=False)
class CornerSides:
    """``A e`` as a left module over ``(eAe)^op`` and ``e A`` as a left ``eAe``-module."""

    corner: CornerAlgebra
    right: FModule
    left: FModule


def corner_sides(a: Algebra, e: Vector, label: str = "e") -> CornerSides:
    inner = corner_of(a, e, label)
    op = inner.algebra.memo.get("opposite")
    if op is None:
        op = opposite(inner.algebra, verify=False)
        inner.algebra.memo["opposite"] = op
    field_ = a.field
    col_space, row_space = left_ideal(a, e), right_ideal(a, e)
    right_action = field_.zeros((inner.algebra.dim, col_space.dim, col_space.dim))
    left_action = field_.zeros((inner.algebra.dim, row_space.dim, row_space.dim))
    for k, x in enumerate(inner.space.basis):
        right_images = field_.matmul(col_space.basis, a.right_matrix(x).T.copy())
        right_action[k] = col_space.coordinates_of_rows(right_images).T
        left_images = field_.matmul(row_space.basis, a.left_matrix(x).T.copy())
        left_action[k] = row_space.coordinates_of_rows(left_images).T
    return CornerSides(
        inner,
        make_module(op, right_action, name=f"A{label}"),
        make_module(inner.algebra, left_action, name=f"{label}A"),
    )
