"""Directed stratifications and the structure theorems as executable checks.

A stratification ``(e_1, ..., e_n)`` lists its idempotents sources first:
``e_i A e_j = 0`` whenever ``i < j``. Objects of the associated category are
named after the Gabriel-quiver vertices (or algebra vertices) they collect.
"""

from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass
from typing import Mapping, Optional, Sequence, Union

import numpy as np

from stratakit.algebra import (
    Algebra,
    AssociatedCategory,
    EICategory,
    EIOrigin,
    PathOrigin,
    StratificationFailure,
    associated_category,
    element_of_path,
    generators,
    left_ideal,
    opposite,
    product_space,
    quotient_algebra,
    right_ideal,
    stratification_failure,
    two_sided_ideal,
)
from stratakit.errors import (
    DimensionMismatch,
    InvalidObstructionPair,
    InvariantViolation,
    NotAnIdeal,
    NotAStratification,
    NotIdempotent,
    NotMinimalObject,
    NotParallel,
)
from stratakit.fmod import (
    FModule,
    corner_of,
    corner_sides,
    ideal_layer_module,
    indecomposable_projectives,
    is_projective,
    left_ideal_module,
    projective_cover,
    quotient_module,
    regular_module,
    restrict_map,
    restrict_module,
    right_multiplication_map,
    simple_at,
    simple_multiplicities,
    simples,
    submodule,
    top_and_radical,
)
from stratakit.idempotents import gabriel_quiver, primitive_idempotents
from stratakit.linalg import FieldSpec, Matrix, Subspace, Vector, kron
from stratakit.quiver import condensation, directed_bipartitions, finest_stratification_order, path_from_word
from stratakit.radical import radical
from stratakit.resolution import (
    DimensionStatus,
    Finite,
    ext_from_resolution,
    gl_dim,
    is_self_injective,
    minimal_resolution,
    proj_dim,
    status_to_dimension,
    tor_from_resolution,
)
from stratakit.settings import Settings
from stratakit.settings import settings as default_settings

logger = logging.getLogger(__name__)

FINDIM_INTERPRETATION = "fin.dim is the little finitistic dimension (finitely generated modules)"


@dataclass(frozen=True)
class Verdict:
    """Outcome of one check with the evidence that decided it."""

    check: str
    passed: bool
    evidence: tuple[str, ...] = ()

    def to_json(self) -> dict:
        return {"check": self.check, "passed": self.passed, "evidence": list(self.evidence)}


# -- stratifications ---------------------------------------------------------


@dataclass(frozen=True, eq=False)
class DirectedStratification:
    algebra: Algebra
    idempotents: tuple[Vector, ...]
    labels: tuple[str, ...]
    category: AssociatedCategory
    orthogonal: bool = True
    complete: bool = True
    directed: bool = True

    @property
    def length(self) -> int:
        return len(self.idempotents)

    def index(self, label: str) -> int:
        try:
            return self.labels.index(label)
        except ValueError:
            raise KeyError(f"no object {label!r} in stratification {self.describe()}") from None

    def idempotent(self, label: str) -> Vector:
        return self.idempotents[self.index(label)]

    def idempotent_of(self, objs: Sequence[str]) -> Vector:
        a = self.algebra
        return a.field.normalize(sum((self.idempotent(x) for x in objs), a.zero()))

    def hom_nonzero(self, source: str, target: str) -> bool:
        return self.category.hom_nonzero(self.index(source), self.index(target))

    def describe(self) -> str:
        return " | ".join(self.labels)


StratificationResult = Union[DirectedStratification, StratificationFailure]


def verify_stratification(
    a: Algebra, es: Sequence[Vector], labels: Sequence[str] | None = None
) -> StratificationResult:
    """Orthogonality, completeness and directedness, or the first failure with a witness."""
    failure = stratification_failure(a, es)
    if failure is not None:
        return failure
    category = associated_category(a, es, labels)
    return DirectedStratification(a, tuple(es), category.objects, category)


def _group_label(members: Sequence[str]) -> str:
    return ",".join(members)


def _class_sums(a: Algebra) -> dict[str, Vector]:
    """Gabriel-quiver vertex -> sum of the primitive idempotents in its class."""
    gq = gabriel_quiver(a)
    labels = list(gq.quiver.vertices)
    sums = {label: a.zero() for label in labels}
    for item in primitive_idempotents(a):
        label = labels[item.class_index]
        sums[label] = a.field.normalize(sums[label] + item.vector)
    return sums


def _from_groups(a: Algebra, groups: Sequence[Sequence[str]], sums: Mapping[str, Vector]) -> StratificationResult:
    es = [a.field.normalize(sum((sums[v] for v in group), a.zero())) for group in groups]
    return verify_stratification(a, es, [_group_label(g) for g in groups])


def find_stratifications(a: Algebra) -> list[DirectedStratification]:
    """Trivial stratification, every bipartition of the Gabriel quiver, and the finest one."""
    if "stratifications" in a.memo:
        return a.memo["stratifications"]
    q = gabriel_quiver(a).quiver
    sums = _class_sums(a)
    position = {v: i for i, v in enumerate(q.vertices)}
    candidates: list[list[list[str]]] = [[list(q.vertices)]]
    for split in directed_bipartitions(q):
        upper = sorted(split.upper, key=position.__getitem__)
        lower = sorted(split.lower, key=position.__getitem__)
        candidates.append([upper, lower])
    finest = finest_stratification_order(q)
    if len(finest) > 2:
        candidates.append(finest)

    found: list[DirectedStratification] = []
    seen: set[tuple[str, ...]] = set()
    for groups in candidates:
        key = tuple(_group_label(g) for g in groups)
        if key in seen:
            continue
        seen.add(key)
        result = _from_groups(a, groups, sums)
        if isinstance(result, StratificationFailure):
            raise InvariantViolation(f"candidate stratification {' | '.join(key)} fails: {result.message}")
        found.append(result)
    a.memo["stratifications"] = found
    logger.info("stratifications_found", extra={"algebra": a.name, "status": f"{len(found)} found"})
    return found


def is_minimal(a: Algebra) -> bool:
    """True when only the trivial stratification exists."""
    classes, _ = condensation(gabriel_quiver(a).quiver)
    return len(classes) == 1


def finest_stratification(a: Algebra) -> DirectedStratification:
    return max(find_stratifications(a), key=lambda s: s.length)


def stratification_from_groups(a: Algebra, groups: Sequence[Sequence[str]]) -> DirectedStratification:
    """Stratification by groups of algebra vertex labels, earliest first."""
    sums = {label: e for label, e in zip(a.vertex_labels, a.vertex_idempotents)}
    for group in groups:
        for v in group:
            if v not in sums:
                raise NotAStratification(f"unknown vertex {v!r}")
    result = _from_groups(a, groups, sums)
    if isinstance(result, StratificationFailure):
        raise NotAStratification(result.message, result)
    return result


# -- support and ideals ------------------------------------------------------


@dataclass(frozen=True)
class SupportProfile:
    module: str
    dims: tuple[tuple[str, int], ...]
    minimal: tuple[str, ...]
    closure: tuple[str, ...]

    def dim_at(self, label: str) -> int:
        return dict(self.dims)[label]


def _object_dims(m: FModule, s: DirectedStratification) -> dict[str, int]:
    field_ = m.algebra.field
    return {label: Matrix(field_, m.act(e)).rank() for label, e in zip(s.labels, s.idempotents)}


def support_profile(m: FModule, s: DirectedStratification) -> SupportProfile:
    if m.algebra is not s.algebra:
        raise DimensionMismatch("module and stratification live over different algebras")
    dims = _object_dims(m, s)
    minimal = tuple(
        x
        for x in s.labels
        if dims[x] and all(dims[y] == 0 for y in s.labels if y != x and s.hom_nonzero(y, x))
    )
    closure = tuple(z for z in s.labels if z in minimal or any(s.hom_nonzero(x, z) for x in minimal))
    return SupportProfile(m.name, tuple(dims.items()), minimal, closure)


def is_ideal(s: DirectedStratification, objs: Sequence[str]) -> bool:
    chosen = set(objs)
    for x in chosen:
        s.index(x)
    return all(y in chosen for x in chosen for y in s.labels if y != x and s.hom_nonzero(y, x))


def ideals(s: DirectedStratification) -> list[tuple[str, ...]]:
    found = []
    for size in range(len(s.labels) + 1):
        for objs in itertools.combinations(s.labels, size):
            if is_ideal(s, objs):
                found.append(objs)
    return found


def _label_set(objs: Sequence[str]) -> str:
    return "{" + "; ".join(objs) + "}"


def check_restriction_preserves_projectives(s: DirectedStratification, objs: Sequence[str]) -> Verdict:
    if not is_ideal(s, objs):
        raise NotAnIdeal(f"{_label_set(objs)} is not an ideal of the associated category")
    name = "restriction"
    if not objs:
        return Verdict(name, True, ("empty ideal",))
    e = s.idempotent_of(objs)
    label = _label_set(objs)
    evidence, passed = [], True
    for projective in indecomposable_projectives(s.algebra):
        restricted = restrict_module(projective, e, label)
        ok = is_projective(restricted)
        passed = passed and ok
        evidence.append(
            f"{projective.name} restricted to {label}: dim {restricted.dim}, {'projective' if ok else 'NOT projective'}"
        )
    return Verdict(name, passed, tuple(evidence))


def check_cover_theorem(m: FModule, s: DirectedStratification) -> Verdict:
    """The cover lives on the support closure and restricts to covers at minimal objects."""
    profile = support_profile(m, s)
    cover = projective_cover(m)
    projective = cover.projective
    dims = _object_dims(projective, s)
    evidence, passed = [], True
    outside = [x for x in s.labels if dims[x] and x not in profile.closure]
    if outside:
        passed = False
        evidence.append(f"cover is nonzero outside the support closure at {', '.join(outside)}")
    else:
        evidence.append(f"cover supported on {_label_set([x for x in s.labels if dims[x]])}")
    for x in profile.minimal:
        e = s.idempotent(x)
        restricted = restrict_module(projective, e, x)
        epi = restrict_map(cover.epi, e, x)
        checks = {
            "projective": is_projective(restricted),
            "surjective": epi.is_surjective(),
            "kernel in radical": epi.kernel().is_subspace_of(top_and_radical(restricted).radical_space),
        }
        failed = [k for k, ok in checks.items() if not ok]
        passed = passed and not failed
        evidence.append(f"at {x}: " + ("restricted cover is a projective cover" if not failed else "fails " + ", ".join(failed)))
    return Verdict("cover", passed, tuple(evidence))


def check_restricted_resolution(
    m: FModule, s: DirectedStratification, x: str, cutoff: int | None = None, config: Settings | None = None
) -> Verdict:
    profile = support_profile(m, s)
    if x not in profile.minimal:
        raise NotMinimalObject(f"{x} is not {m.name or 'M'}-minimal")
    res = minimal_resolution(m, cutoff, config=config)
    e = s.idempotent(x)
    maps = [restrict_map(stage.differential, e, x) for stage in res.stages]
    terms = [mp.source for mp in maps]
    evidence, passed = [], True
    if not maps[0].is_surjective():
        passed = False
        evidence.append("restricted augmentation is not surjective")
    for k, mp in enumerate(maps):
        kernel = mp.kernel()
        if k + 1 < len(maps):
            if kernel != maps[k + 1].image():
                passed = False
                evidence.append(f"not exact at P^{k}({x})")
        elif isinstance(res.status, Finite) and kernel.dim:
            passed = False
            evidence.append(f"last restricted differential at P^{k}({x}) is not injective")
        if not is_projective(terms[k]):
            passed = False
            evidence.append(f"P^{k}({x}) is not projective")
        if k >= 1 and not mp.image().is_subspace_of(top_and_radical(terms[k - 1]).radical_space):
            passed = False
            evidence.append(f"image of P^{k}({x}) is not in the radical")
    dims = ", ".join(str(t.dim) for t in terms)
    evidence.insert(0, f"restricted terms at {x} have dimensions [{dims}]")
    return Verdict("restricted-resolution", passed, tuple(evidence))


def simples_support_check(s: DirectedStratification) -> Verdict:
    """Each simple lives on exactly one object and stays simple over that corner."""
    evidence, passed = [], True
    for simple in simples(s.algebra):
        dims = _object_dims(simple, s)
        support = [x for x, d in dims.items() if d]
        if len(support) != 1:
            passed = False
            evidence.append(f"{simple.name} is supported on {_label_set(support)}")
            continue
        x = support[0]
        restricted = restrict_module(simple, s.idempotent(x), x)
        counts = simple_multiplicities(restricted)
        ok = top_and_radical(restricted).radical_space.dim == 0 and sum(counts.values()) == 1
        passed = passed and ok
        evidence.append(f"{simple.name} lives on {x}" + ("" if ok else " but is not simple there"))
    return Verdict("simples-support", passed, tuple(evidence))


# -- stratifying ideals ------------------------------------------------------


@dataclass(frozen=True)
class StratifyingIdealReport:
    idempotent: str
    complement: str
    ideal_dim: int
    tensor_dim: int
    multiplication_surjective: bool
    tor: tuple[tuple[int, Optional[int]], ...]

    @property
    def multiplication_iso(self) -> bool:
        return self.multiplication_surjective and self.tensor_dim == self.ideal_dim

    @property
    def tor_vanishes(self) -> Optional[bool]:
        if any(d for _, d in self.tor if d):
            return False
        if any(d is None for _, d in self.tor):
            return None
        return True

    @property
    def passed(self) -> bool:
        return self.multiplication_iso and self.tor_vanishes is True


def tensor_dimension(right: FModule, left: FModule) -> int:
    """``dim X (x)_C Y`` with ``X`` a left module over ``C^op`` and ``Y`` a left ``C``-module."""
    inner = left.algebra
    field_ = inner.field
    size = right.dim * left.dim
    if size == 0:
        return 0
    blocks = []
    for g in generators(inner):
        relation = kron(Matrix(field_, right.act(g)), Matrix.identity(field_, left.dim)) - kron(
            Matrix.identity(field_, right.dim), Matrix(field_, left.act(g))
        )
        blocks.append(relation.data)
    return size - Matrix(field_, np.hstack(blocks)).rank()


def _layer_idempotents(s: DirectedStratification) -> list[tuple[tuple[str, ...], Vector]]:
    """For ``i = 1..n`` the last ``i`` objects and the sum of their idempotents."""
    n = s.length
    return [(s.labels[n - i :], s.idempotent_of(s.labels[n - i :])) for i in range(1, n + 1)]


def stratifying_ideal_check(
    a: Algebra, e: Vector, tor_depth: int | None = None, cutoff: int | None = None, config: Settings | None = None
) -> StratifyingIdealReport:
    """The ideal ``J = A f A`` with ``f = 1 - e``: multiplication iso and Tor vanishing over ``f A f``."""
    config = config or default_settings
    tor_depth = config.tor_depth if tor_depth is None else tor_depth
    if not a.is_idempotent(e):
        raise NotIdempotent(f"{a.format_element(e)} is not idempotent")
    f = a.field.normalize(a.unit - e)
    if not np.any(f):
        return StratifyingIdealReport(a.format_element(e), "0", 0, 0, True, tuple((n, 0) for n in range(1, tor_depth + 1)))
    ideal = two_sided_ideal(a, [f])
    sides = corner_sides(a, f, label="f")
    tensor_dim = tensor_dimension(sides.right, sides.left)
    products = product_space(a, left_ideal(a, f), right_ideal(a, f))
    depth = max(cutoff or config.cutoff, tor_depth + 1)
    res = minimal_resolution(sides.right, depth, min_length=tor_depth + 2, config=config)
    tor = tuple((n, tor_from_resolution(res, sides.left, n)) for n in range(1, tor_depth + 1))
    report = StratifyingIdealReport(
        a.format_element(e), a.format_element(f), ideal.dim, tensor_dim, products == ideal, tor
    )
    logger.debug(
        "stratifying_ideal_checked",
        extra={"algebra": a.name, "status": "passed" if report.passed else "failed", "degree": tor_depth},
    )
    return report


def layer_stratifying_reports(
    s: DirectedStratification, tor_depth: int | None = None, config: Settings | None = None
) -> list[tuple[tuple[str, ...], StratifyingIdealReport]]:
    a = s.algebra
    return [
        (objs, stratifying_ideal_check(a, a.field.normalize(a.unit - f), tor_depth, config=config))
        for objs, f in _layer_idempotents(s)
    ]


# -- standardly stratified ---------------------------------------------------


@dataclass(frozen=True)
class WebbEntry:
    morphism: str
    source: str
    target: str
    stabilizer_order: int
    invertible: bool


@dataclass(frozen=True)
class WebbCriterion:
    field: str
    entries: tuple[WebbEntry, ...]

    @property
    def passed(self) -> bool:
        return all(entry.invertible for entry in self.entries)


def webb_criterion(category: EICategory, field_: FieldSpec) -> WebbCriterion:
    """Stabiliser order of every non-endomorphism and whether it is invertible in the field."""
    entries = []
    for m in category.morphisms:
        if m.source == m.target:
            continue
        order = category.stabilizer_order(m.label)
        invertible = field_.characteristic == 0 or order % field_.characteristic != 0
        entries.append(WebbEntry(m.label, m.source, m.target, order, invertible))
    return WebbCriterion(field_.name, tuple(entries))


@dataclass(frozen=True)
class LayerVerdict:
    index: int
    generators: tuple[str, ...]
    dim: int
    projective: bool


@dataclass(frozen=True)
class StandardReport:
    layers: tuple[LayerVerdict, ...]
    webb: Optional[WebbCriterion]

    @property
    def passed(self) -> bool:
        return all(layer.projective for layer in self.layers)


def standardly_stratified_check(a: Algebra, s: DirectedStratification) -> StandardReport:
    """Each ``J_i / J_(i-1)`` projective over ``A / J_(i-1)``; ``J_i`` is generated by the last ``i`` idempotents."""
    layers = []
    previous = Subspace.zero(a.field, a.dim)
    for i, (objs, f) in enumerate(_layer_idempotents(s), start=1):
        current = two_sided_ideal(a, [f])
        quotient = quotient_algebra(a, previous, name=f"{a.name or 'A'}/J{i - 1}")
        layer = ideal_layer_module(a, current, previous, quotient)
        layers.append(LayerVerdict(i, objs, layer.dim, is_projective(layer)))
        previous = current
    webb = None
    if isinstance(a.origin, EIOrigin):
        webb = webb_criterion(a.origin.category, a.field)
    return StandardReport(tuple(layers), webb)


# -- dimension bounds --------------------------------------------------------


@dataclass(frozen=True)
class StratumEntry:
    label: str
    corner_dim: int
    value: DimensionStatus
    source: str


@dataclass(frozen=True)
class StratumDimReport:
    kind: str
    strata: tuple[StratumEntry, ...]
    bound: Optional[int]
    unknown_due_to: tuple[str, ...]
    algebra_value: Optional[DimensionStatus] = None
    inequality_holds: Optional[bool] = None
    interpretation: str = ""

    @property
    def known(self) -> bool:
        return self.bound is not None


def _combine(entries: list[StratumEntry]) -> tuple[Optional[int], tuple[str, ...]]:
    missing = tuple(e.label for e in entries if not e.value.is_finite)
    if missing:
        return None, missing
    return sum(e.value.value for e in entries) + len(entries) - 1, ()


def findim_bound(
    a: Algebra,
    s: DirectedStratification,
    oracle: Mapping[str, int] | None = None,
    cutoff: int | None = None,
    config: Settings | None = None,
) -> StratumDimReport:
    """Sum of stratum fin.dims plus ``n - 1``; oracle first, then self-injective strata, then finite gl.dim."""
    oracle = dict(oracle or {})
    unknown = set(oracle) - set(s.labels)
    if unknown:
        raise KeyError(f"oracle names unknown objects {sorted(unknown)}")
    entries = []
    for label, e in zip(s.labels, s.idempotents):
        inner = corner_of(a, e, label).algebra
        if label in oracle:
            value, source = DimensionStatus.finite(int(oracle[label])), "oracle"
        elif is_self_injective(inner):
            value, source = DimensionStatus.finite(0), "self-injective"
        else:
            gd = gl_dim(inner, cutoff, config)
            if gd.is_finite:
                value, source = gd, "gl.dim"
            else:
                value, source = DimensionStatus.unknown(f"gl.dim {gd}"), "unknown"
        entries.append(StratumEntry(label, inner.dim, value, source))
    bound, missing = _combine(entries)
    return StratumDimReport("fin.dim", tuple(entries), bound, missing, interpretation=FINDIM_INTERPRETATION)


def gldim_bound(
    a: Algebra, s: DirectedStratification, cutoff: int | None = None, config: Settings | None = None
) -> StratumDimReport:
    entries = []
    for label, e in zip(s.labels, s.idempotents):
        inner = corner_of(a, e, label).algebra
        entries.append(StratumEntry(label, inner.dim, gl_dim(inner, cutoff, config), "gl.dim"))
    bound, missing = _combine(entries)
    whole = gl_dim(a, cutoff, config)
    holds: Optional[bool] = None
    if whole.is_finite and bound is not None:
        holds = whole.value <= bound
    elif whole.is_finite and any(e.value.status == "infinite" for e in entries):
        holds = False
    elif whole.status == "infinite" and bound is not None:
        holds = False
    elif whole.status == "infinite" and any(e.value.status == "infinite" for e in entries):
        holds = True
    if holds is False:
        raise InvariantViolation(f"gl.dim {whole} of {a.name or 'algebra'} contradicts the stratum bound")
    return StratumDimReport("gl.dim", tuple(entries), bound, missing, whole, holds)


# -- recollement and obstruction ---------------------------------------------


def _max_status(values: Sequence[DimensionStatus]) -> DimensionStatus:
    infinite = [v for v in values if v.status == "infinite"]
    if infinite:
        return infinite[0]
    if any(v.status == "unknown" for v in values):
        return DimensionStatus.unknown("some summand has no certificate")
    return DimensionStatus.finite(max((v.value for v in values), default=0))


@dataclass(frozen=True)
class SummandDim:
    vertex: str
    dim: int
    proj_dim: DimensionStatus


@dataclass(frozen=True)
class RecollementReport:
    idempotent: str
    quotient_dim: int
    left_proj_dim: DimensionStatus
    right_proj_dim: DimensionStatus
    summands: tuple[SummandDim, ...]
    ext: tuple[tuple[int, Optional[int]], ...]

    @property
    def ext_vanishes(self) -> Optional[bool]:
        if any(d for _, d in self.ext):
            return False
        if any(d is None for _, d in self.ext):
            return None
        return True

    @property
    def failing(self) -> tuple[str, ...]:
        failed = []
        if self.ext_vanishes is False:
            failed.append("Ext^n(B, F) != 0")
        if self.right_proj_dim.status == "infinite":
            failed.append("proj.dim B_A infinite")
        if self.left_proj_dim.status == "infinite":
            failed.append("proj.dim of B as a left module infinite")
        return tuple(failed)

    @property
    def passed(self) -> Optional[bool]:
        if self.failing:
            return False
        if self.ext_vanishes is None or not self.right_proj_dim.is_finite:
            return None
        return True


def recollement_condition_check(
    a: Algebra,
    e: Vector,
    cutoff: int | None = None,
    ext_depth: int | None = None,
    config: Settings | None = None,
) -> RecollementReport:
    """Finiteness of ``proj.dim B`` on both sides and ``Ext^n(B_A, B_B)`` vanishing for ``B = A / A(1-e)A``."""
    config = config or default_settings
    cutoff = config.cutoff if cutoff is None else cutoff
    ext_depth = config.tor_depth if ext_depth is None else ext_depth
    if not a.is_idempotent(e):
        raise NotIdempotent(f"{a.format_element(e)} is not idempotent")
    field_ = a.field
    f = field_.normalize(a.unit - e)
    ideal = two_sided_ideal(a, [f]) if np.any(f) else Subspace.zero(field_, a.dim)
    quotient_dim = a.dim - ideal.dim

    # B = (+)_v A e_v / J e_v as a left module, so its proj.dim is the largest summand's.
    summands = []
    for label, eps in zip(a.vertex_labels, a.vertex_idempotents):
        if ideal.contains(eps):
            continue
        column_space = left_ideal(a, eps)
        projective, _ = submodule(regular_module(a), column_space, name=f"P_{label}")
        # J e_v inside A e_v
        cut = Subspace.zero(field_, column_space.dim)
        if ideal.dim:
            rows = field_.matmul(ideal.basis, a.right_matrix(eps).T.copy())
            cut = Subspace.span(field_, column_space.dim, column_space.coordinates_of_rows(rows))
        piece, _ = quotient_module(projective, cut, name=f"B*e_{label}")
        summands.append(SummandDim(label, piece.dim, proj_dim(piece, cutoff, config)))
    left_dim = _max_status([s.proj_dim for s in summands])

    op = a.memo.get("opposite")
    if op is None:
        op = opposite(a, verify=False)
        a.memo["opposite"] = op
    right, _ = quotient_module(regular_module(op), ideal, name="B_A")
    res = minimal_resolution(right, max(cutoff, ext_depth + 1), min_length=ext_depth + 2, config=config)
    right_dim = status_to_dimension(res.status)
    ext = tuple((n, ext_from_resolution(res, right, n)) for n in range(1, ext_depth + 1))
    return RecollementReport(a.format_element(e), quotient_dim, left_dim, right_dim, tuple(summands), ext)


@dataclass(frozen=True)
class ObstructionVerdict:
    p: str
    q: str
    rad_kills_p: bool
    q_kills_rad: bool
    q_proj_dim: DimensionStatus
    top_proj_dim: DimensionStatus
    q_matches_target: bool
    q_nonzero: bool = True

    @property
    def present(self) -> bool:
        return (
            self.q_nonzero
            and self.rad_kills_p
            and self.q_kills_rad
            and self.q_proj_dim.is_finite
            and self.top_proj_dim.status == "infinite"
        )


def contravariant_finiteness_obstruction(
    a: Algebra, p: str, q: Sequence[str], cutoff: int | None = None, config: Settings | None = None
) -> ObstructionVerdict:
    """An arrow ``p`` and a parallel path ``q`` witnessing that finite proj.dim modules are not contravariantly finite."""
    origin = a.origin
    if not isinstance(origin, PathOrigin):
        raise InvalidObstructionPair("obstruction pairs need an algebra built from a quiver")
    quiver = origin.presentation.quiver
    arrow = quiver.arrow(p)
    path = path_from_word(quiver, list(q))
    if (path.source, path.target) != (arrow.source, arrow.target):
        raise NotParallel(f"{'*'.join(q)} does not run {arrow.source} -> {arrow.target}")
    if path.arrows == (p,):
        raise InvalidObstructionPair("q must differ from p")
    p_element = a.element(p)
    q_element = element_of_path(a, path)
    rad = radical(a)
    rad_kills_p = all(not np.any(a.multiply(r, p_element)) for r in rad.basis)
    top_proj_dim = proj_dim(simple_at(a, arrow.target), cutoff, config)
    if not np.any(q_element):
        zero = DimensionStatus.unknown(f"{'*'.join(q)} is zero in the algebra")
        return ObstructionVerdict(p, "*".join(q), rad_kills_p, True, zero, top_proj_dim, False, q_nonzero=False)
    q_kills_rad = all(not np.any(a.multiply(q_element, r)) for r in rad.basis)
    ideal_module, _ = left_ideal_module(a, q_element, name=f"A*{'*'.join(q)}")
    target = a.vertex(arrow.target)
    matches = right_multiplication_map(a, q_element, target).is_isomorphism()
    return ObstructionVerdict(
        p,
        "*".join(q),
        rad_kills_p,
        q_kills_rad,
        proj_dim(ideal_module, cutoff, config),
        top_proj_dim,
        matches,
    )
