"""Primitive idempotents and the Gabriel quiver.

Each vertex idempotent is decomposed inside its corner: the semisimple
quotient of the corner is split (centre first, then each simple block) and
the resulting idempotents are lifted back through the radical with the
Newton map ``y -> 3y^2 - 2y^3``.
"""

from __future__ import annotations

import logging
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np
from sympy import Poly, QQ, Rational, symbols

from stratakit.algebra import Algebra, corner, quotient_algebra
from stratakit.errors import InvariantViolation, NotSplit
from stratakit.linalg import EchelonBuilder, FieldSpec, Matrix, NoSolution, Raw, Subspace, Vector, kernel_basis, solve
from stratakit.quiver import Arrow, Quiver
from stratakit.radical import radical, radical_power

logger = logging.getLogger(__name__)

_T = symbols("t")
_CANDIDATE_BUDGET = 400
_NEWTON_LIMIT = 64


@dataclass(frozen=True, eq=False)
class PrimitiveIdempotent:
    vector: Vector
    vertex: str
    label: str
    class_index: int


@dataclass(frozen=True, eq=False)
class GabrielQuiver:
    quiver: Quiver
    idempotents: dict[str, Vector]
    arrow_elements: dict[str, Vector]


# -- polynomials -------------------------------------------------------------


def minimal_polynomial(a: Algebra, x: Vector, unit: Vector) -> list[Raw]:
    """Monic minimal polynomial of ``x``, coefficients from degree 0 upwards."""
    field = a.field
    powers = [unit]
    while True:
        nxt = a.multiply(powers[-1], x)
        system = Matrix(field, np.stack(powers, axis=1))
        combination = solve(system, nxt)
        if not isinstance(combination, NoSolution):
            return [field.coerce(-c) for c in combination] + [field.one]
        powers.append(nxt)
        if len(powers) > a.dim + 1:
            raise InvariantViolation("minimal polynomial degree exceeds the algebra dimension")


def _to_poly(field: FieldSpec, coefficients: Sequence[Raw]) -> Poly:
    high_first = list(reversed(coefficients))
    if field.characteristic:
        return Poly([int(c) for c in high_first], _T, modulus=field.characteristic)
    return Poly([Rational(Fraction(c).numerator, Fraction(c).denominator) for c in high_first], _T, domain=QQ)


def _from_sympy(field: FieldSpec, value) -> Raw:
    rational = Rational(value)
    return field.coerce(Fraction(int(rational.p), int(rational.q)))


def _coefficients(field: FieldSpec, poly: Poly) -> list[Raw]:
    return [_from_sympy(field, c) for c in reversed(poly.all_coeffs())]


def evaluate(a: Algebra, coefficients: Sequence[Raw], x: Vector, unit: Vector) -> Vector:
    field = a.field
    out = a.zero()
    for c in reversed(coefficients):
        out = field.normalize(a.multiply(out, x) + field.coerce(c) * unit)
    return out


def _linear_factors(field: FieldSpec, poly: Poly) -> tuple[list[tuple[Raw, int, Poly]], bool]:
    """Roots with multiplicity and their factors; flag set when a nonlinear factor occurs."""
    _, factors = poly.factor_list()
    linear, split = [], True
    for factor, multiplicity in factors:
        if factor.degree() == 1:
            lead, const = factor.all_coeffs()
            root = field.coerce(-_from_sympy(field, const) * field.inv(_from_sympy(field, lead)))
            linear.append((root, multiplicity, factor))
        elif factor.degree() > 1:
            split = False
    return linear, split


# -- splitting semisimple algebras -------------------------------------------


def _center(s: Algebra) -> Subspace:
    field = s.field
    blocks = [field.normalize(s.right_matrix(s.basis_vector(i)) - s.left_stack[i]) for i in range(s.dim)]
    stacked = np.vstack(blocks)
    return Subspace.span(field, s.dim, kernel_basis(Matrix(field, stacked)))


def _central_split(s: Algebra) -> list[Vector] | None:
    center = _center(s)
    if center.dim <= 1:
        return None
    field = s.field
    for z in center.basis:
        poly = _to_poly(field, minimal_polynomial(s, z, s.unit))
        if poly.degree() <= 1:
            continue
        linear, split = _linear_factors(field, poly)
        if not split:
            raise NotSplit(f"centre of {s.name or 'algebra'} is not split over {field.name}")
        roots = [r for r, _, _ in linear]
        pieces = []
        for j, root in enumerate(roots):
            e = s.unit.copy()
            for other in roots[:j] + roots[j + 1 :]:
                shifted = field.normalize(z - other * s.unit)
                e = field.normalize(s.multiply(e, shifted) * field.inv(field.coerce(root - other)))
            pieces.append(e)
        return pieces
    return None


def _candidates(s: Algebra, rng: random.Random):
    basis = [s.basis_vector(i) for i in range(s.dim)]
    yield from basis
    for i, x in enumerate(basis):
        for y in basis[i + 1 :]:
            yield s.field.normalize(x + y)
            yield s.multiply(x, y)
    for _ in range(_CANDIDATE_BUDGET):
        yield s.field.random_array(rng, (s.dim,))


def _eigen_idempotent(s: Algebra, x: Vector) -> Vector | None:
    field = s.field
    poly = _to_poly(field, minimal_polynomial(s, x, s.unit))
    linear, _ = _linear_factors(field, poly)
    for root, multiplicity, factor in linear:
        power = factor**multiplicity
        rest = poly.exquo(power)
        if rest.degree() == 0:
            continue
        _, r, g = power.gcdex(rest)
        if g.degree() != 0:
            continue
        return evaluate(s, _coefficients(field, r * rest), x, s.unit)
    return None


def split_semisimple(s: Algebra, seed: int = 0) -> list[Vector]:
    """Complete set of primitive orthogonal idempotents of a split semisimple algebra."""
    if s.dim == 0:
        return []
    if s.dim == 1:
        return [s.unit.copy()]
    pieces = _central_split(s)
    if pieces is None:
        degree = int(round(s.dim**0.5))
        if degree * degree != s.dim:
            raise NotSplit(f"simple block of dimension {s.dim} is not a split matrix algebra", simple=s.name)
        rng = random.Random(seed)
        for x in _candidates(s, rng):
            e = _eigen_idempotent(s, x)
            if e is not None:
                pieces = [e, s.field.normalize(s.unit - e)]
                break
        else:
            raise NotSplit(f"no splitting element found in block of dimension {s.dim}", simple=s.name)
    result: list[Vector] = []
    for e in pieces:
        block = corner(s, e, label="b")
        result.extend(block.embed(x) for x in split_semisimple(block.algebra, seed))
    return result


# -- lifting -----------------------------------------------------------------


def newton_lift(a: Algebra, y: Vector) -> Vector:
    field = a.field
    for _ in range(_NEWTON_LIMIT):
        square = a.multiply(y, y)
        if np.all(square == y):
            return y
        cube = a.multiply(square, y)
        y = field.normalize(3 * square - 2 * cube)
    raise InvariantViolation("idempotent lifting did not converge")


def lift_idempotents(a: Algebra, unit: Vector, approximations: Sequence[Vector]) -> list[Vector]:
    """Orthogonal idempotents summing to ``unit`` lifting the given classes modulo the radical."""
    field = a.field
    remaining = unit.copy()
    lifted: list[Vector] = []
    for approx in approximations[:-1]:
        y = a.multiply(a.multiply(remaining, approx), remaining)
        e = newton_lift(a, y)
        lifted.append(e)
        remaining = field.normalize(remaining - e)
    if approximations:
        lifted.append(remaining)
    return lifted


# -- primitive idempotents and the Gabriel quiver ----------------------------


def sandwich(a: Algebra, e: Vector, f: Vector, space: Subspace) -> Subspace:
    """``e * space * f``."""
    left, right = a.left_matrix(e), a.right_matrix(f)
    vectors = [a.field.matmul(left, a.field.matmul(right, r)) for r in space.basis]
    return Subspace.span(a.field, a.dim, vectors)


def primitive_idempotents(a: Algebra, seed: int = 0) -> list[PrimitiveIdempotent]:
    if "primitive_idempotents" in a.memo:
        return a.memo["primitive_idempotents"]
    rad = radical(a)
    raw: list[tuple[Vector, str, str]] = []
    for label, eps in zip(a.vertex_labels, a.vertex_idempotents):
        local = corner(a, eps, label)
        local_rad = radical(local.algebra)
        if local.algebra.dim - local_rad.dim == 1:
            raw.append((eps.copy(), label, label))
            continue
        top = quotient_algebra(local.algebra, local_rad)
        pieces = split_semisimple(top.algebra, seed)
        approximations = [local.embed(top.lift(x)) for x in pieces]
        for k, e in enumerate(lift_idempotents(a, eps, approximations)):
            raw.append((e, label, f"{label}.{k}"))

    representatives: list[Vector] = []
    result: list[PrimitiveIdempotent] = []
    for vector, vertex, label in raw:
        for index, rep in enumerate(representatives):
            if a.corner_space(vector, rep).dim > sandwich(a, vector, rep, rad).dim:
                break
        else:
            index = len(representatives)
            representatives.append(vector)
        result.append(PrimitiveIdempotent(vector, vertex, label, index))
    a.memo["primitive_idempotents"] = result
    logger.info(
        "primitive_idempotents_found",
        extra={"algebra": a.name, "field": a.field.name, "status": f"{len(result)} in {len(representatives)} classes"},
    )
    return result


def class_representatives(a: Algebra) -> list[PrimitiveIdempotent]:
    seen: dict[int, PrimitiveIdempotent] = {}
    for item in primitive_idempotents(a):
        seen.setdefault(item.class_index, item)
    return [seen[k] for k in sorted(seen)]


def gabriel_quiver(a: Algebra) -> GabrielQuiver:
    if "gabriel_quiver" in a.memo:
        return a.memo["gabriel_quiver"]
    reps = class_representatives(a)
    rad, rad2 = radical(a), radical_power(a, 2)
    labels = [r.label for r in reps]
    arrows: list[Arrow] = []
    elements: dict[str, Vector] = {}
    for source, e_source in zip(labels, reps):
        for target, e_target in zip(labels, reps):
            layer = sandwich(a, e_target.vector, e_source.vector, rad)
            deeper = sandwich(a, e_target.vector, e_source.vector, rad2)
            count = layer.dim - deeper.dim
            if count == 0:
                continue
            builder = EchelonBuilder(a.field, a.dim)
            for v in deeper.basis:
                builder.add(v)
            picked = [k for k in range(a.dim) if layer.contains(a.basis_vector(k)) and builder.add(a.basis_vector(k))]
            if len(picked) == count:
                named = [(a.basis[k], a.basis_vector(k)) for k in picked]
            else:
                named = [
                    (f"{source}->{target}#{i}", v) for i, v in enumerate(layer.quotient_basis(deeper).vectors)
                ]
            for arrow_label, vector in named:
                arrows.append(Arrow(arrow_label, source, target))
                elements[arrow_label] = vector
    result = GabrielQuiver(
        Quiver(tuple(labels), tuple(arrows)),
        {r.label: r.vector for r in reps},
        elements,
    )
    a.memo["gabriel_quiver"] = result
    return result
