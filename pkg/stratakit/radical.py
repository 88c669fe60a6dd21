"""Jacobson radical and its certification.

Over Q the radical is the kernel of the trace form ``Tr(L_x L_y)``. Over F_p
the trace form alone is too weak (it vanishes identically on F_2[C_2]), so
the radical is cut out by the p-power trace functionals

    g_i(x) = (Tr(L~_x ** p**i) mod p**(i+1)) / p**i

applied to successively smaller ideals, stopping at ``i = floor(log_p n)``.
Every result is certified afterwards: two-sided ideal, nilpotent, and
semisimple quotient.
"""

from __future__ import annotations

import logging

import numpy as np

from stratakit.algebra import (
    Algebra,
    CornerOrigin,
    OppositeOrigin,
    QuotientOrigin,
    is_two_sided_ideal,
    product_space,
    quotient_algebra,
)
from stratakit.errors import InvariantViolation, UnsupportedField
from stratakit.linalg import Matrix, Subspace, kernel_basis

logger = logging.getLogger(__name__)

_INT64_BOUND = 1 << 62


def _trace_vector(a: Algebra) -> np.ndarray:
    """``t[k] = Tr(L_{b_k})``."""
    return a.field.normalize(np.trace(a.left_stack, axis1=1, axis2=2))


def _trace_form_kernel(a: Algebra, rows: np.ndarray) -> np.ndarray:
    """Combinations ``c`` of ``rows`` with ``Tr(L_{(c.rows) b}) = 0`` for every basis ``b``."""
    field = a.field
    traces = _trace_vector(a)
    gram = field.zeros((rows.shape[0], a.dim))
    for s, x in enumerate(rows):
        products = a.left_matrix(x)
        gram[s] = field.matmul(traces, products)
    return _left_kernel(a, gram, rows)


def _left_kernel(a: Algebra, values: np.ndarray, rows: np.ndarray) -> np.ndarray:
    combos = kernel_basis(Matrix(a.field, values.T.copy()))
    if not combos:
        return a.field.zeros((0, a.dim))
    return a.field.matmul(np.vstack(combos), rows)


def _power_mod(matrix: np.ndarray, exponent: int, modulus: int) -> np.ndarray:
    result = np.eye(matrix.shape[0], dtype=matrix.dtype)
    base = matrix % modulus
    while exponent:
        if exponent & 1:
            result = (result @ base) % modulus
        base = (base @ base) % modulus
        exponent >>= 1
    return result


def _p_power_functional(a: Algebra, rows: np.ndarray, level: int) -> np.ndarray:
    p = a.field.characteristic
    modulus = p ** (level + 1)
    scale = p**level
    dtype = np.int64 if modulus * modulus * a.dim < _INT64_BOUND else object
    stack = np.array(a.left_stack, dtype=dtype)
    values = a.field.zeros((rows.shape[0], a.dim))
    for s, x in enumerate(rows):
        products = a.left_matrix(x)
        for t in range(a.dim):
            lifted = a.combine(products[:, t], stack) if np.any(products[:, t]) else None
            if lifted is None:
                continue
            trace = int(np.trace(_power_mod(np.array(lifted, dtype=dtype), scale, modulus))) % modulus
            if trace % scale:
                raise UnsupportedField(
                    f"p-power trace {trace} not divisible by {scale} at level {level} over {a.field.name}"
                )
            values[s, t] = (trace // scale) % p
    return values


def _levels(p: int, n: int) -> int:
    level = 0
    while p ** (level + 1) <= n:
        level += 1
    return level


def compute_radical(a: Algebra) -> Subspace:
    """Radical from the structure constants alone, ignoring how ``a`` was derived."""
    field = a.field
    rows = field.eye(a.dim)
    if a.dim == 0:
        return Subspace.zero(field, 0)
    rows = _trace_form_kernel(a, rows)
    if field.characteristic:
        for level in range(1, _levels(field.characteristic, a.dim) + 1):
            if rows.shape[0] == 0:
                break
            rows = _left_kernel(a, _p_power_functional(a, rows, level), rows)
    return Subspace.span(field, a.dim, rows)


def _derived_radical(a: Algebra) -> Subspace | None:
    origin = a.origin
    field = a.field
    if isinstance(origin, CornerOrigin):
        parent_rad = radical(origin.parent)
        e = origin.idempotent
        parent = origin.parent
        left, right = parent.left_matrix(e), parent.right_matrix(e)
        squeezed = [field.matmul(left, field.matmul(right, r)) for r in parent_rad.basis]
        return Subspace.span(field, a.dim, [origin.space.coordinates(v) for v in squeezed])
    if isinstance(origin, QuotientOrigin):
        parent_rad = radical(origin.parent)
        return Subspace.span(
            field, a.dim, [origin.ideal.project_to_quotient(r) for r in parent_rad.basis]
        )
    if isinstance(origin, OppositeOrigin):
        return radical(origin.parent)
    return None


def radical(a: Algebra) -> Subspace:
    """Jacobson radical as a canonical subspace of ``a``."""
    if "radical" in a.memo:
        return a.memo["radical"]
    rad = _derived_radical(a)
    if rad is None:
        rad = compute_radical(a)
        certify_radical(a, rad)
    a.memo["radical"] = rad
    logger.info(
        "radical_computed",
        extra={"algebra": a.name, "field": a.field.name, "status": f"dim={rad.dim}"},
    )
    return rad


def radical_power(a: Algebra, k: int) -> Subspace:
    """``rad^k``; ``rad^0`` is the whole algebra."""
    if k == 0:
        return Subspace.whole(a.field, a.dim)
    powers = a.memo.setdefault("radical_powers", {1: radical(a)})
    if k not in powers:
        powers[k] = product_space(a, radical_power(a, k - 1), powers[1])
    return powers[k]


def nilpotency_index(a: Algebra, space: Subspace) -> int | None:
    """Least ``k`` with ``space^k = 0``, or None when the powers stabilise above 0."""
    current = space
    k = 1
    while current.dim:
        following = product_space(a, current, space)
        if following.dim == current.dim:
            return None
        current = following
        k += 1
    return k


def certify_radical(a: Algebra, rad: Subspace) -> int:
    """Check ``rad`` is a nilpotent ideal with semisimple quotient; returns the nilpotency index."""
    if not is_two_sided_ideal(a, rad):
        raise InvariantViolation(f"radical of {a.name or 'algebra'} is not a two-sided ideal")
    index = nilpotency_index(a, rad)
    if index is None:
        raise InvariantViolation(f"radical of {a.name or 'algebra'} is not nilpotent")
    top = quotient_algebra(a, rad).algebra
    if compute_radical(top).dim:
        raise InvariantViolation(f"{a.name or 'algebra'} modulo its radical is not semisimple")
    return index


def loewy_length(a: Algebra) -> int:
    index = nilpotency_index(a, radical(a))
    return index if index is not None else 0
