from __future__ import annotations

import itertools
import random
from fractions import Fraction

import numpy as np
import pytest

from stratakit.errors import DimensionMismatch, UnsupportedField
from stratakit.linalg import (
    FieldSpec,
    Matrix,
    NoSolution,
    Subspace,
    image_basis,
    kernel_basis,
    kron,
    solve,
    subspace_ops,
)

F2 = FieldSpec.parse("F2")
F5 = FieldSpec.parse("F5")
Q = FieldSpec.parse("Q")


def _vectors(field: FieldSpec, n: int):
    for values in itertools.product(range(field.characteristic), repeat=n):
        yield field.array(list(values))


def _random_matrix(rng: random.Random, rows: int, cols: int) -> Matrix:
    return Matrix(F2, F2.random_array(rng, (rows, cols)))


def test_field_parse_accepts_rationals_and_primes():
    assert FieldSpec.parse("Q").name == "Q"
    assert FieldSpec.parse("F7").characteristic == 7
    assert FieldSpec.parse("GF(3)").name == "F3"


def test_field_parse_rejects_non_prime():
    with pytest.raises(UnsupportedField):
        FieldSpec.parse("F4")
    with pytest.raises(UnsupportedField):
        FieldSpec.parse("R")


def test_coerce_rejects_denominators_divisible_by_p():
    assert F2.coerce("3/5") == 1
    with pytest.raises(UnsupportedField, match="1/2 is not defined in F2"):
        F2.coerce("1/2")


def test_scalar_arithmetic_mod_p():
    three = F5.scalar(3)
    assert three * 2 == 1
    assert three.inverse() == 2
    assert (three + 4) == 2
    assert -three == 2


def test_scalar_fraction_serialises_as_string():
    half = Q.scalar("1/2")
    assert half.to_json() == "1/2"
    assert (half + half).to_json() == 1
    assert str(Q.scalar(Fraction(-3, 4))) == "-3/4"


def test_matrix_inverse_over_rationals():
    m = Matrix.from_rows(Q, [[2, 1], [1, 1]])
    inverse = m.inverse()
    assert (m @ inverse) == Matrix.identity(Q, 2)
    assert inverse.to_lists() == [[1, -1], [-1, 2]]


def test_matrix_inverse_keeps_fractions_exact():
    m = Matrix.from_rows(Q, [[2, 0], [0, 4]])
    assert m.inverse().to_lists() == [["1/2", 0], [0, "1/4"]]


def test_rational_products_match_fraction_arithmetic():
    rng = random.Random(3)
    values = [Fraction(rng.randint(-9, 9), rng.randint(1, 6)) for _ in range(12)]
    a = Matrix.from_rows(Q, [values[0:3], values[3:6]])
    b = Matrix.from_rows(Q, [values[6:8], values[8:10], values[10:12]])
    expected = [
        [sum((a.data[i, k] * b.data[k, j] for k in range(3)), Fraction(0)) for j in range(2)]
        for i in range(2)
    ]
    product = a @ b
    assert product == Matrix.from_rows(Q, expected)
    assert all(isinstance(v, Fraction) for v in product.data.ravel())
    assert Q.matmul(a.data[0], b.data[:, 1]) == expected[0][1]
    assert Matrix.from_rows(Q, [["1/2", "1/3"]]).apply(Q.array([2, 3])).tolist() == [Fraction(2)]


def test_singular_matrix_is_not_invertible():
    m = Matrix.from_rows(F2, [[1, 1], [1, 1]])
    assert m.rank() == 1
    assert not m.is_invertible()
    with pytest.raises(ZeroDivisionError):
        m.inverse()


def test_kron_dimensions():
    a = Matrix.identity(Q, 2)
    b = Matrix.from_rows(Q, [[1, 2, 3]])
    product = kron(a, b)
    assert (product.rows, product.cols) == (2, 6)
    assert product.rank() == 2


def test_ragged_rows_are_rejected():
    with pytest.raises(DimensionMismatch):
        Matrix.from_rows(Q, [[1, 2], [3]])


def test_subspace_equality_is_basis_independent():
    first = Subspace.span(Q, 3, [Q.array([1, 1, 0]), Q.array([0, 1, 1])])
    second = Subspace.span(Q, 3, [Q.array([1, 2, 1]), Q.array([1, 0, -1])])
    assert first == second
    assert first.dim == 2


def test_subspace_intersection_and_sum():
    xy = Subspace.span(Q, 3, [Q.array([1, 0, 0]), Q.array([0, 1, 0])])
    yz = Subspace.span(Q, 3, [Q.array([0, 1, 0]), Q.array([0, 0, 1])])
    assert xy.intersection(yz) == Subspace.span(Q, 3, [Q.array([0, 1, 0])])
    assert xy.sum(yz) == Subspace.whole(Q, 3)
    assert xy.quotient_basis(xy.intersection(yz)).dim == 1
    ops = subspace_ops(xy, yz)
    assert ops["intersection"] == xy.intersection(yz)
    assert ops["quotient"] == Subspace.span(Q, 3, [Q.array([1, 0, 0])])


def test_matrix_from_columns():
    m = Matrix.from_columns(Q, [Q.array([1, 2]), Q.array([3, 4])], rows=2)
    assert np.all(m.data == Matrix.from_rows(Q, [[1, 3], [2, 4]]).data)
    assert Matrix.from_columns(Q, [], rows=2).cols == 0
    assert Matrix.zeros(Q, 2, 2).is_zero()
    assert not m.is_zero()


def test_image_basis_is_column_space():
    m = Matrix.from_rows(Q, [[1, 2], [2, 4], [0, 0]])
    assert image_basis(m) == Subspace.span(Q, 3, [Q.array([1, 2, 0])])


def test_solve_reports_inconsistency():
    m = Matrix.from_rows(Q, [[1, 1], [1, 1]])
    assert isinstance(solve(m, [1, 2]), NoSolution)
    x = solve(m, [2, 2])
    assert np.all(Q.matmul(m.data, x) == Q.array([2, 2]))


def test_kernel_matches_enumeration_over_f2():
    rng = random.Random(11)
    for _ in range(60):
        rows, cols = rng.randint(1, 4), rng.randint(1, 4)
        m = _random_matrix(rng, rows, cols)
        kernel = Subspace.span(F2, cols, kernel_basis(m))
        solutions = [v for v in _vectors(F2, cols) if not np.any(F2.matmul(m.data, v))]
        assert len(solutions) == 2 ** kernel.dim
        assert all(kernel.contains(v) for v in solutions)


def test_solve_matches_enumeration_over_f2():
    rng = random.Random(12)
    for _ in range(60):
        rows, cols = rng.randint(1, 4), rng.randint(1, 4)
        m = _random_matrix(rng, rows, cols)
        b = F2.random_array(rng, (rows,))
        exists = any(np.all(F2.matmul(m.data, v) == b) for v in _vectors(F2, cols))
        result = solve(m, b)
        if exists:
            assert not isinstance(result, NoSolution)
            assert np.all(F2.matmul(m.data, result) == b)
        else:
            assert isinstance(result, NoSolution)


def test_subspace_operations_match_enumeration_over_f2():
    rng = random.Random(13)
    for _ in range(40):
        n = rng.randint(1, 4)
        a = Subspace.span(F2, n, [F2.random_array(rng, (n,)) for _ in range(rng.randint(0, 3))])
        b = Subspace.span(F2, n, [F2.random_array(rng, (n,)) for _ in range(rng.randint(0, 3))])
        members_a = {tuple(v) for v in _vectors(F2, n) if a.contains(v)}
        members_b = {tuple(v) for v in _vectors(F2, n) if b.contains(v)}
        meet = a.intersection(b)
        assert {tuple(v) for v in _vectors(F2, n) if meet.contains(v)} == members_a & members_b
        join = a.sum(b)
        sums = {tuple((np.array(x) + np.array(y)) % 2) for x in members_a for y in members_b}
        assert {tuple(v) for v in _vectors(F2, n) if join.contains(v)} == sums
        assert len(members_a) == 2 ** a.dim
