"""Exact linear algebra over prime fields and the rationals.

Every homological computation in the package reduces to the primitives
here: reduced row echelon form, kernels, solving, and subspaces kept in a
canonical echelon basis so that equality of subspaces is equality of
bases.

Entries live in numpy arrays. Over F_p with small p the dtype is int64 and
every operation reduces modulo p; over Q (and for very large p) the dtype is
``object`` holding ``Fraction`` (resp. Python ``int``) values.
"""

from __future__ import annotations

import bisect
import math
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence, Union

import numpy as np
from sympy import isprime

from stratakit.errors import DimensionMismatch, UnsupportedField

Raw = Union[int, Fraction]
Vector = np.ndarray

# int64 arithmetic stays exact while n * p^2 fits comfortably.
_INT64_PRIME_LIMIT = 1 << 25

_FIELD_PATTERN = re.compile(r"^(?:Q|QQ|F(?P<p>\d+)|GF\((?P<q>\d+)\))$")


@dataclass(frozen=True)
class FieldSpec:
    characteristic: int

    def __post_init__(self) -> None:
        p = self.characteristic
        if p < 0 or (p != 0 and not isprime(p)):
            raise UnsupportedField(f"characteristic must be 0 or a prime, got {p}")

    @classmethod
    def parse(cls, text: str) -> "FieldSpec":
        match = _FIELD_PATTERN.match(text.strip())
        if match is None:
            raise UnsupportedField(f"unknown field {text!r}; expected Q or F<p>")
        prime = match.group("p") or match.group("q")
        return cls(int(prime) if prime else 0)

    @property
    def name(self) -> str:
        return "Q" if self.characteristic == 0 else f"F{self.characteristic}"

    @property
    def dtype(self) -> type | np.dtype:
        p = self.characteristic
        if p and p < _INT64_PRIME_LIMIT:
            return np.int64
        return object

    def coerce(self, value: Raw | "Scalar" | str) -> Raw:
        if isinstance(value, Scalar):
            value = value.value
        if isinstance(value, str):
            value = Fraction(value)
        if isinstance(value, (np.integer,)):
            value = int(value)
        p = self.characteristic
        if p == 0:
            return Fraction(value)
        if isinstance(value, Fraction):
            if value.denominator % p == 0:
                raise UnsupportedField(f"{value} is not defined in {self.name}")
            return (value.numerator * pow(value.denominator, -1, p)) % p
        return int(value) % p

    def scalar(self, value: Raw | str) -> "Scalar":
        return Scalar(self, self.coerce(value))

    @property
    def zero(self) -> Raw:
        return Fraction(0) if self.characteristic == 0 else 0

    @property
    def one(self) -> Raw:
        return Fraction(1) if self.characteristic == 0 else 1

    def inv(self, value: Raw) -> Raw:
        if value == 0:
            raise ZeroDivisionError("inverse of zero")
        if self.characteristic == 0:
            return Fraction(1) / value
        return pow(int(value), -1, self.characteristic)

    def normalize(self, array: np.ndarray) -> np.ndarray:
        if self.characteristic:
            return array % self.characteristic
        return array

    def array(self, values: Iterable | np.ndarray, shape: tuple[int, ...] | None = None) -> np.ndarray:
        raw = np.array(values, dtype=object)
        if shape is not None:
            raw = raw.reshape(shape)
        flat = [self.coerce(v) for v in raw.ravel()]
        out = np.empty(len(flat), dtype=self.dtype)
        for i, v in enumerate(flat):
            out[i] = v
        return out.reshape(raw.shape)

    def zeros(self, shape: int | tuple[int, ...]) -> np.ndarray:
        if self.dtype is object:
            return np.full(shape, self.zero, dtype=object)
        return np.zeros(shape, dtype=self.dtype)

    def eye(self, n: int) -> np.ndarray:
        out = self.zeros((n, n))
        for i in range(n):
            out[i, i] = self.one
        return out

    def unit_vector(self, n: int, index: int) -> Vector:
        out = self.zeros(n)
        out[index] = self.one
        return out

    def matmul(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        if a.shape[-1] == 0:
            rows = a.shape[0] if a.ndim == 2 else 1
            cols = b.shape[1] if b.ndim == 2 else 1
            shape = tuple(s for s, keep in ((rows, a.ndim == 2), (cols, b.ndim == 2)) if keep)
            return self.zeros(shape)
        if self.characteristic == 0 and a.dtype == object and b.dtype == object:
            return _rational_matmul(a, b)
        return self.normalize(a @ b)

    def random_array(self, rng, shape: tuple[int, ...], bound: int = 3) -> np.ndarray:
        p = self.characteristic
        count = int(np.prod(shape)) if shape else 1
        if p:
            values = [rng.randrange(p) for _ in range(count)]
        else:
            values = [rng.randint(-bound, bound) for _ in range(count)]
        return self.array(values).reshape(shape)


def _integer_parts(array: np.ndarray) -> tuple[np.ndarray, int]:
    """Integer array ``n`` and denominator ``d`` with ``array == n / d``."""
    parts = [(v.numerator, v.denominator) if isinstance(v, Fraction) else (int(v), 1) for v in array.ravel()]
    d = math.lcm(*(den for _, den in parts))
    out = np.empty(len(parts), dtype=object)
    for i, (num, den) in enumerate(parts):
        out[i] = num * (d // den)
    return out.reshape(array.shape), d


def _rational_matmul(a: np.ndarray, b: np.ndarray) -> np.ndarray | Fraction:
    # Python ints multiply far faster than Fractions; divide once at the end.
    na, da = _integer_parts(a)
    nb, db = _integer_parts(b)
    product = na @ nb
    scale = da * db
    if not isinstance(product, np.ndarray):
        return Fraction(int(product), scale)
    out = np.empty(product.size, dtype=object)
    for i, v in enumerate(product.ravel()):
        out[i] = Fraction(int(v), scale)
    return out.reshape(product.shape)


@dataclass(frozen=True)
class Scalar:
    field: FieldSpec
    value: Raw

    def _other(self, other: "Scalar | Raw") -> Raw:
        if isinstance(other, Scalar):
            if other.field != self.field:
                raise DimensionMismatch("scalars from different fields")
            return other.value
        return self.field.coerce(other)

    def _wrap(self, value: Raw) -> "Scalar":
        return Scalar(self.field, self.field.coerce(value))

    def __add__(self, other: "Scalar | Raw") -> "Scalar":
        return self._wrap(self.value + self._other(other))

    __radd__ = __add__

    def __sub__(self, other: "Scalar | Raw") -> "Scalar":
        return self._wrap(self.value - self._other(other))

    def __rsub__(self, other: "Scalar | Raw") -> "Scalar":
        return self._wrap(self._other(other) - self.value)

    def __mul__(self, other: "Scalar | Raw") -> "Scalar":
        return self._wrap(self.value * self._other(other))

    __rmul__ = __mul__

    def __truediv__(self, other: "Scalar | Raw") -> "Scalar":
        return self._wrap(self.value * self.field.inv(self._other(other)))

    def __neg__(self) -> "Scalar":
        return self._wrap(-self.value)

    def inverse(self) -> "Scalar":
        return Scalar(self.field, self.field.inv(self.value))

    def __eq__(self, other: object) -> bool:
        if isinstance(other, Scalar):
            return self.field == other.field and self.value == other.value
        if isinstance(other, (int, Fraction)):
            return self.value == self.field.coerce(other)
        return NotImplemented

    def __hash__(self) -> int:
        return hash((self.field, self.value))

    def __str__(self) -> str:
        return format_raw(self.value)

    def to_json(self) -> int | str:
        return json_raw(self.value)


def format_raw(value: Raw) -> str:
    value = Fraction(value) if not isinstance(value, Fraction) else value
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


def json_raw(value: Raw) -> int | str:
    value = Fraction(int(value)) if isinstance(value, (int, np.integer)) else value
    if value.denominator == 1:
        return int(value.numerator)
    return f"{value.numerator}/{value.denominator}"


@dataclass(frozen=True, eq=False)
class Matrix:
    field: FieldSpec
    data: np.ndarray

    def __post_init__(self) -> None:
        if self.data.ndim != 2:
            raise DimensionMismatch(f"matrix data must be 2-dimensional, got shape {self.data.shape}")
        data = np.array(self.data, copy=True)
        data.setflags(write=False)
        object.__setattr__(self, "data", data)

    @classmethod
    def from_rows(cls, field: FieldSpec, rows: Sequence[Sequence[Raw | str]], cols: int | None = None) -> "Matrix":
        rows = [list(r) for r in rows]
        if not rows:
            return cls.zeros(field, 0, cols or 0)
        widths = {len(r) for r in rows}
        if len(widths) != 1:
            raise DimensionMismatch("ragged matrix rows")
        return cls(field, field.array(rows, shape=(len(rows), widths.pop())))

    @classmethod
    def from_columns(cls, field: FieldSpec, columns: Sequence[Vector], rows: int) -> "Matrix":
        if not columns:
            return cls.zeros(field, rows, 0)
        return cls(field, np.stack([np.asarray(c) for c in columns], axis=1).astype(field.dtype))

    @classmethod
    def zeros(cls, field: FieldSpec, rows: int, cols: int) -> "Matrix":
        return cls(field, field.zeros((rows, cols)))

    @classmethod
    def identity(cls, field: FieldSpec, n: int) -> "Matrix":
        return cls(field, field.eye(n))

    @property
    def rows(self) -> int:
        return self.data.shape[0]

    @property
    def cols(self) -> int:
        return self.data.shape[1]

    @property
    def entries(self) -> tuple[tuple[Scalar, ...], ...]:
        return tuple(tuple(Scalar(self.field, self.field.coerce(v)) for v in row) for row in self.data)

    def column(self, index: int) -> Vector:
        return self.data[:, index].copy()

    def _check(self, other: "Matrix") -> None:
        if other.field != self.field:
            raise DimensionMismatch("matrices over different fields")

    def __matmul__(self, other: "Matrix") -> "Matrix":
        self._check(other)
        if self.cols != other.rows:
            raise DimensionMismatch(f"cannot multiply {self.rows}x{self.cols} by {other.rows}x{other.cols}")
        return Matrix(self.field, self.field.matmul(self.data, other.data))

    def apply(self, vector: Vector) -> Vector:
        if self.cols != len(vector):
            raise DimensionMismatch(f"vector of length {len(vector)} for {self.rows}x{self.cols} matrix")
        return self.field.matmul(self.data, vector)

    def __add__(self, other: "Matrix") -> "Matrix":
        self._check(other)
        if self.data.shape != other.data.shape:
            raise DimensionMismatch("shape mismatch in addition")
        return Matrix(self.field, self.field.normalize(self.data + other.data))

    def __sub__(self, other: "Matrix") -> "Matrix":
        self._check(other)
        if self.data.shape != other.data.shape:
            raise DimensionMismatch("shape mismatch in subtraction")
        return Matrix(self.field, self.field.normalize(self.data - other.data))

    def scale(self, value: Raw) -> "Matrix":
        return Matrix(self.field, self.field.normalize(self.data * self.field.coerce(value)))

    def transpose(self) -> "Matrix":
        return Matrix(self.field, self.data.T.copy())

    def is_zero(self) -> bool:
        return not np.any(self.data)

    def rank(self) -> int:
        return len(rref(self)[1])

    def is_invertible(self) -> bool:
        return self.rows == self.cols and self.rank() == self.rows

    def inverse(self) -> "Matrix":
        if self.rows != self.cols:
            raise DimensionMismatch("only square matrices are invertible")
        n = self.rows
        reduced, pivots = rref(Matrix(self.field, np.hstack([self.data, self.field.eye(n)])))
        if pivots[:n] != list(range(n)):
            raise ZeroDivisionError("matrix is singular")
        return Matrix(self.field, reduced.data[:, n:].copy())

    def to_lists(self) -> list[list[int | str]]:
        return [[json_raw(v) for v in row] for row in self.data]

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Matrix):
            return NotImplemented
        return (
            self.field == other.field
            and self.data.shape == other.data.shape
            and bool(np.all(self.data == other.data))
        )

    def __hash__(self) -> int:
        return hash((self.field, self.data.shape, tuple(self.field.coerce(v) for v in self.data.ravel())))

    def __repr__(self) -> str:
        body = "; ".join(" ".join(format_raw(v) for v in row) for row in self.data)
        return f"Matrix[{self.field.name}]({self.rows}x{self.cols}: {body})"


def hstack(field: FieldSpec, blocks: Sequence[Matrix], rows: int) -> Matrix:
    if not blocks:
        return Matrix.zeros(field, rows, 0)
    return Matrix(field, np.hstack([b.data for b in blocks]))


def vstack(field: FieldSpec, blocks: Sequence[Matrix], cols: int) -> Matrix:
    if not blocks:
        return Matrix.zeros(field, 0, cols)
    return Matrix(field, np.vstack([b.data for b in blocks]))


def kron(a: Matrix, b: Matrix) -> Matrix:
    a._check(b)
    return Matrix(a.field, a.field.normalize(np.kron(a.data, b.data)))


def _rref_array(field: FieldSpec, array: np.ndarray) -> tuple[np.ndarray, list[int]]:
    a = field.normalize(np.array(array, dtype=field.dtype, copy=True))
    rows, cols = a.shape
    pivots: list[int] = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nonzero = np.nonzero(a[r:, c])[0]
        if nonzero.size == 0:
            continue
        k = r + int(nonzero[0])
        if k != r:
            a[[r, k]] = a[[k, r]]
        a[r] = field.normalize(a[r] * field.inv(a[r, c]))
        column = a[:, c].copy()
        column[r] = field.zero
        targets = np.nonzero(column)[0]
        if targets.size:
            a[targets] = field.normalize(a[targets] - np.outer(column[targets], a[r]))
        pivots.append(c)
        r += 1
    return a, pivots


def rref(m: Matrix) -> tuple[Matrix, list[int]]:
    """Reduced row echelon form and pivot columns; rank is ``len(pivots)``."""
    reduced, pivots = _rref_array(m.field, m.data)
    return Matrix(m.field, reduced), pivots


def kernel_basis(m: Matrix) -> list[Vector]:
    """Canonical basis of the right null space, one vector per free column."""
    field = m.field
    reduced, pivots = _rref_array(field, m.data)
    pivot_set = set(pivots)
    basis: list[Vector] = []
    for free in range(m.cols):
        if free in pivot_set:
            continue
        v = field.zeros(m.cols)
        v[free] = field.one
        for i, p in enumerate(pivots):
            v[p] = field.normalize(-reduced[i, free]) if field.characteristic else -reduced[i, free]
        basis.append(v)
    return basis


@dataclass(frozen=True)
class NoSolution:
    reason: str = "inconsistent system"


def solve(m: Matrix, b: Sequence[Raw] | Vector) -> Vector | NoSolution:
    """A particular solution of ``m x = b`` or :class:`NoSolution`."""
    field = m.field
    rhs = field.array(list(b)) if not isinstance(b, np.ndarray) else b.astype(field.dtype)
    if len(rhs) != m.rows:
        raise DimensionMismatch(f"right-hand side of length {len(rhs)} for {m.rows} rows")
    augmented = np.hstack([m.data, rhs.reshape(-1, 1)]) if m.rows else field.zeros((0, m.cols + 1))
    reduced, pivots = _rref_array(field, augmented)
    if m.cols in pivots:
        return NoSolution()
    x = field.zeros(m.cols)
    for i, p in enumerate(pivots):
        x[p] = reduced[i, m.cols]
    return x


@dataclass(frozen=True, eq=False)
class Subspace:
    """Subspace of ``field^ambient`` held as its canonical RREF row basis."""

    field: FieldSpec
    ambient: int
    basis: np.ndarray
    pivots: tuple[int, ...]

    @classmethod
    def span(cls, field: FieldSpec, ambient: int, vectors: Iterable[Vector] | np.ndarray) -> "Subspace":
        if isinstance(vectors, np.ndarray):
            stacked = vectors.reshape(-1, ambient) if vectors.size else field.zeros((0, ambient))
        else:
            vectors = list(vectors)
            for v in vectors:
                if len(v) != ambient:
                    raise DimensionMismatch(f"vector of length {len(v)} in ambient dimension {ambient}")
            stacked = np.vstack(vectors) if vectors else field.zeros((0, ambient))
        reduced, pivots = _rref_array(field, stacked)
        basis = reduced[: len(pivots)].copy()
        basis.setflags(write=False)
        return cls(field, ambient, basis, tuple(pivots))

    @classmethod
    def zero(cls, field: FieldSpec, ambient: int) -> "Subspace":
        return cls.span(field, ambient, [])

    @classmethod
    def whole(cls, field: FieldSpec, ambient: int) -> "Subspace":
        return cls.span(field, ambient, field.eye(ambient))

    @property
    def dim(self) -> int:
        return len(self.pivots)

    @property
    def vectors(self) -> list[Vector]:
        return [row.copy() for row in self.basis]

    def _check(self, other: "Subspace") -> None:
        if other.ambient != self.ambient or other.field != self.field:
            raise DimensionMismatch(f"ambient dimensions {self.ambient} and {other.ambient} differ")

    def reduce(self, vector: Vector) -> Vector:
        """Remainder of ``vector`` after eliminating the pivot coordinates."""
        if len(vector) != self.ambient:
            raise DimensionMismatch(f"vector of length {len(vector)} in ambient dimension {self.ambient}")
        if not self.pivots:
            return np.array(vector, dtype=self.field.dtype, copy=True)
        coords = np.asarray(vector)[list(self.pivots)]
        return self.field.normalize(vector - self.field.matmul(coords, self.basis))

    def reduce_rows(self, rows: np.ndarray) -> np.ndarray:
        if not self.pivots or rows.shape[0] == 0:
            return np.array(rows, dtype=self.field.dtype, copy=True)
        coords = rows[:, list(self.pivots)]
        return self.field.normalize(rows - self.field.matmul(coords, self.basis))

    def contains(self, vector: Vector) -> bool:
        return not np.any(self.reduce(vector))

    def coordinates(self, vector: Vector) -> Vector:
        """Coordinates of a member vector in the echelon basis."""
        return np.asarray(vector)[list(self.pivots)].copy()

    def coordinates_of_rows(self, rows: np.ndarray) -> np.ndarray:
        return rows[:, list(self.pivots)].copy()

    def is_subspace_of(self, other: "Subspace") -> bool:
        self._check(other)
        return not np.any(other.reduce_rows(self.basis))

    def sum(self, other: "Subspace") -> "Subspace":
        self._check(other)
        return Subspace.span(self.field, self.ambient, np.vstack([self.basis, other.basis]))

    def intersection(self, other: "Subspace") -> "Subspace":
        self._check(other)
        if self.dim == 0 or other.dim == 0:
            return Subspace.zero(self.field, self.ambient)
        residues = other.reduce_rows(self.basis)
        combos = kernel_basis(Matrix(self.field, residues.T.copy()))
        if not combos:
            return Subspace.zero(self.field, self.ambient)
        vectors = self.field.matmul(np.vstack(combos), self.basis)
        return Subspace.span(self.field, self.ambient, vectors)

    def complement_indices(self) -> list[int]:
        pivot_set = set(self.pivots)
        return [i for i in range(self.ambient) if i not in pivot_set]

    def quotient_basis(self, sub: "Subspace") -> "Subspace":
        """Canonical representatives of ``self / sub`` (reduced modulo ``sub``)."""
        self._check(sub)
        return Subspace.span(self.field, self.ambient, sub.reduce_rows(self.basis))

    def project_to_quotient(self, vector: Vector) -> Vector:
        """Coordinates of ``vector + self`` in the standard complement basis."""
        return self.reduce(vector)[self.complement_indices()]

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Subspace):
            return NotImplemented
        return (
            self.field == other.field
            and self.ambient == other.ambient
            and self.pivots == other.pivots
            and bool(np.all(self.basis == other.basis))
        )

    def __hash__(self) -> int:
        return hash((self.field, self.ambient, self.pivots))

    def __repr__(self) -> str:
        return f"Subspace(dim={self.dim}, ambient={self.ambient}, field={self.field.name})"


def image_basis(m: Matrix) -> Subspace:
    """Column space of ``m`` as a canonical subspace of ``field^rows``."""
    return Subspace.span(m.field, m.rows, m.data.T.copy())


def subspace_ops(span_a: Subspace, span_b: Subspace) -> dict[str, Subspace]:
    """Intersection, sum and quotient of two spans sharing an ambient space."""
    span_a._check(span_b)
    return {
        "intersection": span_a.intersection(span_b),
        "sum": span_a.sum(span_b),
        "quotient": span_a.quotient_basis(span_b),
    }


class EchelonBuilder:
    """Echelon basis grown one vector at a time.

    Rows are normalised to 1 at their leading column and never rewritten, so
    reducing in increasing pivot order is exact.
    """

    def __init__(self, field: FieldSpec, ambient: int) -> None:
        self.field = field
        self.ambient = ambient
        self._pivots: list[int] = []
        self._rows: dict[int, Vector] = {}

    def __len__(self) -> int:
        return len(self._pivots)

    def reduce(self, vector: Vector) -> Vector:
        field = self.field
        v = field.normalize(np.array(vector, dtype=field.dtype, copy=True))
        for pivot in self._pivots:
            c = v[pivot]
            if c:
                v = field.normalize(v - c * self._rows[pivot])
        return v

    def add(self, vector: Vector) -> bool:
        v = self.reduce(vector)
        nonzero = np.nonzero(v)[0]
        if nonzero.size == 0:
            return False
        pivot = int(nonzero[0])
        self._rows[pivot] = self.field.normalize(v * self.field.inv(v[pivot]))
        bisect.insort(self._pivots, pivot)
        return True

    def contains(self, vector: Vector) -> bool:
        return not np.any(self.reduce(vector))

    def subspace(self) -> Subspace:
        return Subspace.span(self.field, self.ambient, [self._rows[p] for p in self._pivots])
