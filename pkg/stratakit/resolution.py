"""Minimal projective resolutions and the dimensions read off them.

Stage ``k`` covers the syzygy ``Omega^k`` (``Omega^0 = M``) by ``P^k``.
Infinite projective dimension is only claimed with a periodicity
certificate: ``Omega^i`` is isomorphic to, or a split summand of,
``Omega^j`` for some ``0 < i < j``.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Literal, Optional, Union

import numpy as np

from stratakit.algebra import Algebra, OppositeOrigin, opposite
from stratakit.errors import DimensionMismatch
from stratakit.fmod import (
    FModule,
    IsoYes,
    ModuleMap,
    ProjectiveCover,
    indecomposable_projectives,
    is_isomorphic,
    is_projective,
    projective_cover,
    simple_multiplicities,
    simples,
    socle,
    split_embedding,
    submodule,
    top_and_radical,
)
from stratakit.idempotents import class_representatives
from stratakit.linalg import Matrix, Subspace, Vector
from stratakit.metrics import CERTIFICATES, RESOLUTION_STAGES
from stratakit.settings import Settings
from stratakit.settings import settings as default_settings

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class PeriodicityCertificate:
    kind: Literal["isomorphism", "split_summand"]
    first: int
    second: int
    forward: ModuleMap
    backward: ModuleMap

    def describe(self) -> str:
        if self.kind == "isomorphism":
            return f"Omega^{self.first} ~= Omega^{self.second}"
        return f"Omega^{self.first} is a direct summand of Omega^{self.second}"


@dataclass(frozen=True)
class Finite:
    length: int


@dataclass(frozen=True, eq=False)
class CertifiedInfinite:
    first: int
    second: int
    certificate: PeriodicityCertificate


@dataclass(frozen=True)
class Cutoff:
    depth: int


ResolutionStatus = Union[Finite, CertifiedInfinite, Cutoff]


@dataclass(frozen=True, eq=False)
class ResolutionStage:
    index: int
    syzygy: FModule
    inclusion: Optional[ModuleMap]
    cover: ProjectiveCover

    @property
    def term(self) -> FModule:
        return self.cover.projective

    @property
    def differential(self) -> ModuleMap:
        """``P^k -> P^(k-1)``, or the augmentation ``P^0 -> M`` at stage 0."""
        if self.inclusion is None:
            return self.cover.epi
        return self.inclusion.compose(self.cover.epi)


@dataclass(frozen=True, eq=False)
class Resolution:
    module: FModule
    stages: tuple[ResolutionStage, ...]
    status: ResolutionStatus
    next_syzygy: FModule

    @property
    def terms(self) -> list[FModule]:
        return [s.term for s in self.stages]

    def term_labels(self) -> list[list[str]]:
        return [[s.label for s in stage.cover.summands] for stage in self.stages]

    def reaches(self, index: int) -> bool:
        """True when ``P^index`` is known (computed, or zero past a finite end)."""
        return index < len(self.stages) or isinstance(self.status, Finite)

    def generator_components(self, k: int) -> list[list[Vector]]:
        """``z[s][t]``: component in summand ``t`` of ``P^(k-1)`` of the image of generator ``s`` of ``P^k``."""
        stage, previous = self.stages[k], self.stages[k - 1]
        rows = []
        for summand in stage.cover.summands:
            image = stage.inclusion.apply(summand.generator_image)
            rows.append(previous.cover.components(image))
        return rows


def _find_certificate(stages: list[ResolutionStage], config: Settings) -> PeriodicityCertificate | None:
    k = len(stages) - 1
    current = stages[k].syzygy
    for i in range(1, k):
        result = is_isomorphic(stages[i].syzygy, current, config=config)
        if isinstance(result, IsoYes):
            return PeriodicityCertificate("isomorphism", i, k, result.certificate, result.certificate.inverse())
    for i in range(1, k):
        earlier = stages[i].syzygy
        if earlier.dim >= current.dim:
            continue
        split = split_embedding(earlier, current, config=config)
        if split is not None:
            return PeriodicityCertificate("split_summand", i, k, split.inclusion, split.retraction)
    return None


def minimal_resolution(
    m: FModule, cutoff: int | None = None, min_length: int = 0, config: Settings | None = None
) -> Resolution:
    """Iterated projective covers of syzygies.

    Stops at a zero syzygy, at the first periodicity certificate once
    ``min_length`` terms exist, or after ``P^cutoff``.
    """
    config = config or default_settings
    cutoff = config.cutoff if cutoff is None else cutoff
    if cutoff < 1:
        raise ValueError("cutoff must be at least 1")
    cache = m.memo.setdefault("resolutions", {})
    if (cutoff, min_length) in cache:
        return cache[(cutoff, min_length)]

    stages: list[ResolutionStage] = []
    syzygy, inclusion = m, None
    certificate = None
    status: ResolutionStatus | None = None
    k = 0
    while True:
        cover = projective_cover(syzygy)
        stages.append(ResolutionStage(k, syzygy, inclusion, cover))
        RESOLUTION_STAGES.inc()
        logger.debug(
            "resolution_stage",
            extra={"module_name": m.name, "stage": k, "status": f"dim={cover.projective.dim}"},
        )
        if certificate is None and k >= 2:
            certificate = _find_certificate(stages, config)
            if certificate is not None:
                CERTIFICATES.labels(kind=certificate.kind).inc()
                logger.info(
                    "periodicity_certified",
                    extra={"module_name": m.name, "stage": k, "status": certificate.describe()},
                )
        next_syzygy, next_inclusion = submodule(cover.projective, cover.epi.kernel(), name=f"Omega^{k + 1}")
        if next_syzygy.dim == 0:
            status = Finite(k)
            break
        if k >= cutoff or (certificate is not None and len(stages) >= min_length):
            break
        syzygy, inclusion = next_syzygy, next_inclusion
        k += 1
    if status is None:
        status = (
            CertifiedInfinite(certificate.first, certificate.second, certificate)
            if certificate is not None
            else Cutoff(k)
        )
    resolution = Resolution(m, tuple(stages), status, next_syzygy)
    cache[(cutoff, min_length)] = resolution
    return resolution


def verify_certificate(res: Resolution, certificate: PeriodicityCertificate | None = None) -> bool:
    """Re-check a periodicity certificate from scratch."""
    if certificate is None:
        if not isinstance(res.status, CertifiedInfinite):
            return False
        certificate = res.status.certificate
    source = res.stages[certificate.first].syzygy
    target = res.stages[certificate.second].syzygy
    forward, backward = certificate.forward, certificate.backward
    if forward.source is not source or forward.target is not target or backward.target is not source:
        return False
    if source.dim == 0 or certificate.first >= certificate.second:
        return False
    if not (forward.is_homomorphism() and backward.is_homomorphism()):
        return False
    composite = backward.compose(forward).matrix
    if not np.all(composite == source.algebra.field.eye(source.dim)):
        return False
    return certificate.kind == "split_summand" or forward.is_isomorphism()


@dataclass(frozen=True)
class ResolutionEvidence:
    exact: bool
    projective: bool
    minimal: bool
    failures: tuple[str, ...]

    @property
    def ok(self) -> bool:
        return self.exact and self.projective and self.minimal


def verify_resolution(res: Resolution) -> ResolutionEvidence:
    """Exactness, projectivity of every term, and minimality of every differential."""
    failures: list[str] = []
    stages = res.stages
    if not stages[0].differential.is_surjective():
        failures.append("augmentation is not surjective")
    for k, stage in enumerate(stages):
        kernel = stage.differential.kernel()
        if k + 1 < len(stages):
            image = stages[k + 1].differential.image()
            if kernel != image:
                failures.append(f"not exact at P^{k}")
        elif isinstance(res.status, Finite) and kernel.dim:
            failures.append(f"last differential from P^{k} is not injective")
    exact = not failures
    projective = True
    for k, stage in enumerate(stages):
        if not is_projective(stage.term):
            projective = False
            failures.append(f"P^{k} is not projective")
    minimal = True
    for k in range(1, len(stages)):
        image = stages[k].differential.image()
        if not image.is_subspace_of(top_and_radical(stages[k - 1].term).radical_space):
            minimal = False
            failures.append(f"image of P^{k} is not in the radical of P^{k - 1}")
    return ResolutionEvidence(exact, projective, minimal, tuple(failures))


# -- dimensions --------------------------------------------------------------


@dataclass(frozen=True)
class DimensionStatus:
    status: Literal["finite", "infinite", "unknown"]
    value: Optional[int] = None
    evidence: str = ""

    @classmethod
    def finite(cls, value: int, evidence: str = "") -> "DimensionStatus":
        return cls("finite", value, evidence)

    @classmethod
    def infinite(cls, evidence: str = "") -> "DimensionStatus":
        return cls("infinite", None, evidence)

    @classmethod
    def unknown(cls, evidence: str = "") -> "DimensionStatus":
        return cls("unknown", None, evidence)

    @property
    def is_finite(self) -> bool:
        return self.status == "finite"

    def to_json(self) -> dict:
        return {"status": self.status, "value": self.value}

    def __str__(self) -> str:
        return str(self.value) if self.is_finite else self.status


def status_to_dimension(status: ResolutionStatus) -> DimensionStatus:
    if isinstance(status, Finite):
        return DimensionStatus.finite(status.length)
    if isinstance(status, CertifiedInfinite):
        return DimensionStatus.infinite(status.certificate.describe())
    return DimensionStatus.unknown(f"no certificate up to P^{status.depth}")


def proj_dim(m: FModule, cutoff: int | None = None, config: Settings | None = None) -> DimensionStatus:
    return status_to_dimension(minimal_resolution(m, cutoff, config=config).status)


def gl_dim(a: Algebra, cutoff: int | None = None, config: Settings | None = None) -> DimensionStatus:
    """Maximum projective dimension over the simple modules."""
    found: list[tuple[str, DimensionStatus]] = [
        (s.name, proj_dim(s, cutoff, config)) for s in simples(a)
    ]
    infinite = [(name, d) for name, d in found if d.status == "infinite"]
    if infinite:
        name, d = infinite[0]
        return DimensionStatus.infinite(f"{name}: {d.evidence}")
    unknown = [name for name, d in found if d.status == "unknown"]
    if unknown:
        return DimensionStatus.unknown("no certificate for " + ", ".join(unknown))
    return DimensionStatus.finite(max((d.value for _, d in found), default=0))


# -- Ext and Tor -------------------------------------------------------------


def _peirce_block(n: FModule, e: Vector) -> tuple[np.ndarray, np.ndarray]:
    """Basis columns of ``e N`` and the read-off ``N -> e N``."""
    projector = n.act(e)
    space = Subspace.span(n.algebra.field, n.dim, projector.T.copy())
    return space.basis.T.copy(), projector[list(space.pivots), :].copy()


def _block_matrix(n: FModule, components: list[list[Vector]], rows_from, cols_from, transpose: bool) -> np.ndarray:
    """Assemble the matrix whose ``(s, t)`` block is ``read_s rho(z) cols_t``."""
    field_ = n.algebra.field
    row_blocks = [_peirce_block(n, e) for e in rows_from]
    col_blocks = [_peirce_block(n, e) for e in cols_from]
    heights = [r.shape[0] for _, r in row_blocks]
    widths = [c.shape[1] for c, _ in col_blocks]
    out = field_.zeros((sum(heights), sum(widths)))
    row_offsets = np.cumsum([0] + heights[:-1]).tolist()
    col_offsets = np.cumsum([0] + widths[:-1]).tolist()
    for s, (_, read) in enumerate(row_blocks):
        for t, (cols, _) in enumerate(col_blocks):
            z = components[t][s] if transpose else components[s][t]
            if not np.any(z) or read.shape[0] == 0 or cols.shape[1] == 0:
                continue
            block = field_.matmul(read, field_.matmul(n.act(z), cols))
            out[row_offsets[s] : row_offsets[s] + heights[s], col_offsets[t] : col_offsets[t] + widths[t]] = block
    return out


def _rank(field_, matrix: np.ndarray) -> int:
    if matrix.size == 0:
        return 0
    return Matrix(field_, matrix).rank()


def _summand_idempotents(res: Resolution, k: int) -> list[Vector]:
    return [s.idempotent for s in res.stages[k].cover.summands]


def _chain_dim(res: Resolution, n: FModule, k: int) -> int:
    if k >= len(res.stages):
        return 0
    return sum(_rank(n.algebra.field, n.act(e)) for e in _summand_idempotents(res, k))


def _cochain_rank(res: Resolution, n: FModule, k: int) -> int:
    """Rank of ``Hom(P^k, N) -> Hom(P^(k+1), N)``."""
    if k < 0 or k + 1 >= len(res.stages):
        return 0
    matrix = _block_matrix(
        n, res.generator_components(k + 1), _summand_idempotents(res, k + 1), _summand_idempotents(res, k), False
    )
    return _rank(n.algebra.field, matrix)


def ext_n(
    m: FModule, n: FModule, degree: int, cutoff: int | None = None, config: Settings | None = None
) -> int | None:
    """``dim Ext^degree(m, n)``, or None when the resolution stops before ``P^(degree+1)``."""
    if degree < 0:
        raise ValueError("degree must be non-negative")
    if m.algebra is not n.algebra:
        raise DimensionMismatch("Ext between modules over different algebras")
    return ext_from_resolution(minimal_resolution(m, cutoff, min_length=degree + 2, config=config), n, degree)


def ext_from_resolution(res: Resolution, n: FModule, degree: int) -> int | None:
    """``dim Ext^degree`` read off an existing resolution of the first argument."""
    if not res.reaches(degree + 1):
        return None
    return _chain_dim(res, n, degree) - _cochain_rank(res, n, degree) - _cochain_rank(res, n, degree - 1)


def _chain_rank(res: Resolution, y: FModule, k: int) -> int:
    """Rank of ``P_k (x) Y -> P_(k-1) (x) Y``."""
    if k < 1 or k >= len(res.stages):
        return 0
    matrix = _block_matrix(
        y, res.generator_components(k), _summand_idempotents(res, k - 1), _summand_idempotents(res, k), True
    )
    return _rank(y.algebra.field, matrix)


def tor_n(
    right: FModule, left: FModule, degree: int, cutoff: int | None = None, config: Settings | None = None
) -> int | None:
    """``dim Tor_degree(right, left)`` with ``right`` given as a left module over the opposite algebra."""
    if degree < 0:
        raise ValueError("degree must be non-negative")
    origin = right.algebra.origin
    if not isinstance(origin, OppositeOrigin) or origin.parent is not left.algebra:
        raise DimensionMismatch("right module must live over the opposite of the left module's algebra")
    return tor_from_resolution(minimal_resolution(right, cutoff, min_length=degree + 2, config=config), left, degree)


def tor_from_resolution(res: Resolution, left: FModule, degree: int) -> int | None:
    if not res.reaches(degree + 1):
        return None
    return _chain_dim(res, left, degree) - _chain_rank(res, left, degree) - _chain_rank(res, left, degree + 1)


# -- self-injectivity --------------------------------------------------------


def _socle_classes(a: Algebra) -> list[Optional[str]]:
    """Per indecomposable projective, the class of its socle when the socle is simple."""
    found: list[Optional[str]] = []
    for projective in indecomposable_projectives(a):
        counts = simple_multiplicities(projective, socle(projective))
        nonzero = [label for label, c in counts.items() if c]
        found.append(nonzero[0] if len(nonzero) == 1 and counts[nonzero[0]] == 1 else None)
    return found


def nakayama_permutation(a: Algebra) -> dict[str, str] | None:
    """Top class -> socle class of each indecomposable projective, when this is a permutation."""
    if "nakayama_permutation" in a.memo:
        return a.memo["nakayama_permutation"]
    result = None
    labels = [rep.label for rep in class_representatives(a)]
    left = _socle_classes(a)
    if None not in left and len(set(left)) == len(left):
        op = a.memo.get("opposite")
        if op is None:
            op = opposite(a, verify=False)
            a.memo["opposite"] = op
        right = _socle_classes(op)
        if None not in right and len(set(right)) == len(right):
            result = dict(zip(labels, left))
    a.memo["nakayama_permutation"] = result
    return result


def is_self_injective(a: Algebra) -> bool:
    return nakayama_permutation(a) is not None
