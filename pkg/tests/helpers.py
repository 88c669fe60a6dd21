from __future__ import annotations

import random
import textwrap
from pathlib import Path

import numpy as np

import stratakit
from stratakit.algebra import Algebra
from stratakit.dsl import build_algebra, parse
from stratakit.fixtures import ExampleCatalog
from stratakit.fmod import FModule, indecomposable_projectives, quotient_module, top_and_radical
from stratakit.linalg import Subspace
from stratakit.models import InputDocument
from stratakit.settings import Settings

FIXTURES = Path(stratakit.__file__).parent / "fixtures"


def _settings(**overrides) -> Settings:
    return Settings(_env_file=None, **overrides)


def _document(text: str) -> InputDocument:
    return parse(textwrap.dedent(text))


def _algebra(text: str, name: str = "A") -> Algebra:
    return build_algebra(_document(text), name=name, config=_settings())


def _catalog() -> ExampleCatalog:
    return ExampleCatalog.from_yaml(FIXTURES / "catalog.yaml")


def _fixture_algebra(example: str, field_name: str | None = None) -> Algebra:
    return build_algebra(_catalog().document(example, field_name), name=example, config=_settings())


def _chain_text(n: int, field_name: str = "Q", relations: tuple[str, ...] = ()) -> str:
    lines = [f"field {field_name}", "quiver"]
    lines.extend(f"vertex {i}" for i in range(1, n + 1))
    lines.extend(f"arrow a{i} : {i} -> {i + 1}" for i in range(1, n))
    if relations:
        lines.append("relations")
        lines.extend(relations)
    return "\n".join(lines) + "\n"


def _random_acyclic_text(rng: random.Random, max_vertices: int = 6, max_arrows: int = 8) -> str:
    """Acyclic quiver on 1..n (arrows go up) with random length-two monomial relations."""
    n = rng.randint(2, max_vertices)
    count = rng.randint(1, max_arrows)
    arrows = []
    for k in range(count):
        i = rng.randint(1, n - 1)
        j = rng.randint(i + 1, n)
        arrows.append((f"a{k}", i, j))
    relations = []
    for first, _, mid in arrows:
        for second, start, _ in arrows:
            if start == mid and rng.random() < 0.5:
                relations.append(f"{second}*{first}")
    lines = [f"field {rng.choice(['Q', 'F2', 'F3'])}", "quiver"]
    lines.extend(f"vertex {i}" for i in range(1, n + 1))
    lines.extend(f"arrow {label} : {i} -> {j}" for label, i, j in arrows)
    if relations:
        lines.append("relations")
        lines.extend(relations)
    return "\n".join(lines) + "\n"


def _random_truncated_text(rng: random.Random) -> str:
    """Acyclic quiver with truncated loops; loops annihilate every arrow they meet."""
    n = rng.randint(2, 4)
    lines = [f"field {rng.choice(['Q', 'F2', 'F3'])}", "quiver"]
    lines.extend(f"vertex {i}" for i in range(1, n + 1))
    arrows = []
    for k in range(rng.randint(1, 4)):
        i = rng.randint(1, n - 1)
        arrows.append((f"a{k}", i, rng.randint(i + 1, n)))
    loops = [(f"x{v}", v) for v in range(1, n + 1) if rng.random() < 0.5]
    lines.extend(f"arrow {label} : {i} -> {j}" for label, i, j in arrows)
    lines.extend(f"arrow {label} : {v} -> {v}" for label, v in loops)
    relations = []
    for label, v in loops:
        relations.append("*".join([label] * rng.randint(2, 3)))
        for arrow, i, j in arrows:
            if i == v:
                relations.append(f"{arrow}*{label}")
            if j == v:
                relations.append(f"{label}*{arrow}")
    for first, _, mid in arrows:
        for second, start, _ in arrows:
            if start == mid and rng.random() < 0.5:
                relations.append(f"{second}*{first}")
    if relations:
        lines.append("relations")
        lines.extend(relations)
    return "\n".join(lines) + "\n"


def _random_ei_text(rng: random.Random) -> str:
    """Objects y -> x with cyclic automorphism groups; Hom(y, x) is a free or a fixed orbit.

    Group orders stay where the group algebra is split: order 3 only over F3.
    """
    field_name = rng.choice(["Q", "F2", "F3"])
    top = 3 if field_name == "F3" else 2
    m, n = rng.randint(1, top), rng.randint(1, top)
    free = rng.random() < 0.5
    lines = [f"field {field_name}", "eicategory", "object y", "object x"]
    lines += ["identity gy0 at y", "identity hx0 at x"]
    lines.extend(f"mor gy{i} : y -> y" for i in range(1, m))
    lines.extend(f"mor hx{i} : x -> x" for i in range(1, n))
    homs = [f"al{i}" for i in range(n)] if free else ["al0"]
    lines.extend(f"mor {label} : y -> x" for label in homs)

    def g(i: int) -> str:
        return f"gy{i % m}"

    def h(i: int) -> str:
        return f"hx{i % n}"

    for i in range(1, m):
        for j in range(1, m):
            lines.append(f"compose {g(i)} {g(j)} = {g(i + j)}")
    for i in range(1, n):
        for j in range(1, n):
            lines.append(f"compose {h(i)} {h(j)} = {h(i + j)}")
    for k, label in enumerate(homs):
        for i in range(1, n):
            lines.append(f"compose {h(i)} {label} = {homs[(k + i) % len(homs)]}")
        for i in range(1, m):
            lines.append(f"compose {label} {g(i)} = {label}")
    return "\n".join(lines) + "\n"


def _random_stratified_algebra(rng: random.Random) -> Algebra:
    maker = rng.choice([_random_acyclic_text, _random_truncated_text, _random_ei_text])
    text = maker(rng) if maker is not _random_acyclic_text else maker(rng, 4, 5)
    return _algebra(text)


def _random_module(a: Algebra, rng: random.Random) -> FModule:
    """``P / A v`` for an indecomposable projective ``P`` and a random ``v`` in its radical."""
    projectives = indecomposable_projectives(a)
    p = rng.choice(projectives)
    rad = top_and_radical(p).radical_space
    field_ = a.field
    if rad.dim == 0 or rng.random() < 0.25:
        return quotient_module(p, Subspace.zero(field_, p.dim), name="M")[0]
    coefficients = field_.random_array(rng, (rad.dim,))
    v = field_.matmul(coefficients, rad.basis)
    if not np.any(v):
        v = rad.basis[0].copy()
    generated = Subspace.span(field_, p.dim, p.orbit(v))
    return quotient_module(p, generated, name="M")[0]
