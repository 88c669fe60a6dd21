from __future__ import annotations

from enum import Enum
from fractions import Fraction
from typing import Any

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

_LABEL = r"^[A-Za-z0-9_][A-Za-z0-9_'.]*$"
_ARROW = r"^[A-Za-z_][A-Za-z0-9_']*$"


def normalize_number(value: Any) -> str:
    """Integer or fraction in lowest terms, e.g. ``"-1/2"``."""
    number = Fraction(str(value).strip())
    if number.denominator == 1:
        return str(number.numerator)
    return f"{number.numerator}/{number.denominator}"


class OutputFormat(str, Enum):
    TEXT = "text"
    JSON = "json"


class ArrowDecl(BaseModel):
    model_config = ConfigDict(extra="forbid")

    label: str = Field(pattern=_ARROW)
    source: str = Field(pattern=_LABEL)
    target: str = Field(pattern=_LABEL)


class QuiverBlock(BaseModel):
    model_config = ConfigDict(extra="forbid")

    vertices: list[str] = Field(default_factory=list)
    arrows: list[ArrowDecl] = Field(default_factory=list)


class RelationTerm(BaseModel):
    model_config = ConfigDict(extra="forbid")

    coefficient: str = "1"
    word: list[str] = Field(min_length=1)

    @field_validator("coefficient", mode="before")
    @classmethod
    def _exact(cls, value: Any) -> str:
        return normalize_number(value)


class RelationDecl(BaseModel):
    model_config = ConfigDict(extra="forbid")

    terms: list[RelationTerm] = Field(min_length=1)


class MorphismDecl(BaseModel):
    model_config = ConfigDict(extra="forbid")

    label: str = Field(pattern=_LABEL)
    source: str = Field(pattern=_LABEL)
    target: str = Field(pattern=_LABEL)


class CompositionDecl(BaseModel):
    model_config = ConfigDict(extra="forbid")

    outer: str
    inner: str
    result: str


class IdentityDecl(BaseModel):
    model_config = ConfigDict(extra="forbid")

    label: str = Field(pattern=_LABEL)
    obj: str = Field(pattern=_LABEL)


class EICategoryBlock(BaseModel):
    model_config = ConfigDict(extra="forbid")

    objects: list[str] = Field(default_factory=list)
    identities: list[IdentityDecl] = Field(default_factory=list)
    morphisms: list[MorphismDecl] = Field(default_factory=list)
    compositions: list[CompositionDecl] = Field(default_factory=list)


class ActionDecl(BaseModel):
    model_config = ConfigDict(extra="forbid")

    label: str
    matrix: list[list[str]] = Field(default_factory=list)

    @field_validator("matrix", mode="before")
    @classmethod
    def _exact_entries(cls, value: Any) -> list[list[str]]:
        return [[normalize_number(entry) for entry in row] for row in value]


class ModuleDecl(BaseModel):
    model_config = ConfigDict(extra="forbid")

    name: str = Field(pattern=_ARROW)
    dims: dict[str, int] = Field(default_factory=dict)
    actions: list[ActionDecl] = Field(default_factory=list)

    @field_validator("dims")
    @classmethod
    def _non_negative(cls, value: dict[str, int]) -> dict[str, int]:
        for vertex, d in value.items():
            if d < 0:
                raise ValueError(f"negative dimension at {vertex}")
        return value


class InputDocument(BaseModel):
    model_config = ConfigDict(extra="forbid")

    field: str = "Q"
    quiver: QuiverBlock | None = None
    relations: list[RelationDecl] = Field(default_factory=list)
    eicategory: EICategoryBlock | None = None
    modules: list[ModuleDecl] = Field(default_factory=list)
    analyses: list[str] = Field(default_factory=list)

    @model_validator(mode="after")
    def _one_presentation(self) -> "InputDocument":
        if (self.quiver is None) == (self.eicategory is None):
            raise ValueError("exactly one of quiver and eicategory is required")
        if self.relations and self.quiver is None:
            raise ValueError("relations need a quiver")
        return self

    def module(self, name: str) -> ModuleDecl | None:
        for m in self.modules:
            if m.name == name:
                return m
        return None


class OracleEntry(BaseModel):
    model_config = ConfigDict(extra="forbid")

    obj: str = Field(min_length=1)
    value: int = Field(ge=0)

    @classmethod
    def parse(cls, text: str) -> "OracleEntry":
        obj, sep, value = text.partition("=")
        if not sep:
            raise ValueError(f"oracle entry {text!r} must look like obj=d")
        return cls(obj=obj.strip(), value=int(value))


class RunOptions(BaseModel):
    model_config = ConfigDict(extra="forbid")

    cutoff: int | None = Field(default=None, ge=1)
    tor_depth: int | None = Field(default=None, ge=0)
    seed: int | None = Field(default=None, ge=0)
    field: str | None = None
    oracle: list[OracleEntry] = Field(default_factory=list)
    stratification: str | None = None


class AnalysisSection(BaseModel):
    command: str
    arguments: list[str] = Field(default_factory=list)
    result: dict[str, Any] = Field(default_factory=dict)
    error: str | None = None


class Report(BaseModel):
    input: str
    analyses: list[AnalysisSection] = Field(default_factory=list)
    version: str
    seed: int


class CatalogEntry(BaseModel):
    model_config = ConfigDict(extra="forbid")

    name: str
    file: str
    description: str = ""
    field: str | None = None
    commands: list[str] = Field(default_factory=list)
