"""JSON interchange format for dgL presentations."""

from __future__ import annotations

import json
import logging
import pathlib
import sys
from typing import Any

from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator

from . import config
from .algebra import Generator
from .dgl import DgLPresentation, DSquareNonzero, LieExpr, PresentationError, Tree, build
from .utils import ensure_directory, format_fraction, parse_fraction

__all__ = [
    "ModelFileError",
    "GeneratorEntry",
    "TermEntry",
    "ModelFile",
    "loads",
    "load",
    "dumps",
    "dump",
    "to_presentation",
    "from_presentation",
]

logger = logging.getLogger(__name__)


class ModelFileError(ValueError):
    """Raised when a model file cannot be parsed into a valid presentation."""

    def __init__(self, message: str, position: str = "") -> None:
        self.position = position
        super().__init__(f"{position}: {message}" if position else message)


def _tree_from_json(value: Any) -> Tree:
    if isinstance(value, str) and value:
        return value
    if isinstance(value, (list, tuple)) and len(value) == 2:
        return (_tree_from_json(value[0]), _tree_from_json(value[1]))
    raise ValueError("A bracket is a generator name or a two-element list of brackets.")


def _tree_to_json(tree: Tree) -> Any:
    if isinstance(tree, str):
        return tree
    return [_tree_to_json(tree[0]), _tree_to_json(tree[1])]


class GeneratorEntry(BaseModel):
    model_config = ConfigDict(extra="forbid")

    name: str = Field(..., min_length=1, description="Generator name")
    degree: int = Field(..., ge=1, description="Cellular degree")
    dim: int = Field(..., ge=1, description="Homological dimension")


class TermEntry(BaseModel):
    model_config = ConfigDict(extra="forbid")

    coeff: str = Field(..., description="Rational coefficient written as p/q")
    bracket: Any = Field(..., description="Generator name or nested two-element list")

    @field_validator("coeff")
    @classmethod
    def _validate_coeff(cls, value: str) -> str:
        parse_fraction(value)
        return value

    @field_validator("bracket")
    @classmethod
    def _validate_bracket(cls, value: Any) -> Any:
        _tree_from_json(value)
        return value


class ModelFile(BaseModel):
    model_config = ConfigDict(extra="forbid")

    truncation: int = Field(..., ge=1, description="Dimension through which the model is exact")
    generators: list[GeneratorEntry] = Field(default_factory=list)
    differential: dict[str, list[TermEntry]] = Field(default_factory=dict)
    metadata: dict[str, str] = Field(default_factory=dict)


def _position(loc: tuple) -> str:
    return ".".join(str(part) for part in loc)


def loads(text: str) -> ModelFile:
    try:
        return ModelFile.model_validate_json(text)
    except ValidationError as exc:
        error = exc.errors()[0]
        if error["type"] == "json_invalid":
            detail = error.get("ctx", {}).get("error", error["msg"])
            raise ModelFileError(f"Invalid JSON: {detail}", "input") from exc
        raise ModelFileError(error["msg"], _position(error["loc"])) from exc


def load(source: str | pathlib.Path | None) -> ModelFile:
    """Read a model from a path, or from stdin for ``None`` and ``"-"``."""
    if source is None or str(source) == "-":
        return loads(sys.stdin.read())
    path = pathlib.Path(source)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise ModelFileError(f"Cannot read model file: {exc.strerror}", str(path)) from exc
    return loads(text)


def dumps(model: ModelFile) -> str:
    """Canonical text: fixed key order, two-space indent, trailing newline."""
    return json.dumps(model.model_dump(mode="json"), indent=config.JSON_INDENT, ensure_ascii=False) + "\n"


def dump(model: ModelFile, target: str | pathlib.Path | None) -> None:
    text = dumps(model)
    if target is None or str(target) == "-":
        sys.stdout.write(text)
        return
    path = pathlib.Path(target)
    ensure_directory(path.parent)
    path.write_text(text, encoding="utf-8")
    logger.info("Wrote model with %d generators to %s", len(model.generators), path)


def to_presentation(model: ModelFile, trunc: int | None = None) -> DgLPresentation:
    """Build and validate the presentation; ``trunc`` overrides the file's truncation."""
    gens = [Generator(entry.name, entry.degree, entry.dim) for entry in model.generators]
    diff: dict[str, LieExpr] = {}
    for name, terms in model.differential.items():
        diff[name] = LieExpr.from_terms(
            (_tree_from_json(term.bracket), parse_fraction(term.coeff)) for term in terms
        )
    try:
        return build(gens, diff, trunc or model.truncation, model.metadata)
    except DSquareNonzero as exc:
        raise ModelFileError(str(exc), f"differential.{exc.generator}") from exc
    except PresentationError as exc:
        raise ModelFileError(str(exc), "model") from exc


def from_presentation(L: DgLPresentation) -> ModelFile:
    differential = {}
    for gen in L.gens:
        expr = L.differential(gen.name)
        if expr.is_zero:
            continue
        differential[gen.name] = [
            TermEntry(coeff=format_fraction(coeff), bracket=_tree_to_json(tree)) for tree, coeff in expr.terms
        ]
    return ModelFile(
        truncation=L.trunc,
        generators=[GeneratorEntry(name=gen.name, degree=gen.degree, dim=gen.dim) for gen in L.gens],
        differential=differential,
        metadata={str(k): str(v) for k, v in L.metadata.items()},
    )
