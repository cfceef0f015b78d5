"""Separating extensions.

A step at degree k and dimension n kills the classes of HL_k^+ ∩ HL_k^- in
dimension n by adding, for each such class alpha, a generator a of bidegree
(k, n+1) with da a cycle of L_{k-1} representing a preimage of alpha, and a
generator b of bidegree (k+2, n+2) with db = a - beta where d(beta) = da in
L_{k+1}.  The extension is a quasi-isomorphism.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Sequence

from . import config
from .algebra import Generator
from .dgl import DgLPresentation, LieExpr, build, homology
from .separation import SeparationReport, analysis, is_separated, kn_separated
from .utils import format_fraction

__all__ = [
    "ExtensionError",
    "NoPreimage",
    "NoBoundingChain",
    "HorizonExceeded",
    "PostconditionFailed",
    "ExtensionRecord",
    "SeparationOutcome",
    "intersection_basis",
    "separate_step",
    "separate",
    "attach_kill",
]

logger = logging.getLogger(__name__)


class ExtensionError(RuntimeError):
    """Raised when a presentation cannot be extended as requested."""


class NoPreimage(ExtensionError):
    """Raised when a class to be killed is not in the image of HL_{k-1}."""


class NoBoundingChain(ExtensionError):
    """Raised when a representative cycle does not bound in L_{k+1}."""


class HorizonExceeded(ExtensionError):
    """Raised when an extension needs generators beyond the truncation."""


class PostconditionFailed(ExtensionError):
    """Raised when an extension does not have the expected effect on homology."""


@dataclass(frozen=True, slots=True)
class ExtensionRecord:
    """Generators added by one separating step at (degree, dim)."""

    degree: int
    dim: int
    classes: tuple[Mapping[int, Fraction], ...] = ()
    added: tuple[tuple[str, str], ...] = ()
    cycles: tuple[LieExpr, ...] = ()
    chains: tuple[LieExpr, ...] = ()

    @property
    def killed(self) -> int:
        return len(self.classes)


@dataclass(slots=True)
class SeparationOutcome:
    """Result of the separation driver."""

    presentation: DgLPresentation
    steps: list[ExtensionRecord] = field(default_factory=list)
    report: SeparationReport | None = None
    target: int = 0
    pending: list[tuple[int, int]] = field(default_factory=list)

    @property
    def rounds(self) -> int:
        return len(self.steps)

    @property
    def separated(self) -> bool:
        return not self.pending


def intersection_basis(L: DgLPresentation, k: int, n: int) -> list[dict[int, Fraction]]:
    """Basis of the dimension-n part of HL_k^+ ∩ HL_k^-, in HL_k coordinates."""
    horizon = L.trunc - 1
    if n > horizon:
        raise HorizonExceeded(f"Dimension {n} lies beyond the homology horizon {horizon}.")
    return [dict(v) for v in analysis(L).intersection(k).basis.get(n, [])]


def _class_text(coords: Mapping[int, Fraction]) -> str:
    return " + ".join(f"{format_fraction(c)}*h{k}" for k, c in sorted(coords.items()))


def _fresh_names(taken: set[str], prefix_a: str, prefix_b: str | None = None) -> tuple[str, str | None]:
    t = 1
    while True:
        a = f"{prefix_a}{t}"
        b = f"{prefix_b}{t}" if prefix_b else None
        if a not in taken and (b is None or b not in taken):
            return a, b
        t += 1


def separate_step(L: DgLPresentation, k: int, n: int) -> tuple[DgLPresentation, ExtensionRecord]:
    classes = intersection_basis(L, k, n)
    if not classes:
        return L, ExtensionRecord(k, n)
    if n + 2 > L.trunc:
        raise HorizonExceeded(f"Killing dimension {n} needs generators of dimension {n + 2} > {L.trunc}.")
    if not kn_separated(L, k, n):
        logger.warning("Presentation is not (%d, %d)-separated; extending anyway", k, n)

    induced = analysis(L).induced_map(k)
    lower = L.complex(k - 1)
    upper = L.complex(k + 1)
    taken = set(L.names)
    new_gens: list[Generator] = []
    new_diff: dict[str, LieExpr] = {}
    metadata = dict(L.metadata)
    added, cycles, chains = [], [], []
    for alpha in classes:
        preimage = induced.preimage(n, alpha)
        if preimage is None:
            raise NoPreimage(f"Class {alpha} of HL_{k} in dimension {n} has no preimage in HL_{k - 1}.")
        cycle = induced.source.class_vector(preimage)
        chain = upper.bounding_chain(n, cycle)
        if chain is None:
            raise NoBoundingChain(f"Representative of {alpha} does not bound in L_{k + 1}.")
        cycle_expr = lower.expression(n, cycle)
        chain_expr = upper.expression(n + 1, chain)
        a_name, b_name = _fresh_names(taken, "a", "b")
        taken.update((a_name, b_name))
        new_gens.append(Generator(a_name, k, n + 1))
        new_gens.append(Generator(b_name, k + 2, n + 2))
        new_diff[a_name] = cycle_expr
        new_diff[b_name] = LieExpr.gen(a_name) - chain_expr
        metadata[a_name] = f"k={k} n={n} class={_class_text(alpha)}"
        metadata[b_name] = f"k={k} n={n} pairs={a_name}"
        added.append((a_name, b_name))
        cycles.append(cycle_expr)
        chains.append(chain_expr)

    extended = build(list(L.gens) + new_gens, {**L.diff, **new_diff}, L.trunc, metadata)
    record = ExtensionRecord(k, n, tuple(classes), tuple(added), tuple(cycles), tuple(chains))
    _check_step(L, extended, record)
    logger.info("Separating step at (k=%d, n=%d) killed %d classes", k, n, record.killed)
    return extended, record


def _check_step(before: DgLPresentation, after: DgLPresentation, record: ExtensionRecord) -> None:
    k, n = record.degree, record.dim
    old = analysis(before).homology(k).dims
    new = analysis(after).homology(k).dims
    for m in range(1, n + 1):
        expected = old[m] - (record.killed if m == n else 0)
        if new[m] != expected:
            raise PostconditionFailed(f"H_{m} of L_{k} has rank {new[m]} after the step, expected {expected}.")
    remaining = analysis(after).intersection(k).basis
    if any(m <= n for m in remaining):
        raise PostconditionFailed(f"HL_{k}^+ and HL_{k}^- still meet in dimension <= {n}.")


def separate(L: DgLPresentation) -> SeparationOutcome:
    """Extend *L* until it is separated through dimension ``trunc - 3``.

    Pairs (n, k) with a non-trivial intersection are processed in ascending
    order of dimension, then degree, recomputing after every step.
    """
    target = L.trunc - 3
    outcome = SeparationOutcome(L, target=target)
    current = L
    for _ in range(config.MAX_SEPARATION_STEPS):
        pending = is_separated(current).failures(target)
        if not pending:
            break
        n, k = pending[0]
        try:
            current, record = separate_step(current, k, n)
        except HorizonExceeded:
            logger.warning("Stopping separation at (k=%d, n=%d): truncation reached", k, n)
            break
        outcome.steps.append(record)
    else:
        logger.warning("Separation stopped after %d steps", config.MAX_SEPARATION_STEPS)
    outcome.presentation = current
    outcome.report = is_separated(current)
    outcome.pending = outcome.report.failures(target)
    logger.info("Separation finished after %d steps; pending %s", outcome.rounds, outcome.pending)
    return outcome


def attach_kill(
    L: DgLPresentation,
    classes: Sequence[Mapping[int, Fraction]],
    degree: int | None = None,
) -> DgLPresentation:
    """Add one generator per homology class of *L*, with differential a representative cycle."""
    classes = [c for c in classes if c]
    if not classes:
        return L
    H = homology(L)
    dims = {H.rep_dims[k] for coords in classes for k in coords}
    if len(dims) != 1:
        raise ExtensionError("Classes to kill must all lie in a single dimension.")
    n = dims.pop()
    if n + 1 > L.trunc:
        raise HorizonExceeded(f"Killing dimension {n} needs generators beyond trunc {L.trunc}.")
    degree = L.max_degree + 1 if degree is None else degree
    taken = set(L.names)
    new_gens: list[Generator] = []
    new_diff: dict[str, LieExpr] = {}
    metadata = dict(L.metadata)
    for coords in classes:
        name, _ = _fresh_names(taken, "k")
        taken.add(name)
        new_gens.append(Generator(name, degree, n + 1))
        new_diff[name] = H.complex.expression(n, H.class_vector(coords))
        metadata[name] = f"n={n} class={_class_text(coords)}"
    return build(list(L.gens) + new_gens, {**L.diff, **new_diff}, L.trunc, metadata)
