"""Truncated certificates that a graded Lie subalgebra is free.

A subalgebra J is free through dimension h when its ranks agree with those of
the free Lie algebra on its indecomposables W = J / [J, J] in every dimension
up to h.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Sequence

from .algebra import AmbientAlgebra, ScLie, commutator_terms, pbw_ambient
from .dgl import LieGenerator, lie_basis
from .linalg import Echelon, GradedSubspace
from .series import GradedDims, free_lie_dims

__all__ = [
    "FreenessError",
    "NotASubalgebra",
    "HypothesisViolated",
    "FreenessCertificate",
    "freeness_witness",
    "schreier_check",
]

logger = logging.getLogger(__name__)


class FreenessError(RuntimeError):
    """Raised when a freeness certificate cannot be produced."""


class NotASubalgebra(FreenessError):
    """Raised when the proposed subspace is not closed under brackets."""


class HypothesisViolated(FreenessError):
    """Raised when the subalgebra meets the bottom filtration piece."""


@dataclass(frozen=True, slots=True)
class FreenessCertificate:
    """Free through dimension ``horizon`` exactly when ``passed`` is set."""

    horizon: int
    generator_dims: GradedDims
    subalgebra_dims: GradedDims
    free_dims: GradedDims
    mismatches: tuple[int, ...] = field(default=())

    @property
    def passed(self) -> bool:
        return not self.mismatches


def freeness_witness(
    ambient: AmbientAlgebra,
    basis: Mapping[int, Sequence[Mapping]],
    horizon: int,
) -> FreenessCertificate:
    """Compare the ranks of J with those of L(J / [J, J]) through *horizon*."""
    horizon = min(horizon, ambient.trunc)
    spans: dict[int, Echelon] = {}
    for n, vectors in basis.items():
        if n > horizon:
            continue
        echelon = Echelon(track=False)
        echelon.extend(vectors)
        spans[n] = echelon

    decomposable: dict[int, Echelon] = {n: Echelon(track=False) for n in range(1, horizon + 1)}
    dims = sorted(n for n in basis if n <= horizon)
    for p in dims:
        for q in dims:
            if p > q or p + q > horizon:
                continue
            for x in basis[p]:
                for y in basis[q]:
                    value = commutator_terms(ambient, x, y, p, q)
                    if not value:
                        continue
                    target = spans.get(p + q)
                    if target is None or not target.contains(value):
                        raise NotASubalgebra(f"Bracket in dimension {p + q} leaves the subspace.")
                    decomposable[p + q].insert(value, len(decomposable[p + q]))

    ranks = {n: echelon.rank for n, echelon in spans.items()}
    generators = {n: ranks.get(n, 0) - decomposable[n].rank for n in range(1, horizon + 1)}
    subalgebra = GradedDims(ranks, horizon)
    generator_dims = GradedDims(generators, horizon)
    free = free_lie_dims(generator_dims)
    mismatches = tuple(n for n in range(1, horizon + 1) if subalgebra[n] != free[n])
    certificate = FreenessCertificate(horizon, generator_dims, subalgebra, free, mismatches)
    logger.debug("Freeness witness through %d: generators %s, mismatches %s", horizon, generator_dims.table(), mismatches)
    return certificate


def schreier_check(
    lie: ScLie,
    generators: Sequence[tuple[int, Mapping[int, Fraction]]],
    f0: Sequence[tuple[int, Mapping[int, Fraction]]],
    horizon: int | None = None,
) -> FreenessCertificate:
    """Close J under brackets inside *lie*, require J to meet F_0 trivially, then certify freeness.

    Vectors are coordinates against the basis of *lie*; ``f0`` spans the
    bottom filtration piece.
    """
    horizon = lie.horizon if horizon is None else min(horizon, lie.horizon)
    ambient = pbw_ambient(lie, horizon)
    seeds = [
        LieGenerator(f"j{t}", {(k,): Fraction(c) for k, c in vector.items()}, n, 0)
        for t, (n, vector) in enumerate(generators)
        if vector and n <= horizon
    ]
    closure = lie_basis(ambient, seeds, horizon)
    j_space = GradedSubspace(horizon)
    for n, vectors in closure.vectors.items():
        for vector in vectors:
            j_space.add(n, vector)
    bottom = GradedSubspace.spanned_by(
        ((n, {(k,): Fraction(c) for k, c in vector.items()}) for n, vector in f0), horizon
    )
    overlap = j_space.intersection(bottom)
    if overlap.basis:
        raise HypothesisViolated(
            f"Subalgebra meets F_0 in dimensions {sorted(overlap.basis)}."
        )
    return freeness_witness(ambient, closure.vectors, horizon)
