"""Exact sparse linear algebra over the rationals.

Vectors are plain ``dict`` objects mapping a sortable key (an ambient word or
a basis index) to a non-zero ``Fraction``.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from heapq import heapify, heappop, heappush
from math import gcd, lcm
from typing import Hashable, Iterable, Mapping

from .series import GradedDims

__all__ = [
    "Vector",
    "LinearAlgebraError",
    "axpy",
    "scaled",
    "combine",
    "Echelon",
    "GradedSubspace",
]

logger = logging.getLogger(__name__)

Vector = dict
ZERO = Fraction(0)
# tag label standing for the vector being solved for
_TARGET = object()


class LinearAlgebraError(RuntimeError):
    """Raised when a linear system has no solution where one was required."""


def axpy(target: dict, source: Mapping, scale: Fraction | int = 1) -> dict:
    """In place ``target += scale * source``; zero entries are removed."""
    if scale == 0:
        return target
    for key, value in source.items():
        updated = target.get(key, ZERO) + scale * value
        if updated:
            target[key] = updated
        else:
            target.pop(key, None)
    return target


def scaled(source: Mapping, scale: Fraction | int) -> dict:
    if scale == 0:
        return {}
    return {key: scale * value for key, value in source.items()}


def combine(coeffs: Mapping[Hashable, Fraction], vectors: Mapping[Hashable, Mapping]) -> dict:
    """Return ``sum coeffs[label] * vectors[label]``."""
    result: dict = {}
    for label, coeff in coeffs.items():
        axpy(result, vectors[label], coeff)
    return result


class Echelon:
    """Incrementally built echelon form with optional provenance tracking.

    Rows are stored fraction-free as primitive integer vectors whose pivot,
    the smallest key, carries a positive coefficient.  A reduction only
    visits rows whose pivot occurs in the vector being reduced, walking keys
    in increasing order.  With ``track`` set every row remembers which
    inserted vectors it is a combination of, so reductions also return
    coordinates against the inserted vectors.
    """

    def __init__(self, track: bool = True) -> None:
        self._rows: dict[Hashable, tuple[dict, dict | None]] = {}
        self._labels: list[Hashable] = []
        self._track = track

    def __len__(self) -> int:
        return len(self._rows)

    @property
    def rank(self) -> int:
        return len(self._rows)

    @property
    def labels(self) -> list[Hashable]:
        """Labels of the vectors that were independent when inserted."""
        return list(self._labels)

    def copy(self) -> "Echelon":
        """An independent echelon sharing the current rows."""
        clone = Echelon(self._track)
        clone._rows = dict(self._rows)
        clone._labels = list(self._labels)
        return clone

    @staticmethod
    def _integral(vector: Mapping) -> tuple[dict, int]:
        """Clear denominators: return ``(den * vector, den)`` with integer entries."""
        den = 1
        for value in vector.values():
            if isinstance(value, Fraction) and value.denominator != 1:
                den = lcm(den, value.denominator)
        if den == 1:
            return {key: int(value) for key, value in vector.items() if value}, 1
        return {key: int(value * den) for key, value in vector.items() if value}, den

    def _eliminate(self, current: dict, tag: dict | None, early: bool) -> dict | None:
        """Eliminate pivots from *current* in place; returns the updated tag.

        Both ``current`` and ``tag`` are rescaled by the same integer factors,
        so ``current == sum tag[l] * v_l`` is preserved.  With *early* set the
        walk stops at the first key that is not a pivot.
        """
        rows = self._rows
        heap = list(current)
        heapify(heap)
        while heap:
            key = heappop(heap)
            coeff = current.get(key)
            if not coeff:
                continue
            row = rows.get(key)
            if row is None:
                if early:
                    return tag
                continue
            row_vector, row_tag = row
            lead = row_vector[key]
            common = gcd(lead, coeff)
            factor, multiple = lead // common, coeff // common
            if factor != 1:
                for k in current:
                    current[k] *= factor
                if tag is not None:
                    for k in tag:
                        tag[k] *= factor
            for k, value in row_vector.items():
                updated = current.get(k, 0) - multiple * value
                if updated:
                    if k not in current:
                        heappush(heap, k)
                    current[k] = updated
                else:
                    current.pop(k, None)
            if tag is not None:
                for k, value in row_tag.items():
                    updated = tag.get(k, 0) - multiple * value
                    if updated:
                        tag[k] = updated
                    else:
                        tag.pop(k, None)
        return tag

    def reduce(self, vector: Mapping) -> dict:
        """Remainder of *vector* after eliminating every pivot, up to a non-zero scalar."""
        current, _ = self._integral(vector)
        self._eliminate(current, None, early=False)
        return {key: Fraction(value) for key, value in current.items()}

    def contains(self, vector: Mapping) -> bool:
        current, _ = self._integral(vector)
        self._eliminate(current, None, early=True)
        return not current

    def solve(self, vector: Mapping) -> dict | None:
        """Coordinates of *vector* against inserted independent vectors, or ``None``."""
        if not self._track:
            raise LinearAlgebraError("Coordinates need an echelon built with provenance tracking.")
        current, den = self._integral(vector)
        tag = self._eliminate(current, {_TARGET: den}, early=True)
        if current:
            return None
        # tag[_TARGET] * vector + sum tag[l] * v_l == 0
        own = tag.pop(_TARGET)
        return {label: Fraction(-coeff, own) for label, coeff in tag.items()}

    def insert(self, vector: Mapping, label: Hashable) -> tuple[bool, dict]:
        """Insert *vector* under *label*.

        Returns ``(True, {})`` when the vector was independent.  Otherwise
        returns ``(False, relation)`` where ``relation`` is a linear relation
        ``sum relation[l] * v_l = 0`` among inserted vectors with
        ``relation[label] == 1``; without tracking the relation is empty.
        """
        current, den = self._integral(vector)
        tag = self._eliminate(current, {label: den} if self._track else None, early=True)
        if not current:
            if tag is None:
                return False, {}
            own = tag[label]
            return False, {key: Fraction(value, own) for key, value in tag.items()}
        pivot = min(current)
        content = 0
        for value in current.values():
            content = gcd(content, value)
        if current[pivot] < 0:
            content = -content
        row = {key: value // content for key, value in current.items()}
        row_tag = None
        if tag is not None:
            row_tag = {key: Fraction(value, content) for key, value in tag.items()}
        self._rows[pivot] = (row, row_tag)
        self._labels.append(label)
        return True, {}

    def extend(self, vectors: Iterable[Mapping], labels: Iterable[Hashable] | None = None) -> int:
        """Insert several vectors; return how many were independent."""
        added = 0
        label_iter = iter(labels) if labels is not None else None
        for index, vector in enumerate(vectors):
            label = next(label_iter) if label_iter is not None else ("v", len(self._labels), index)
            independent, _ = self.insert(vector, label)
            added += independent
        return added


@dataclass(slots=True)
class GradedSubspace:
    """Subspace of a graded coordinate space, stored as a basis per dimension."""

    horizon: int
    basis: dict[int, list[dict]] = field(default_factory=dict)
    _echelons: dict[int, Echelon] = field(default_factory=dict, repr=False, compare=False)

    @classmethod
    def spanned_by(cls, vectors: Iterable[tuple[int, Mapping]], horizon: int) -> "GradedSubspace":
        space = cls(horizon)
        for n, vector in vectors:
            space.add(n, vector)
        return space

    def _build(self, n: int) -> Echelon:
        echelon = Echelon(track=False)
        for index, vector in enumerate(self.basis.get(n, [])):
            echelon.insert(vector, index)
        return echelon

    def _echelon(self, n: int) -> Echelon:
        echelon = self._echelons.get(n)
        if echelon is None or echelon.rank != self.rank(n):
            echelon = self._echelons[n] = self._build(n)
        return echelon

    def add(self, n: int, vector: Mapping) -> bool:
        """Add *vector* in dimension *n*; return ``True`` when it enlarged the space."""
        if n > self.horizon or not vector:
            return False
        echelon = self._echelon(n)
        independent, _ = echelon.insert(vector, self.rank(n))
        if not independent:
            return False
        self.basis.setdefault(n, []).append(dict(vector))
        return True

    def rank(self, n: int) -> int:
        return len(self.basis.get(n, []))

    def dims(self) -> GradedDims:
        return GradedDims({n: len(vectors) for n, vectors in self.basis.items()}, self.horizon)

    def contains(self, n: int, vector: Mapping) -> bool:
        return self._echelon(n).contains(vector)

    def vectors(self) -> list[tuple[int, dict]]:
        return [(n, vector) for n in sorted(self.basis) for vector in self.basis[n]]

    def intersection(self, other: "GradedSubspace") -> "GradedSubspace":
        """Dimension-wise intersection, with an explicit basis."""
        horizon = min(self.horizon, other.horizon)
        result = GradedSubspace(horizon)
        for n in sorted(set(self.basis) & set(other.basis)):
            if n > horizon:
                continue
            echelon = Echelon()
            for index, vector in enumerate(self.basis[n]):
                echelon.insert(vector, ("a", index))
            others = other.basis[n]
            for index, vector in enumerate(others):
                independent, relation = echelon.insert(vector, ("b", index))
                if independent:
                    continue
                common: dict = {}
                for (side, position), coeff in relation.items():
                    if side == "b":
                        axpy(common, others[position], coeff)
                if common:
                    result.basis.setdefault(n, []).append(common)
        return result

    def sum_rank(self, other: "GradedSubspace", n: int) -> int:
        echelon = self._build(n)
        return echelon.rank + echelon.extend(other.basis.get(n, []))
