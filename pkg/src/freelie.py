"""Lyndon bases of free graded Lie algebras inside a tensor ambient.

For letters of a tensor algebra the Lie subalgebra they generate is free, so
a basis is known in advance: one bracket P(w) per Lyndon word w, nested along
the standard factorization, plus the square [P(u), P(u)] of every odd Lyndon
word u.  P(w) equals w plus larger words, and a square has leading word uu
with coefficient 2, so coordinates come from a triangular solve on leading
words instead of elimination.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Sequence, Union

from .algebra import AmbientAlgebra, commutator_terms
from .linalg import LinearAlgebraError, axpy, scaled
from .series import GradedDims
from .utils import koszul_sign

__all__ = ["FreeLetter", "FreeLieBasis", "free_lie_basis"]

logger = logging.getLogger(__name__)

Tree = Union[str, tuple]
Word = tuple[int, ...]
Ref = tuple[int, int]
ONE = Fraction(1)
TWO = Fraction(2)


@dataclass(frozen=True, slots=True)
class FreeLetter:
    label: Tree
    letter: int
    dim: int
    grade: int = 0


@dataclass(slots=True, eq=False)
class FreeLieBasis:
    """Per-dimension Lyndon basis; element j of dimension n is addressed as (n, j).

    ``factors[n][j]`` is ``("letter", index)``, ``("pair", left, right)`` or
    ``("square", half)``, the references pointing into lower dimensions.
    Ambient vectors are built on demand.
    """

    ambient: AmbientAlgebra
    horizon: int
    words: dict[int, list[Word]] = field(default_factory=dict)
    labels: dict[int, list[Tree]] = field(default_factory=dict)
    grades: dict[int, list[int]] = field(default_factory=dict)
    factors: dict[int, list[tuple]] = field(default_factory=dict)
    _index: dict[int, dict[Word, int]] = field(default_factory=dict, repr=False)
    _vectors: dict[Ref, dict] = field(default_factory=dict, repr=False)
    _restricted: dict[int, list[dict]] = field(default_factory=dict, repr=False)
    _brackets: dict[tuple[int, int, int, int], dict[int, Fraction]] = field(default_factory=dict, repr=False)

    def dims(self) -> GradedDims:
        return GradedDims({n: len(words) for n, words in self.words.items()}, self.horizon)

    def rank(self, n: int) -> int:
        return len(self.words.get(n, []))

    def is_square(self, n: int, j: int) -> bool:
        return self.factors[n][j][0] == "square"

    def vector(self, n: int, j: int) -> dict:
        cached = self._vectors.get((n, j))
        if cached is not None:
            return cached
        kind = self.factors[n][j]
        if kind[0] == "letter":
            result = {(kind[1],): ONE}
        else:
            left, right = (kind[1], kind[2]) if kind[0] == "pair" else (kind[1], kind[1])
            result = commutator_terms(
                self.ambient, self.vector(*left), self.vector(*right), left[0], right[0]
            )
        self._vectors[(n, j)] = result
        return result

    @property
    def vectors(self) -> dict[int, list[dict]]:
        return {n: [self.vector(n, j) for j in range(len(words))] for n, words in self.words.items()}

    def _lead(self, n: int, j: int) -> Fraction:
        return TWO if self.is_square(n, j) else ONE

    def coordinates(self, n: int, vector: Mapping) -> dict[int, Fraction] | None:
        """Coordinates of an ambient vector of dimension n, or ``None`` outside the algebra."""
        index = self._index.get(n, {})
        current = dict(vector)
        coords: dict[int, Fraction] = {}
        while current:
            j = index.get(min(current))
            if j is None:
                return None
            coeff = current[self.words[n][j]] / self._lead(n, j)
            coords[j] = coeff
            axpy(current, self.vector(n, j), -coeff)
        return coords

    def contains(self, n: int, vector: Mapping) -> bool:
        return self.coordinates(n, vector) is not None

    def _rows(self, n: int) -> list[dict]:
        rows = self._restricted.get(n)
        if rows is None:
            index = self._index.get(n, {})
            rows = [
                {word: c for word, c in self.vector(n, j).items() if word in index}
                for j in range(self.rank(n))
            ]
            self._restricted[n] = rows
        return rows

    def lie_coordinates(self, n: int, vector: Mapping) -> dict[int, Fraction]:
        """Coordinates of a vector known to lie in the algebra.

        Only leading words are tracked; the other words cancel automatically.
        """
        index = self._index.get(n, {})
        current = {word: c for word, c in vector.items() if word in index}
        if not current:
            if any(vector.values()):
                raise LinearAlgebraError(f"Vector of dimension {n} does not lie in the free Lie algebra.")
            return {}
        rows = self._rows(n)
        coords: dict[int, Fraction] = {}
        while current:
            j = index[min(current)]
            coeff = current[self.words[n][j]] / self._lead(n, j)
            coords[j] = coeff
            axpy(current, rows[j], -coeff)
        return coords

    def bracket(self, p: int, a: int, q: int, b: int) -> dict[int, Fraction]:
        """Coordinates in dimension p + q of [(p, a), (q, b)]."""
        n = p + q
        if n > self.horizon:
            return {}
        key = (p, a, q, b)
        cached = self._brackets.get(key)
        if cached is not None:
            return cached
        left, right = self.words[p][a], self.words[q][b]
        if left == right:
            if p % 2 and not self.is_square(p, a):
                result = {self._index[n][left + left]: ONE}
            else:
                result = {}
        elif left > right:
            result = scaled(self.bracket(q, b, p, a), -koszul_sign(p, q))
        elif self._standard(p, a, q, b):
            result = {self._index[n][left + right]: ONE}
        else:
            value = commutator_terms(self.ambient, self.vector(p, a), self.vector(q, b), p, q)
            result = self.lie_coordinates(n, value)
        self._brackets[key] = result
        return result

    def _standard(self, p: int, a: int, q: int, b: int) -> bool:
        """Whether [(p, a), (q, b)] is itself a basis element, given word(a) < word(b)."""
        kind = self.factors[p][a]
        if kind[0] == "square" or self.factors[q][b][0] == "square":
            return False
        if kind[0] == "letter":
            return True
        inner = kind[2]
        return self.words[inner[0]][inner[1]] >= self.words[q][b]


def free_lie_basis(ambient: AmbientAlgebra, letters: Sequence[FreeLetter], horizon: int) -> FreeLieBasis:
    """Enumerate Lyndon words and odd squares dimension by dimension through *horizon*."""
    horizon = min(horizon, ambient.trunc)
    basis = FreeLieBasis(ambient, horizon)
    by_dim: dict[int, list[FreeLetter]] = {}
    for letter in sorted(letters, key=lambda item: item.letter):
        by_dim.setdefault(letter.dim, []).append(letter)
    for n in range(1, horizon + 1):
        entries: list[tuple[Word, Tree, int, tuple]] = [
            ((letter.letter,), letter.label, letter.grade, ("letter", letter.letter))
            for letter in by_dim.get(n, [])
        ]
        for p in range(1, n):
            q = n - p
            rights = [
                (b, word)
                for b, word in enumerate(basis.words.get(q, []))
                if basis.factors[q][b][0] != "square"
            ]
            for a, left in enumerate(basis.words.get(p, [])):
                kind = basis.factors[p][a]
                if kind[0] == "square":
                    continue
                bound = None if kind[0] == "letter" else basis.words[kind[2][0]][kind[2][1]]
                for b, right in rights:
                    if left < right and (bound is None or bound >= right):
                        entries.append(
                            (
                                left + right,
                                (basis.labels[p][a], basis.labels[q][b]),
                                basis.grades[p][a] + basis.grades[q][b],
                                ("pair", (p, a), (q, b)),
                            )
                        )
        half = n // 2
        if n % 2 == 0 and half % 2:
            for a, word in enumerate(basis.words.get(half, [])):
                if basis.factors[half][a][0] == "square":
                    continue
                label = basis.labels[half][a]
                entries.append((word + word, (label, label), 2 * basis.grades[half][a], ("square", (half, a))))
        if not entries:
            continue
        entries.sort(key=lambda entry: entry[0])
        basis.words[n] = [entry[0] for entry in entries]
        basis.labels[n] = [entry[1] for entry in entries]
        basis.grades[n] = [entry[2] for entry in entries]
        basis.factors[n] = [entry[3] for entry in entries]
        basis._index[n] = {word: j for j, word in enumerate(basis.words[n])}
        logger.debug("Lyndon basis dimension %d has rank %d", n, len(entries))
    return basis
