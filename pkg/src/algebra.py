"""Truncated graded associative algebras hosting all Lie computations.

Three kinds share one implementation: the tensor algebra T(V), the PBW
envelope U(H) of a structure-constant Lie algebra, and the free product
U(H) * T(V).  Words are tuples of letter indices; a word is in normal form
when every maximal run of envelope letters is non-decreasing with odd letters
squarefree.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Literal, Mapping, Sequence

from .linalg import axpy, scaled
from .series import GradedDims, SeriesZ
from .utils import koszul_sign

__all__ = [
    "AlgebraError",
    "InvalidGenerators",
    "InvalidStructureConstants",
    "RequiresHomogeneous",
    "Generator",
    "GeneratorSet",
    "Letter",
    "ScLie",
    "AmbientAlgebra",
    "Element",
    "tensor_ambient",
    "pbw_ambient",
    "free_product_ambient",
    "commutator",
    "commutator_terms",
]

logger = logging.getLogger(__name__)

AlgebraKind = Literal["tensor", "pbw-envelope", "free-product"]
Word = tuple[int, ...]
ONE = Fraction(1)


class AlgebraError(RuntimeError):
    """Raised when an ambient algebra cannot be built or used."""


class InvalidGenerators(AlgebraError, ValueError):
    """Raised when a generator set has duplicate names or non-positive gradings."""


class InvalidStructureConstants(AlgebraError):
    """Raised when a bracket table violates the grading or is missing an entry."""


class RequiresHomogeneous(AlgebraError):
    """Raised when a graded commutator is taken of a non-homogeneous element."""


@dataclass(frozen=True, slots=True)
class Generator:
    """A bigraded generator: ``degree`` is the attachment index, ``dim`` the grading."""

    name: str
    degree: int
    dim: int


@dataclass(frozen=True, slots=True)
class GeneratorSet:
    generators: tuple[Generator, ...] = ()

    def __post_init__(self) -> None:
        seen: set[str] = set()
        for gen in self.generators:
            if not gen.name or not isinstance(gen.name, str):
                raise InvalidGenerators(f"Invalid generator name {gen.name!r}.")
            if gen.name in seen:
                raise InvalidGenerators(f"Duplicate generator name {gen.name!r}.")
            if gen.degree < 1 or gen.dim < 1:
                raise InvalidGenerators(
                    f"Generator {gen.name!r} needs degree >= 1 and dim >= 1, got ({gen.degree}, {gen.dim})."
                )
            seen.add(gen.name)

    def __iter__(self):
        return iter(self.generators)

    def __len__(self) -> int:
        return len(self.generators)

    def dims(self, horizon: int) -> GradedDims:
        counts: dict[int, int] = {}
        for gen in self.generators:
            counts[gen.dim] = counts.get(gen.dim, 0) + 1
        return GradedDims(counts, horizon)


@dataclass(frozen=True, slots=True)
class Letter:
    name: str
    dim: int
    envelope: bool = False


@dataclass(frozen=True, slots=True)
class ScLie:
    """Graded Lie algebra given by structure constants on an ordered basis.

    Basis elements are ordered by dimension.  ``table`` holds the non-zero
    brackets of basis pairs; a missing pair whose dimensions add up to at most
    ``horizon`` is a zero bracket.
    """

    dims: tuple[int, ...]
    table: Mapping[tuple[int, int], Mapping[int, Fraction]]
    horizon: int
    names: tuple[str, ...] = ()

    def __post_init__(self) -> None:
        if any(a > b for a, b in zip(self.dims, self.dims[1:])):
            raise InvalidStructureConstants("Basis must be ordered by dimension.")
        if any(d < 1 for d in self.dims):
            raise InvalidStructureConstants("Basis elements must have dimension >= 1.")
        if not self.names:
            object.__setattr__(self, "names", tuple(f"h{i}" for i in range(len(self.dims))))
        for (i, j), value in self.table.items():
            target = self.dims[i] + self.dims[j]
            if target > self.horizon:
                raise InvalidStructureConstants(f"Bracket ({i}, {j}) lies beyond horizon {self.horizon}.")
            for k in value:
                if self.dims[k] != target:
                    raise InvalidStructureConstants(
                        f"Bracket ({i}, {j}) has a component in dimension {self.dims[k]}, expected {target}."
                    )

    @classmethod
    def empty(cls, horizon: int) -> "ScLie":
        return cls((), {}, horizon)

    def __len__(self) -> int:
        return len(self.dims)

    def bracket(self, i: int, j: int) -> dict[int, Fraction]:
        if self.dims[i] + self.dims[j] > self.horizon:
            raise InvalidStructureConstants(
                f"Bracket of {self.names[i]} and {self.names[j]} lies beyond horizon {self.horizon}."
            )
        return dict(self.table.get((i, j), {}))

    def bracket_vectors(self, x: Mapping[int, Fraction], y: Mapping[int, Fraction]) -> dict[int, Fraction]:
        result: dict[int, Fraction] = {}
        for i, a in x.items():
            for j, b in y.items():
                axpy(result, self.table.get((i, j), {}), a * b)
        return result

    def basis_in_dim(self, n: int) -> list[int]:
        return [i for i, d in enumerate(self.dims) if d == n]

    def graded_dims(self) -> GradedDims:
        counts: dict[int, int] = {}
        for d in self.dims:
            counts[d] = counts.get(d, 0) + 1
        return GradedDims(counts, self.horizon)

    def _pairs(self) -> Iterable[tuple[int, int]]:
        for i, di in enumerate(self.dims):
            for j, dj in enumerate(self.dims):
                if di + dj <= self.horizon:
                    yield i, j

    def check_antisymmetry(self) -> list[tuple[int, int]]:
        """Return basis pairs violating [x,y] = -(-1)^{|x||y|}[y,x]."""
        failures = []
        for i, j in self._pairs():
            if j < i:
                continue
            lhs = self.bracket(i, j)
            rhs = scaled(self.bracket(j, i), -koszul_sign(self.dims[i], self.dims[j]))
            if lhs != rhs:
                failures.append((i, j))
        return failures

    def check_jacobi(self) -> list[tuple[int, int, int]]:
        """Return basis triples violating [x,[y,z]] = [[x,y],z] + (-1)^{|x||y|}[y,[x,z]]."""
        failures = []
        n = len(self.dims)
        for i in range(n):
            for j in range(n):
                for k in range(n):
                    if self.dims[i] + self.dims[j] + self.dims[k] > self.horizon:
                        continue
                    lhs = self.bracket_vectors({i: ONE}, self.bracket(j, k))
                    rhs = self.bracket_vectors(self.bracket(i, j), {k: ONE})
                    axpy(rhs, self.bracket_vectors({j: ONE}, self.bracket(i, k)),
                         koszul_sign(self.dims[i], self.dims[j]))
                    if lhs != rhs:
                        failures.append((i, j, k))
        return failures

    def validate(self) -> None:
        """Raise unless the table is graded antisymmetric and satisfies Jacobi."""
        pairs = self.check_antisymmetry()
        if pairs:
            raise InvalidStructureConstants(f"Bracket table is not graded antisymmetric at {pairs[:3]}.")
        triples = self.check_jacobi()
        if triples:
            raise InvalidStructureConstants(f"Bracket table violates Jacobi at {triples[:3]}.")

    def restrict(self, indices: Sequence[int]) -> "ScLie":
        """Sub-algebra on a bracket-closed subset of basis elements, re-indexed."""
        position = {old: new for new, old in enumerate(indices)}
        table: dict[tuple[int, int], dict[int, Fraction]] = {}
        for (i, j), value in self.table.items():
            if i in position and j in position:
                if any(k not in position for k in value):
                    raise InvalidStructureConstants("Restriction to a set that is not bracket-closed.")
                table[(position[i], position[j])] = {position[k]: c for k, c in value.items()}
        return ScLie(
            tuple(self.dims[i] for i in indices),
            table,
            self.horizon,
            tuple(self.names[i] for i in indices),
        )


class AmbientAlgebra:
    """A truncated graded associative algebra with a normal-form word basis."""

    def __init__(
        self,
        kind: AlgebraKind,
        letters: Sequence[Letter],
        trunc: int,
        brackets: ScLie | None = None,
    ) -> None:
        if trunc < 0:
            raise AlgebraError("Truncation must be non-negative.")
        self.kind: AlgebraKind = kind
        self.letters: tuple[Letter, ...] = tuple(letters)
        self.trunc = trunc
        self._dims = tuple(letter.dim for letter in self.letters)
        self._envelope = tuple(letter.envelope for letter in self.letters)
        self._brackets = brackets
        self._nf_cache: dict[Word, dict[Word, Fraction]] = {}
        self._basis_cache: dict[int, list[Word]] = {}
        self.overflow_count = 0

    def __repr__(self) -> str:
        return f"AmbientAlgebra(kind={self.kind!r}, letters={len(self.letters)}, trunc={self.trunc})"

    @property
    def truncated(self) -> bool:
        """Whether some product overflowed the truncation and was set to zero."""
        return self.overflow_count > 0

    def letter_dim(self, index: int) -> int:
        return self._dims[index]

    def word_dim(self, word: Word) -> int:
        dims = self._dims
        return sum(dims[i] for i in word)

    # ------------------------------------------------------------------
    # Normal forms
    def _violates(self, u: int, v: int) -> bool:
        if not (self._envelope[u] and self._envelope[v]):
            return False
        return u > v or (u == v and self._dims[u] % 2 == 1)

    def is_normal(self, word: Word) -> bool:
        return not any(self._violates(u, v) for u, v in zip(word, word[1:]))

    def _bracket(self, u: int, v: int) -> dict[int, Fraction]:
        if self._brackets is None:
            raise InvalidStructureConstants("Straightening requires a bracket table.")
        return self._brackets.bracket(u, v)

    def normal_form(self, word: Word) -> dict[Word, Fraction]:
        """Straighten *word* via vu = (-1)^{|u||v|} uv + [v,u] on envelope letters."""
        cached = self._nf_cache.get(word)
        if cached is not None:
            return cached
        position = None
        for i in range(len(word) - 1):
            if self._violates(word[i], word[i + 1]):
                position = i
                break
        if position is None:
            result = {word: ONE}
        else:
            u, v = word[position], word[position + 1]
            head, tail = word[:position], word[position + 2:]
            result = {}
            if u == v:
                for w, c in self._bracket(u, u).items():
                    axpy(result, self.normal_form(head + (w,) + tail), c / 2)
            else:
                axpy(result, self.normal_form(head + (v, u) + tail), koszul_sign(self._dims[u], self._dims[v]))
                for w, c in self._bracket(u, v).items():
                    axpy(result, self.normal_form(head + (w,) + tail), c)
        self._nf_cache[word] = result
        return result

    def basis(self, n: int) -> list[Word]:
        """Normal-form words of dimension *n* (the unit word for n = 0)."""
        if n in self._basis_cache:
            return self._basis_cache[n]
        words: list[Word] = []
        if 0 <= n <= self.trunc:
            order = sorted(range(len(self.letters)), key=lambda i: (self._dims[i], i))

            def extend(prefix: Word, remaining: int) -> None:
                if remaining == 0:
                    words.append(prefix)
                    return
                for index in order:
                    dim = self._dims[index]
                    if dim > remaining:
                        break
                    if prefix and self._violates(prefix[-1], index):
                        continue
                    extend(prefix + (index,), remaining - dim)

            extend((), n)
        self._basis_cache[n] = words
        return words

    def hilbert_series(self) -> SeriesZ:
        return SeriesZ.from_mapping({n: len(self.basis(n)) for n in range(self.trunc + 1)}, self.trunc)

    # ------------------------------------------------------------------
    # Products
    def multiply(self, a: Mapping[Word, Fraction], b: Mapping[Word, Fraction]) -> dict[Word, Fraction]:
        result: dict[Word, Fraction] = {}
        dims = self._dims
        b_items = [(wb, cb, sum(dims[i] for i in wb)) for wb, cb in b.items()]
        for wa, ca in a.items():
            da = sum(dims[i] for i in wa)
            for wb, cb, db in b_items:
                if da + db > self.trunc:
                    self.overflow_count += 1
                    continue
                word = wa + wb
                if wa and wb and self._violates(wa[-1], wb[0]):
                    axpy(result, self.normal_form(word), ca * cb)
                else:
                    axpy(result, {word: ONE}, ca * cb)
        return result

    def letter(self, index: int) -> "Element":
        return Element(self, {(index,): ONE})

    def element(self, terms: Mapping[Word, Fraction]) -> "Element":
        return Element(self, {w: Fraction(c) for w, c in terms.items() if c})

    def unit(self) -> "Element":
        return Element(self, {(): ONE})


@dataclass(frozen=True, slots=True, eq=False)
class Element:
    """A finite rational combination of normal-form words."""

    algebra: AmbientAlgebra
    terms: Mapping[Word, Fraction] = field(default_factory=dict)

    @property
    def is_zero(self) -> bool:
        return not self.terms

    @property
    def is_homogeneous(self) -> bool:
        return len({self.algebra.word_dim(w) for w in self.terms}) <= 1

    @property
    def dim(self) -> int | None:
        dims = {self.algebra.word_dim(w) for w in self.terms}
        return dims.pop() if len(dims) == 1 else None

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Element):
            return NotImplemented
        return self.algebra is other.algebra and dict(self.terms) == dict(other.terms)

    def __add__(self, other: "Element") -> "Element":
        return Element(self.algebra, axpy(dict(self.terms), other.terms))

    def __sub__(self, other: "Element") -> "Element":
        return Element(self.algebra, axpy(dict(self.terms), other.terms, -1))

    def __neg__(self) -> "Element":
        return Element(self.algebra, scaled(self.terms, -1))

    def __mul__(self, other: "Element | Fraction | int") -> "Element":
        if isinstance(other, Element):
            return Element(self.algebra, self.algebra.multiply(self.terms, other.terms))
        return Element(self.algebra, scaled(self.terms, Fraction(other)))

    def __rmul__(self, other: Fraction | int) -> "Element":
        return Element(self.algebra, scaled(self.terms, Fraction(other)))

    def __repr__(self) -> str:
        if not self.terms:
            return "0"
        names = [letter.name for letter in self.algebra.letters]
        parts = []
        for word, coeff in self.terms.items():
            label = "*".join(names[i] for i in word) or "1"
            parts.append(f"{coeff}*{label}")
        return " + ".join(parts)


def commutator_terms(
    algebra: AmbientAlgebra,
    a: Mapping[Word, Fraction],
    b: Mapping[Word, Fraction],
    dim_a: int,
    dim_b: int,
) -> dict[Word, Fraction]:
    """Graded commutator ab - (-1)^{|a||b|} ba on raw term maps of known dimensions."""
    result = algebra.multiply(a, b)
    axpy(result, algebra.multiply(b, a), -koszul_sign(dim_a, dim_b))
    return result


def commutator(a: Element, b: Element) -> Element:
    if a.algebra is not b.algebra:
        raise AlgebraError("Elements live in different ambient algebras.")
    if not (a.is_homogeneous and b.is_homogeneous):
        raise RequiresHomogeneous("Graded commutator needs homogeneous arguments.")
    if a.is_zero or b.is_zero:
        return Element(a.algebra, {})
    return Element(a.algebra, commutator_terms(a.algebra, a.terms, b.terms, a.dim, b.dim))


def tensor_ambient(gens: GeneratorSet | Iterable[Generator], trunc: int) -> AmbientAlgebra:
    if trunc < 1:
        raise AlgebraError("Tensor ambient needs trunc >= 1.")
    gens = gens if isinstance(gens, GeneratorSet) else GeneratorSet(tuple(gens))
    letters = [Letter(gen.name, gen.dim) for gen in gens]
    return AmbientAlgebra("tensor", letters, trunc)


def pbw_ambient(lie: ScLie, trunc: int) -> AmbientAlgebra:
    if trunc > lie.horizon:
        raise InvalidStructureConstants(
            f"Envelope truncation {trunc} exceeds the structure-constant horizon {lie.horizon}."
        )
    lie.validate()
    letters = [Letter(name, dim, envelope=True) for name, dim in zip(lie.names, lie.dims)]
    return AmbientAlgebra("pbw-envelope", letters, trunc, brackets=lie)


def free_product_ambient(left: AmbientAlgebra, right: AmbientAlgebra, trunc: int | None = None) -> AmbientAlgebra:
    """U(H) * T(V): envelope letters first, then the free letters of the tensor factor."""
    if left.kind != "pbw-envelope" or right.kind != "tensor":
        raise AlgebraError("Free product expects a PBW envelope on the left and a tensor algebra on the right.")
    trunc = min(left.trunc, right.trunc) if trunc is None else trunc
    letters = list(left.letters) + [Letter(letter.name, letter.dim) for letter in right.letters]
    return AmbientAlgebra("free-product", letters, trunc, brackets=left._brackets)
