"""Differential graded Lie algebras realized inside ambient associative algebras.

A presentation names bigraded generators and gives each one a differential as
a formal bracket expression.  All linear algebra happens on ambient words: the
Lie algebra in each dimension is spanned by iterated commutators of the
generators, the differential acts on words as the derivation extending its
values on letters, and homology classes are represented by explicit cycles.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping, Sequence, Union

from .algebra import (
    AmbientAlgebra,
    Element,
    Generator,
    GeneratorSet,
    InvalidStructureConstants,
    ScLie,
    commutator_terms,
    tensor_ambient,
)
from .freelie import FreeLetter, FreeLieBasis, free_lie_basis
from .linalg import Echelon, LinearAlgebraError, axpy, combine, scaled
from .series import GradedDims
from .utils import format_fraction, koszul_sign

__all__ = [
    "PresentationError",
    "UnknownGenerator",
    "DuplicateGenerator",
    "DegreeViolation",
    "DimensionViolation",
    "DSquareNonzero",
    "NotACycle",
    "Tree",
    "LieExpr",
    "LieGenerator",
    "LieBasis",
    "LieComplex",
    "DgLPresentation",
    "HomologyResult",
    "bracket",
    "build",
    "evaluate",
    "lie_basis",
    "differential_matrices",
    "homology",
    "homology_upto",
    "sub_dgl",
    "envelope_homology_dims",
    "tree_dim",
    "render_tree",
]

logger = logging.getLogger(__name__)

Tree = Union[str, tuple]
Word = tuple[int, ...]
ONE = Fraction(1)


class PresentationError(RuntimeError):
    """Raised when a dgL presentation is malformed."""


class UnknownGenerator(PresentationError):
    """Raised when an expression names a generator that does not exist."""


class DuplicateGenerator(PresentationError):
    """Raised when two generators share a name."""


class DegreeViolation(PresentationError):
    """Raised when a differential uses a generator of equal or higher degree."""


class DimensionViolation(PresentationError):
    """Raised when a differential does not lower dimension by exactly one."""


class DSquareNonzero(PresentationError):
    """Raised when d(d(v)) is non-zero for some generator v."""

    def __init__(self, generator: str, value: Element) -> None:
        super().__init__(f"d^2({generator}) = {value!r} is not zero.")
        self.generator = generator
        self.value = value


class NotACycle(PresentationError):
    """Raised when class coordinates are requested for something that is not a cycle."""


# ----------------------------------------------------------------------
# Formal bracket expressions


def render_tree(tree: Tree) -> str:
    if isinstance(tree, str):
        return tree
    left, right = tree
    return f"[{render_tree(left)},{render_tree(right)}]"


def tree_leaves(tree: Tree) -> Iterable[str]:
    if isinstance(tree, str):
        yield tree
    else:
        yield from tree_leaves(tree[0])
        yield from tree_leaves(tree[1])


def tree_dim(tree: Tree, dims: Mapping[str, int]) -> int:
    return sum(dims[leaf] for leaf in tree_leaves(tree))


def _check_tree(tree: object) -> Tree:
    if isinstance(tree, str):
        return tree
    if isinstance(tree, (tuple, list)) and len(tree) == 2:
        return (_check_tree(tree[0]), _check_tree(tree[1]))
    raise PresentationError(f"Malformed bracket {tree!r}.")


@dataclass(frozen=True, slots=True)
class LieExpr:
    """Linear combination of bracket monomials with rational coefficients.

    Terms are kept normalized: equal monomials merged, zero terms dropped and
    the rest sorted by their rendering.
    """

    terms: tuple[tuple[Tree, Fraction], ...] = ()

    @classmethod
    def from_terms(cls, terms: Iterable[tuple[object, Fraction | int]]) -> "LieExpr":
        merged: dict[Tree, Fraction] = {}
        for tree, coeff in terms:
            tree = _check_tree(tree)
            merged[tree] = merged.get(tree, Fraction(0)) + Fraction(coeff)
        items = [(tree, coeff) for tree, coeff in merged.items() if coeff]
        items.sort(key=lambda item: render_tree(item[0]))
        return cls(tuple(items))

    @classmethod
    def gen(cls, name: str) -> "LieExpr":
        return cls(((name, ONE),))

    @classmethod
    def zero(cls) -> "LieExpr":
        return cls()

    @property
    def is_zero(self) -> bool:
        return not self.terms

    def bracket(self, other: "LieExpr") -> "LieExpr":
        return LieExpr.from_terms(
            ((a, b), ca * cb) for a, ca in self.terms for b, cb in other.terms
        )

    def __add__(self, other: "LieExpr") -> "LieExpr":
        return LieExpr.from_terms(self.terms + other.terms)

    def __sub__(self, other: "LieExpr") -> "LieExpr":
        return self + (-other)

    def __neg__(self) -> "LieExpr":
        return LieExpr(tuple((tree, -coeff) for tree, coeff in self.terms))

    def __mul__(self, scalar: Fraction | int) -> "LieExpr":
        return LieExpr.from_terms((tree, coeff * Fraction(scalar)) for tree, coeff in self.terms)

    __rmul__ = __mul__

    def leaves(self) -> set[str]:
        return {leaf for tree, _ in self.terms for leaf in tree_leaves(tree)}

    def render(self) -> str:
        if not self.terms:
            return "0"
        return " + ".join(f"{format_fraction(coeff)}*{render_tree(tree)}" for tree, coeff in self.terms)

    def __str__(self) -> str:
        return self.render()


def bracket(a: LieExpr | str, b: LieExpr | str) -> LieExpr:
    a = LieExpr.gen(a) if isinstance(a, str) else a
    b = LieExpr.gen(b) if isinstance(b, str) else b
    return a.bracket(b)


# ----------------------------------------------------------------------
# Lie subalgebras of an ambient algebra


@dataclass(frozen=True, slots=True)
class LieGenerator:
    """A homogeneous generating element together with its label and grade."""

    label: Tree
    vector: Mapping[Word, Fraction]
    dim: int
    grade: int = 0


@dataclass(slots=True, eq=False)
class LieBasis:
    """Per-dimension basis of the Lie subalgebra spanned by iterated brackets."""

    ambient: AmbientAlgebra
    horizon: int
    vectors: dict[int, list[dict]] = field(default_factory=dict)
    labels: dict[int, list[Tree]] = field(default_factory=dict)
    grades: dict[int, list[int]] = field(default_factory=dict)
    echelons: dict[int, Echelon] = field(default_factory=dict)

    def dims(self) -> GradedDims:
        return GradedDims({n: len(rows) for n, rows in self.vectors.items()}, self.horizon)

    def rank(self, n: int) -> int:
        return len(self.vectors.get(n, []))

    def vector(self, n: int, j: int) -> dict:
        return self.vectors[n][j]

    def coordinates(self, n: int, vector: Mapping) -> dict[int, Fraction] | None:
        echelon = self.echelons.get(n)
        if echelon is None:
            return {} if not vector else None
        return echelon.solve(vector)

    def contains(self, n: int, vector: Mapping) -> bool:
        return self.coordinates(n, vector) is not None


def _free_letters(ambient: AmbientAlgebra, generators: Sequence[LieGenerator]) -> list[FreeLetter] | None:
    """The generators as distinct letters of a tensor ambient, or ``None``."""
    if ambient.kind != "tensor":
        return None
    letters: list[FreeLetter] = []
    seen: set[int] = set()
    for gen in generators:
        if len(gen.vector) != 1:
            return None
        ((word, coeff),) = gen.vector.items()
        if len(word) != 1 or coeff != 1 or word[0] in seen or ambient.letter_dim(word[0]) != gen.dim:
            return None
        seen.add(word[0])
        letters.append(FreeLetter(gen.label, word[0], gen.dim, gen.grade))
    return letters


def lie_basis(
    ambient: AmbientAlgebra, generators: Sequence[LieGenerator], horizon: int
) -> LieBasis | FreeLieBasis:
    """Span the Lie subalgebra generated by *generators* through *horizon*.

    Letters of a tensor ambient generate a free Lie algebra and get its Lyndon
    basis directly.  Otherwise dimension n is spanned by the generators of
    dimension n and the brackets [g, b] with b running over the basis already
    found in dimension n - |g|.
    """
    for gen in generators:
        if gen.dim < 1:
            raise PresentationError("Lie generators must have dimension >= 1.")
    letters = _free_letters(ambient, generators)
    if letters is not None:
        return free_lie_basis(ambient, letters, horizon)
    horizon = min(horizon, ambient.trunc)
    basis = LieBasis(ambient, horizon)
    by_dim: dict[int, list[LieGenerator]] = {}
    for gen in generators:
        by_dim.setdefault(gen.dim, []).append(gen)
    for n in range(1, horizon + 1):
        echelon = Echelon()
        vectors: list[dict] = []
        labels: list[Tree] = []
        grades: list[int] = []

        def offer(vector: dict, label: Tree, grade: int) -> None:
            if not vector:
                return
            independent, _ = echelon.insert(vector, len(vectors))
            if independent:
                vectors.append(vector)
                labels.append(label)
                grades.append(grade)

        for gen in by_dim.get(n, []):
            offer(dict(gen.vector), gen.label, gen.grade)
        for gen in generators:
            m = n - gen.dim
            for vector, label, grade in zip(
                basis.vectors.get(m, []), basis.labels.get(m, []), basis.grades.get(m, [])
            ):
                bracketed = commutator_terms(ambient, gen.vector, vector, gen.dim, m)
                offer(bracketed, (gen.label, label), gen.grade + grade)
        if vectors:
            basis.vectors[n] = vectors
            basis.labels[n] = labels
            basis.grades[n] = grades
            basis.echelons[n] = echelon
        logger.debug("Lie basis dimension %d has rank %d", n, len(vectors))
    return basis


@dataclass(slots=True, eq=False)
class LieComplex:
    """A dgL living in an ambient algebra.

    ``letter_differential`` maps letter indices to the ambient value of their
    differential; letters that are absent have zero differential.  When
    ``graded`` is set the differential lowers the generator grade by exactly
    one, so every cycle is kept homogeneous in the grade.

    Kernels, images and homology are computed in coordinates against the Lie
    basis; ambient words only appear at the boundary of the API.
    """

    ambient: AmbientAlgebra
    generators: list[LieGenerator]
    letter_differential: dict[int, dict]
    horizon: int
    graded: bool = False
    _word_cache: dict[Word, dict] = field(default_factory=dict)
    _basis: LieBasis | FreeLieBasis | None = None
    _images: dict[tuple[int, int], dict[int, Fraction]] = field(default_factory=dict)
    _levels: dict[int, "_DimensionData"] = field(default_factory=dict)

    @property
    def basis(self) -> LieBasis | FreeLieBasis:
        if self._basis is None:
            self._basis = lie_basis(self.ambient, self.generators, self.horizon)
        return self._basis

    def d_word(self, word: Word) -> dict:
        cached = self._word_cache.get(word)
        if cached is not None:
            return cached
        result: dict = {}
        prefix_dim = 0
        tensor = self.ambient.kind == "tensor"
        for i, letter in enumerate(word):
            value = self.letter_differential.get(letter)
            if value:
                sign = -1 if prefix_dim % 2 else 1
                head, tail = word[:i], word[i + 1:]
                if tensor:
                    for w, c in value.items():
                        axpy(result, {head + w + tail: ONE}, sign * c)
                else:
                    product = self.ambient.multiply(self.ambient.multiply({head: ONE}, value), {tail: ONE})
                    axpy(result, product, sign)
            prefix_dim += self.ambient.letter_dim(letter)
        self._word_cache[word] = result
        return result

    def d(self, vector: Mapping[Word, Fraction]) -> dict:
        result: dict = {}
        for word, coeff in vector.items():
            axpy(result, self.d_word(word), coeff)
        return result

    def image(self, n: int, j: int) -> dict[int, Fraction]:
        """d of basis element j in dimension n, in coordinates of dimension n - 1."""
        key = (n, j)
        cached = self._images.get(key)
        if cached is not None:
            return cached
        basis = self.basis
        if isinstance(basis, FreeLieBasis):
            result = self._free_image(basis, n, j)
        else:
            value = self.d(basis.vector(n, j))
            result = basis.coordinates(n - 1, value) if value else {}
            if result is None:
                raise LinearAlgebraError(f"d leaves the Lie algebra in dimension {n}.")
        self._images[key] = result
        return result

    def _free_image(self, basis: FreeLieBasis, n: int, j: int) -> dict[int, Fraction]:
        # d is a derivation: d[u, v] = [du, v] + (-1)^|u| [u, dv]
        kind = basis.factors[n][j]
        if kind[0] == "letter":
            value = self.letter_differential.get(kind[1])
            return basis.lie_coordinates(n - 1, value) if value else {}
        left, right = (kind[1], kind[2]) if kind[0] == "pair" else (kind[1], kind[1])
        (p, a), (q, b) = left, right
        result: dict[int, Fraction] = {}
        for c, coeff in self.image(p, a).items():
            axpy(result, basis.bracket(p - 1, c, q, b), coeff)
        sign = -1 if p % 2 else 1
        for c, coeff in self.image(q, b).items():
            axpy(result, basis.bracket(p, a, q - 1, c), sign * coeff)
        return result

    def dimension_data(self, n: int) -> "_DimensionData":
        """Images of the basis in dimension n and the kernel relations among them."""
        data = self._levels.get(n)
        if data is not None:
            return data
        grades = self.basis.grades.get(n, [])
        order = sorted(range(len(grades)), key=lambda j: (grades[j], j))
        images = Echelon()
        kernel: list[tuple[int, dict]] = []
        for j in order:
            independent, relation = images.insert(self.image(n, j), j)
            if independent:
                continue
            if self.graded:
                relation = {k: c for k, c in relation.items() if grades[k] == grades[j]}
            kernel.append((grades[j], relation))
        data = _DimensionData(images, kernel)
        self._levels[n] = data
        logger.debug("Dimension %d: rank %d, kernel %d", n, len(grades), len(kernel))
        return data

    def vector(self, n: int, coords: Mapping[int, Fraction]) -> dict:
        """Ambient vector with the given basis coordinates in dimension n."""
        result: dict = {}
        for j, coeff in coords.items():
            axpy(result, self.basis.vector(n, j), coeff)
        return result

    def expression(self, n: int, vector: Mapping) -> LieExpr:
        """Rewrite an ambient vector of dimension n as a bracket expression."""
        if not vector:
            return LieExpr.zero()
        coords = self.basis.coordinates(n, vector)
        if coords is None:
            raise PresentationError(f"Vector of dimension {n} does not lie in the Lie algebra.")
        labels = self.basis.labels[n]
        return LieExpr.from_terms((labels[j], coeff) for j, coeff in coords.items())

    def bounding_chain(self, n: int, vector: Mapping) -> dict | None:
        """A chain c of dimension n + 1 with dc = vector, or ``None``."""
        if not vector:
            return {}
        if n + 1 > self.basis.horizon:
            return None
        coords = self.basis.coordinates(n, vector)
        if coords is None:
            return None
        chain = self.dimension_data(n + 1).images.solve(coords)
        if chain is None:
            return None
        return self.vector(n + 1, chain)


@dataclass(slots=True)
class _DimensionData:
    images: Echelon
    kernel: list[tuple[int, dict[int, Fraction]]]


# ----------------------------------------------------------------------
# Presentations


@dataclass(frozen=True, slots=True)
class DgLPresentation:
    """A validated presentation (LV, d) truncated at dimension ``trunc``."""

    gens: GeneratorSet
    diff: Mapping[str, LieExpr]
    trunc: int
    metadata: Mapping[str, str] = field(default_factory=dict, compare=False)
    _cache: dict = field(default_factory=dict, compare=False, repr=False)

    @property
    def ambient(self) -> AmbientAlgebra:
        ambient = self._cache.get("ambient")
        if ambient is None:
            ambient = tensor_ambient(self.gens, self.trunc)
            self._cache["ambient"] = ambient
        return ambient

    @property
    def names(self) -> list[str]:
        return [gen.name for gen in self.gens]

    @property
    def max_degree(self) -> int:
        return max((gen.degree for gen in self.gens), default=0)

    def generator(self, name: str) -> Generator:
        for gen in self.gens:
            if gen.name == name:
                return gen
        raise UnknownGenerator(f"Unknown generator {name!r}.")

    def index(self, name: str) -> int:
        for index, gen in enumerate(self.gens):
            if gen.name == name:
                return index
        raise UnknownGenerator(f"Unknown generator {name!r}.")

    def differential(self, name: str) -> LieExpr:
        return self.diff.get(name, LieExpr.zero())

    def generators_of_degree(self, degree: int) -> list[Generator]:
        return [gen for gen in self.gens if gen.degree == degree]

    def complex(self, degree: int | None = None) -> LieComplex:
        """The dgL L_i on generators of degree <= *degree* (all when ``None``)."""
        key = ("complex", degree)
        cached = self._cache.get(key)
        if cached is not None:
            return cached
        ambient = self.ambient
        seeds = []
        letter_differential = {}
        for index, gen in enumerate(self.gens):
            if degree is not None and gen.degree > degree:
                continue
            if gen.dim > self.trunc:
                continue
            grade = 1 if degree is not None and gen.degree == degree else 0
            seeds.append(LieGenerator(gen.name, {(index,): ONE}, gen.dim, grade))
            value = self.letter_value(gen.name)
            if value:
                letter_differential[index] = value
        result = LieComplex(ambient, seeds, letter_differential, self.trunc)
        self._cache[key] = result
        return result

    def letter_value(self, name: str) -> dict:
        """Ambient value of d(name)."""
        return evaluate(self, self.differential(name)).terms


def evaluate(L: DgLPresentation, expr: LieExpr) -> Element:
    """Image of *expr* in the tensor ambient under iterated graded commutators."""
    ambient = L.ambient
    memo: dict = L._cache.setdefault("evaluate", {})
    dims = {gen.name: gen.dim for gen in L.gens}

    def value(tree: Tree) -> dict:
        cached = memo.get(tree)
        if cached is not None:
            return cached
        if isinstance(tree, str):
            if tree not in dims:
                raise UnknownGenerator(f"Unknown generator {tree!r}.")
            if dims[tree] > ambient.trunc:
                ambient.overflow_count += 1
                result: dict = {}
            else:
                result = {(L.index(tree),): ONE}
        else:
            left, right = tree
            result = commutator_terms(ambient, value(left), value(right), tree_dim(left, dims), tree_dim(right, dims))
        memo[tree] = result
        return result

    total: dict = {}
    for tree, coeff in expr.terms:
        axpy(total, value(tree), coeff)
    return Element(ambient, total)


def _normalize_generators(gens: Iterable[Generator | tuple]) -> GeneratorSet:
    items = []
    seen: set[str] = set()
    for gen in gens:
        if not isinstance(gen, Generator):
            name, degree, dim = gen
            gen = Generator(str(name), int(degree), int(dim))
        if gen.name in seen:
            raise DuplicateGenerator(f"Duplicate generator name {gen.name!r}.")
        if gen.degree < 1 or gen.dim < 1:
            raise PresentationError(f"Generator {gen.name!r} needs degree >= 1 and dim >= 1.")
        seen.add(gen.name)
        items.append(gen)
    return GeneratorSet(tuple(items))


def build(
    gens: Iterable[Generator | tuple],
    diff: Mapping[str, LieExpr],
    trunc: int,
    metadata: Mapping[str, str] | None = None,
) -> DgLPresentation:
    """Validate and build a presentation.

    Checks that d lowers degree, lowers dimension by exactly one, and squares
    to zero on every generator whose differential fits under ``trunc``.
    """
    if trunc < 1:
        raise PresentationError("Truncation must be at least 1.")
    gen_set = _normalize_generators(gens)
    by_name = {gen.name: gen for gen in gen_set}
    cleaned: dict[str, LieExpr] = {}
    for name, expr in diff.items():
        if name not in by_name:
            raise UnknownGenerator(f"Differential given for unknown generator {name!r}.")
        for leaf in expr.leaves():
            if leaf not in by_name:
                raise UnknownGenerator(f"d({name}) mentions unknown generator {leaf!r}.")
        if not expr.is_zero:
            cleaned[name] = expr
    dims = {name: gen.dim for name, gen in by_name.items()}
    for name, expr in cleaned.items():
        gen = by_name[name]
        for leaf in expr.leaves():
            if by_name[leaf].degree >= gen.degree:
                raise DegreeViolation(
                    f"d({name}) uses {leaf!r} of degree {by_name[leaf].degree}, expected < {gen.degree}."
                )
        for tree, _ in expr.terms:
            if tree_dim(tree, dims) != gen.dim - 1:
                raise DimensionViolation(
                    f"d({name}) has a term {render_tree(tree)} of dimension {tree_dim(tree, dims)}, expected {gen.dim - 1}."
                )
    presentation = DgLPresentation(gen_set, cleaned, trunc, dict(metadata or {}))
    complex_ = presentation.complex()
    for name in cleaned:
        if by_name[name].dim > trunc:
            continue
        square = complex_.d(presentation.letter_value(name))
        if square:
            raise DSquareNonzero(name, Element(presentation.ambient, square))
    logger.debug("Built presentation with %d generators, trunc %d", len(gen_set), trunc)
    return presentation


def sub_dgl(L: DgLPresentation, i: int) -> DgLPresentation:
    """Restriction of *L* to generators of degree <= i."""
    if i < 1:
        raise PresentationError("Sub-dgL degree must be at least 1.")
    if i >= L.max_degree:
        return L
    gens = [gen for gen in L.gens if gen.degree <= i]
    kept = {gen.name for gen in gens}
    diff = {name: expr for name, expr in L.diff.items() if name in kept}
    return DgLPresentation(GeneratorSet(tuple(gens)), diff, L.trunc, dict(L.metadata))


def differential_matrices(L: DgLPresentation | LieComplex) -> dict[int, list[dict[int, Fraction]]]:
    """Columns of d: L_n -> L_{n-1} in the computed Lie bases, for n <= horizon."""
    complex_ = L.complex() if isinstance(L, DgLPresentation) else L
    basis = complex_.basis
    matrices: dict[int, list[dict[int, Fraction]]] = {}
    for n in range(1, basis.horizon + 1):
        columns = [complex_.image(n, j) for j in range(basis.rank(n))]
        if columns:
            matrices[n] = columns
    return matrices


# ----------------------------------------------------------------------
# Homology


@dataclass(slots=True, eq=False)
class HomologyResult:
    """Homology of a dgL with explicit representative cycles.

    Classes are indexed globally in order of dimension.  ``rep_grades`` holds,
    for each class, the generator grade of its representative; for graded
    complexes this is the grade of the class, otherwise the filtration level
    at which it first appears.  Representatives are kept as Lie basis
    coordinates and turned into ambient vectors on first use.
    """

    complex: LieComplex
    horizon: int
    rep_coords: list[dict[int, Fraction]] = field(default_factory=list)
    rep_dims: list[int] = field(default_factory=list)
    rep_grades: list[int] = field(default_factory=list)
    cycle_ranks: dict[int, int] = field(default_factory=dict)
    boundary_ranks: dict[int, int] = field(default_factory=dict)
    reducers: dict[int, Echelon] = field(default_factory=dict)
    _reps: list[dict] | None = None
    _sc: ScLie | None = None

    @property
    def reps(self) -> list[dict]:
        if self._reps is None:
            self._reps = [
                self.complex.vector(n, coords) for n, coords in zip(self.rep_dims, self.rep_coords)
            ]
        return self._reps

    @property
    def dims(self) -> GradedDims:
        counts: dict[int, int] = {}
        for n in self.rep_dims:
            counts[n] = counts.get(n, 0) + 1
        return GradedDims(counts, self.horizon)

    def dims_by_grade(self, grade: int) -> GradedDims:
        counts: dict[int, int] = {}
        for n, g in zip(self.rep_dims, self.rep_grades):
            if g == grade:
                counts[n] = counts.get(n, 0) + 1
        return GradedDims(counts, self.horizon)

    def classes_in_dim(self, n: int) -> list[int]:
        return [k for k, d in enumerate(self.rep_dims) if d == n]

    def __len__(self) -> int:
        return len(self.rep_dims)

    def class_vector(self, coords: Mapping[int, Fraction]) -> dict:
        return combine(coords, dict(enumerate(self.reps)))

    def coordinates(self, vector: Mapping[Word, Fraction], n: int | None = None) -> dict[int, Fraction]:
        """Class coordinates of a cycle given in ambient words."""
        if not vector:
            return {}
        if n is None:
            dims = {self.complex.ambient.word_dim(w) for w in vector}
            if len(dims) != 1:
                raise NotACycle("Class coordinates need a homogeneous vector.")
            n = dims.pop()
        if n > self.horizon:
            raise NotACycle(f"Dimension {n} lies beyond the homology horizon {self.horizon}.")
        coords = self.complex.basis.coordinates(n, vector)
        if coords is None:
            raise NotACycle("Vector does not lie in the Lie algebra.")
        return self.class_coordinates(n, coords)

    def class_coordinates(self, n: int, coords: Mapping[int, Fraction]) -> dict[int, Fraction]:
        """Class coordinates of a cycle given in Lie basis coordinates of dimension n."""
        boundary: dict = {}
        for j, coeff in coords.items():
            axpy(boundary, self.complex.image(n, j), coeff)
        if boundary:
            raise NotACycle("Vector has non-zero differential.")
        reducer = self.reducers.get(n)
        solution = reducer.solve(coords) if reducer is not None else None
        if solution is None:
            raise NotACycle("Vector is not a cycle of this Lie algebra.")
        return {label[1]: coeff for label, coeff in solution.items() if isinstance(label, tuple)}

    def is_boundary(self, vector: Mapping[Word, Fraction], n: int | None = None) -> bool:
        return not self.coordinates(vector, n)

    @property
    def sc(self) -> ScLie:
        """Brackets of representatives reduced modulo boundaries."""
        if self._sc is None:
            self._sc = self.structure_constants(range(len(self)))
        return self._sc

    def structure_constants(self, indices: Iterable[int]) -> ScLie:
        """Bracket table on the classes *indices*, which must span a subalgebra."""
        indices = list(indices)
        position = {k: t for t, k in enumerate(indices)}
        basis = self.complex.basis
        table: dict[tuple[int, int], dict[int, Fraction]] = {}
        for s, a in enumerate(indices):
            for b in indices[s:]:
                p, q = self.rep_dims[a], self.rep_dims[b]
                if p + q > self.horizon:
                    continue
                coords = self.class_coordinates(p + q, self._bracket_coords(basis, a, b))
                if not coords:
                    continue
                if any(k not in position for k in coords):
                    raise InvalidStructureConstants("Classes do not span a bracket-closed subspace.")
                local = {position[k]: c for k, c in coords.items()}
                table[(position[a], position[b])] = local
                if a != b:
                    table[(position[b], position[a])] = scaled(local, -koszul_sign(p, q))
        return ScLie(
            tuple(self.rep_dims[k] for k in indices),
            table,
            self.horizon,
            tuple(f"h{k}" for k in indices),
        )

    def _bracket_coords(self, basis: LieBasis | FreeLieBasis, a: int, b: int) -> dict[int, Fraction]:
        p, q = self.rep_dims[a], self.rep_dims[b]
        if isinstance(basis, FreeLieBasis):
            result: dict[int, Fraction] = {}
            for i, x in self.rep_coords[a].items():
                for j, y in self.rep_coords[b].items():
                    axpy(result, basis.bracket(p, i, q, j), x * y)
            return result
        value = commutator_terms(self.complex.ambient, self.reps[a], self.reps[b], p, q)
        if not value:
            return {}
        coords = basis.coordinates(p + q, value)
        if coords is None:
            raise InvalidStructureConstants("Bracket of representatives leaves the Lie algebra.")
        return coords


def _compute_homology(complex_: LieComplex) -> HomologyResult:
    basis = complex_.basis
    horizon = basis.horizon - 1
    result = HomologyResult(complex_, max(horizon, 0))
    for n in range(1, horizon + 1):
        data = complex_.dimension_data(n)
        # rows of the image echelon one dimension up span the boundaries
        reducer = complex_.dimension_data(n + 1).images.copy()
        for grade, cycle in data.kernel:
            independent, _ = reducer.insert(cycle, ("r", len(result.rep_dims)))
            if independent:
                result.rep_coords.append(cycle)
                result.rep_dims.append(n)
                result.rep_grades.append(grade)
        result.cycle_ranks[n] = len(data.kernel)
        result.boundary_ranks[n] = complex_.dimension_data(n + 1).images.rank
        result.reducers[n] = reducer
        logger.debug(
            "H_%d: cycles %d, boundaries %d", n, result.cycle_ranks[n], result.boundary_ranks[n]
        )
    return result


def homology(L: DgLPresentation | LieComplex) -> HomologyResult:
    """Homology through dimension ``trunc - 1``."""
    if isinstance(L, LieComplex):
        return _compute_homology(L)
    return homology_upto(L, L.max_degree)


def homology_upto(L: DgLPresentation, i: int) -> HomologyResult:
    """Homology of L_i computed inside the ambient of *L*.

    Lie basis elements are graded by their number of degree-i letters, so
    ``rep_grades`` gives the filtration by word length in V_i.
    """
    if i >= L.max_degree and i > 0:
        key = ("homology_upto", L.max_degree)
    else:
        key = ("homology_upto", max(i, 0))
    cached = L._cache.get(key)
    if cached is None:
        cached = _compute_homology(L.complex(key[1]))
        L._cache[key] = cached
        logger.info("Homology of L_%d through %d: %s", key[1], cached.horizon, cached.dims.table())
    return cached


def envelope_homology_dims(L: DgLPresentation) -> GradedDims:
    """Positive-dimensional homology of the tensor-algebra complex (T(V), d) through ``trunc - 1``.

    The unit in dimension zero is left out, as for every ``GradedDims``; use
    ``hilbert_series`` to compare with ``pbw_series``.
    """
    complex_ = L.complex()
    ambient = L.ambient
    ranks: dict[int, int] = {}

    def image_rank(n: int) -> int:
        if n == 0:
            return 0
        echelon = Echelon(track=False)
        for word in ambient.basis(n):
            image = complex_.d_word(word)
            if image:
                echelon.insert(image, word)
        return echelon.rank

    previous = image_rank(1)
    for n in range(1, L.trunc):
        following = image_rank(n + 1)
        ranks[n] = len(ambient.basis(n)) - previous - following
        previous = following
    return GradedDims(ranks, L.trunc - 1)
