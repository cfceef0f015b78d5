"""Degree filtration of a dgL and the separated condition.

For a presentation of length N and 1 <= i <= N this module computes the
homology HL_i of the sub-dgL on generators of degree <= i, the image HL_i^-
of HL_{i-1}, the ideal HL_i^+ generated by the classes of d(V_{i+1}), the
complex EL_i = (HL_{i-1} * LV_i, d~) and the dimension identities relating
them for separated presentations.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping

from .algebra import ScLie, free_product_ambient, pbw_ambient, tensor_ambient
from .dgl import (
    DgLPresentation,
    HomologyResult,
    LieComplex,
    LieGenerator,
    homology,
    homology_upto,
)
from .freeness import FreenessCertificate, schreier_check
from .linalg import Echelon, GradedSubspace, axpy, combine
from .series import GradedDims, free_lie_dims, pbw_series

__all__ = [
    "SeparationError",
    "NotSeparated",
    "InsufficientTruncation",
    "InducedMap",
    "DegreeSeparation",
    "SeparationReport",
    "EtildeResult",
    "HatRow",
    "HatTable",
    "VerificationReport",
    "Analysis",
    "analysis",
    "induced_H_map",
    "tilde_d",
    "ideal_closure",
    "is_separated",
    "kn_separated",
    "etilde",
    "etilde_homology_split",
    "gr_dims",
    "hat_dims",
    "hat_table",
    "verify_sep_then",
    "strong_freeness",
]

logger = logging.getLogger(__name__)

ONE = Fraction(1)


class SeparationError(RuntimeError):
    """Raised when a separation analysis cannot be carried out."""


class NotSeparated(SeparationError):
    """Raised when an operation requires a separated presentation."""


class InsufficientTruncation(SeparationError):
    """Raised when the truncation leaves no usable homology horizon."""


@dataclass(slots=True, eq=False)
class InducedMap:
    """The map HL_{i-1} -> HL_i with its image HL_i^-.

    ``columns[k]`` holds the HL_i coordinates of the k-th HL_{i-1} class.
    """

    source: HomologyResult
    target: HomologyResult
    columns: list[dict[int, Fraction]]
    image: GradedSubspace
    _solvers: dict[int, Echelon] = field(default_factory=dict)

    def matrix(self, n: int) -> list[dict[int, Fraction]]:
        return [self.columns[k] for k in self.source.classes_in_dim(n)]

    def apply(self, coords: Mapping[int, Fraction]) -> dict[int, Fraction]:
        return combine(coords, dict(enumerate(self.columns)))

    def preimage(self, n: int, coords: Mapping[int, Fraction]) -> dict[int, Fraction] | None:
        """Source coordinates mapping onto *coords*, or ``None``."""
        solver = self._solvers.get(n)
        if solver is None:
            solver = Echelon()
            for k in self.source.classes_in_dim(n):
                solver.insert(self.columns[k], k)
            self._solvers[n] = solver
        return solver.solve(coords)


@dataclass(frozen=True, slots=True)
class DegreeSeparation:
    degree: int
    minus: GradedDims
    plus: GradedDims
    intersection: GradedDims


@dataclass(frozen=True, slots=True)
class SeparationReport:
    """Per-degree ranks of HL_i^-, HL_i^+ and their intersection."""

    horizon: int
    degrees: tuple[DegreeSeparation, ...] = ()

    @property
    def separated(self) -> bool:
        return all(not row.intersection.ranks for row in self.degrees)

    def failures(self, through: int | None = None) -> list[tuple[int, int]]:
        """Pairs (n, k) with a non-zero intersection, ordered by dimension then degree."""
        pairs = []
        for row in self.degrees:
            for n in row.intersection.ranks:
                if through is None or n <= through:
                    pairs.append((n, row.degree))
        return sorted(pairs)


@dataclass(slots=True, eq=False)
class EtildeResult:
    """Homology of EL_i split by word length in V_i."""

    degree: int
    homology: HomologyResult
    horizon: int
    length0: GradedDims
    length1: GradedDims
    higher: dict[int, GradedDims]
    sc0: ScLie
    length0_classes: list[int]

    @property
    def total(self) -> GradedDims:
        return self.homology.dims


@dataclass(frozen=True, slots=True)
class HatRow:
    degree: int
    semidirect: GradedDims
    free_side: GradedDims

    @property
    def agree(self) -> bool:
        return self.semidirect == self.free_side


@dataclass(frozen=True, slots=True)
class HatTable:
    """The summands of HL = sum_i L^_i computed two independent ways."""

    horizon: int
    rows: tuple[HatRow, ...]
    homology: GradedDims
    surjective_top: bool
    top_length1: GradedDims

    @property
    def total(self) -> GradedDims:
        total = GradedDims({}, self.horizon)
        for row in self.rows:
            total = total + row.free_side
        return total

    @property
    def sums_match(self) -> bool:
        return self.total.agrees_with(self.homology, self.horizon)

    @property
    def passed(self) -> bool:
        return self.sums_match and all(row.agree for row in self.rows)


@dataclass(slots=True)
class VerificationReport:
    """Outcome of the structure checks for one degree."""

    degree: int
    horizon: int
    checks: dict[str, bool] = field(default_factory=dict)
    details: dict[str, str] = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return all(self.checks.values())


def ideal_closure(lie: ScLie, seeds: Iterable[tuple[int, Mapping[int, Fraction]]]) -> GradedSubspace:
    """Smallest subspace containing *seeds* that is stable under bracketing with *lie*."""
    space = GradedSubspace(lie.horizon)
    pending: list[tuple[int, dict]] = []
    for n, vector in seeds:
        if space.add(n, vector):
            pending.append((n, dict(vector)))
    while pending:
        n, vector = pending.pop(0)
        for j, m in enumerate(lie.dims):
            if n + m > lie.horizon:
                continue
            image = lie.bracket_vectors({j: ONE}, vector)
            if image and space.add(n + m, image):
                pending.append((n + m, image))
    return space


class Analysis:
    """Cached filtration data of one presentation."""

    def __init__(self, presentation: DgLPresentation) -> None:
        self.presentation = presentation
        self.length = presentation.max_degree
        self.horizon = presentation.trunc - 1
        self._maps: dict[int, InducedMap] = {}
        self._tilde: dict[int, dict[str, dict[int, Fraction]]] = {}
        self._plus: dict[int, GradedSubspace] = {}
        self._etilde: dict[int, LieComplex] = {}
        self._split: dict[int, EtildeResult] = {}

    def homology(self, i: int) -> HomologyResult:
        return homology_upto(self.presentation, max(i, 0))

    def induced_map(self, i: int) -> InducedMap:
        cached = self._maps.get(i)
        if cached is not None:
            return cached
        source, target = self.homology(i - 1), self.homology(i)
        columns = [target.coordinates(rep, n) for rep, n in zip(source.reps, source.rep_dims)]
        image = GradedSubspace(target.horizon)
        for n, column in zip(source.rep_dims, columns):
            image.add(n, column)
        result = InducedMap(source, target, columns, image)
        self._maps[i] = result
        return result

    def minus(self, i: int) -> GradedSubspace:
        return self.induced_map(i).image

    def tilde_d(self, i: int) -> dict[str, dict[int, Fraction]]:
        cached = self._tilde.get(i)
        if cached is not None:
            return cached
        L = self.presentation
        lower = self.homology(i - 1)
        result: dict[str, dict[int, Fraction]] = {}
        for gen in L.generators_of_degree(i):
            if gen.dim - 1 > lower.horizon:
                continue
            value = L.letter_value(gen.name)
            result[gen.name] = lower.coordinates(value, gen.dim - 1) if value else {}
        self._tilde[i] = result
        return result

    def plus(self, i: int) -> GradedSubspace:
        cached = self._plus.get(i)
        if cached is not None:
            return cached
        H = self.homology(i)
        dims = {gen.name: gen.dim for gen in self.presentation.gens}
        seeds = [(dims[name] - 1, coords) for name, coords in self.tilde_d(i + 1).items() if coords]
        if seeds:
            result = ideal_closure(H.sc, seeds)
        else:
            result = GradedSubspace(H.horizon)
        self._plus[i] = result
        return result

    def intersection(self, i: int) -> GradedSubspace:
        return self.minus(i).intersection(self.plus(i))

    def report(self) -> SeparationReport:
        rows = []
        for i in range(1, self.length + 1):
            rows.append(
                DegreeSeparation(
                    i, self.minus(i).dims(), self.plus(i).dims(), self.intersection(i).dims()
                )
            )
        report = SeparationReport(self.horizon, tuple(rows))
        logger.info("Separation report: separated=%s failures=%s", report.separated, report.failures())
        return report

    def etilde(self, i: int) -> LieComplex:
        cached = self._etilde.get(i)
        if cached is not None:
            return cached
        L = self.presentation
        lower = self.homology(i - 1)
        if lower.horizon < 2:
            raise InsufficientTruncation(
                f"Homology horizon {lower.horizon} of L_{i - 1} is too small to build EL_{i}."
            )
        sc = lower.sc if len(lower) else ScLie.empty(lower.horizon)
        top = [gen for gen in L.generators_of_degree(i) if gen.dim <= lower.horizon]
        ambient = free_product_ambient(
            pbw_ambient(sc, lower.horizon), tensor_ambient(top, lower.horizon), lower.horizon
        )
        offset = len(sc)
        seeds = [
            LieGenerator(name, {(k,): ONE}, dim, 0) for k, (name, dim) in enumerate(zip(sc.names, sc.dims))
        ]
        differential: dict[int, dict] = {}
        tilde = self.tilde_d(i)
        for t, gen in enumerate(top):
            seeds.append(LieGenerator(gen.name, {(offset + t,): ONE}, gen.dim, 1))
            coords = tilde.get(gen.name, {})
            if coords:
                differential[offset + t] = {(k,): c for k, c in coords.items()}
        result = LieComplex(ambient, seeds, differential, lower.horizon, graded=True)
        self._etilde[i] = result
        return result

    def etilde_split(self, i: int) -> EtildeResult:
        cached = self._split.get(i)
        if cached is not None:
            return cached
        H = homology(self.etilde(i))
        lengths = sorted(set(H.rep_grades))
        length0 = [k for k, g in enumerate(H.rep_grades) if g == 0]
        result = EtildeResult(
            degree=i,
            homology=H,
            horizon=H.horizon,
            length0=H.dims_by_grade(0),
            length1=H.dims_by_grade(1),
            higher={g: H.dims_by_grade(g) for g in lengths if g >= 2},
            sc0=H.structure_constants(length0),
            length0_classes=length0,
        )
        logger.info(
            "EL_%d homology: length 0 %s, length 1 %s", i, result.length0.table(), result.length1.table()
        )
        self._split[i] = result
        return result

    def gr(self, i: int) -> dict[int, GradedDims]:
        H = self.homology(i)
        return {g: H.dims_by_grade(g) for g in sorted(set(H.rep_grades))}


def analysis(L: DgLPresentation) -> Analysis:
    """The shared cached analysis of *L*."""
    cached = L._cache.get("analysis")
    if cached is None:
        cached = Analysis(L)
        L._cache["analysis"] = cached
    return cached


def induced_H_map(L: DgLPresentation, i: int) -> InducedMap:
    return analysis(L).induced_map(i)


def tilde_d(L: DgLPresentation, i: int) -> dict[str, dict[int, Fraction]]:
    """HL_{i-1} coordinates of [dv] for each generator v of degree i."""
    return analysis(L).tilde_d(i)


def is_separated(L: DgLPresentation) -> SeparationReport:
    return analysis(L).report()


def kn_separated(L: DgLPresentation, k: int, n: int) -> bool:
    """Whether all HL_i^+ and HL_i^- meet trivially for i < k, and for i = k below dimension n."""
    a = analysis(L)
    for i in range(1, k):
        if a.intersection(i).basis:
            return False
    return all(m >= n for m in a.intersection(k).basis)


def etilde(L: DgLPresentation, i: int) -> LieComplex:
    return analysis(L).etilde(i)


def etilde_homology_split(L: DgLPresentation, i: int) -> EtildeResult:
    return analysis(L).etilde_split(i)


def gr_dims(L: DgLPresentation, i: int) -> dict[int, GradedDims]:
    """Ranks of gr(HL_i) for the filtration by word length in V_i."""
    return analysis(L).gr(i)


def _require_separated(L: DgLPresentation) -> Analysis:
    a = analysis(L)
    report = a.report()
    if not report.separated:
        raise NotSeparated(f"Presentation is not separated: failures at (n, k) = {report.failures()}.")
    return a


def hat_table(L: DgLPresentation) -> HatTable:
    """L^_i for every degree, computed from HL^- and independently from EL_i."""
    a = _require_separated(L)
    N = a.length
    horizon = a.horizon - 1
    full = homology(L).dims
    rows = []
    for i in range(1, N + 1):
        upper = a.minus(i + 1).dims() if i < N else full
        semidirect = (upper - a.minus(i).dims()).truncate(horizon)
        split = a.etilde_split(i)
        free_side = free_lie_dims(split.length1.truncate(horizon)) - a.plus(i).dims().truncate(horizon)
        rows.append(HatRow(i, semidirect, free_side))
    top = a.etilde_split(N).length1.truncate(horizon) if N else GradedDims({}, horizon)
    surjective = a.minus(N).dims().agrees_with(full, horizon) if N else True
    return HatTable(horizon, tuple(rows), full.truncate(horizon), surjective, top)


def hat_dims(L: DgLPresentation, i: int) -> HatRow:
    table = hat_table(L)
    for row in table.rows:
        if row.degree == i:
            return row
    return HatRow(i, GradedDims({}, table.horizon), GradedDims({}, table.horizon))


def _envelope_coords(vector: Mapping[tuple[int, ...], Fraction]) -> dict[int, Fraction]:
    coords: dict[int, Fraction] = {}
    for word, coeff in vector.items():
        if len(word) != 1:
            raise SeparationError("Length-0 class is not a combination of HL_{i-1} classes.")
        axpy(coords, {word[0]: coeff})
    return coords


def verify_sep_then(L: DgLPresentation, i: int) -> VerificationReport:
    """Check gr(HL_i) = (HE_i)_0 x| L((HE_i)_1) and (HE_i)_0 = HL_i^- dimension by dimension."""
    a = _require_separated(L)
    split = a.etilde_split(i)
    horizon = split.horizon
    report = VerificationReport(i, horizon)
    gr = {g: dims.truncate(horizon) for g, dims in a.gr(i).items()}
    empty = GradedDims({}, horizon)

    gr0 = gr.get(0, empty)
    report.checks["gr0_is_length0"] = gr0.agrees_with(split.length0, horizon)
    positive = empty
    for g, dims in gr.items():
        if g >= 1:
            positive = positive + dims
    free = free_lie_dims(split.length1)
    report.checks["gr_positive_is_free"] = positive.agrees_with(free, horizon)
    report.details["gr"] = "; ".join(f"{g}: {dims.table()}" for g, dims in sorted(gr.items()))
    report.details["free"] = str(free.table())

    induced = a.induced_map(i)
    target = induced.target
    images: dict[int, dict[int, Fraction]] = {}
    for k in split.length0_classes:
        lower = _envelope_coords(split.homology.reps[k])
        images[k] = induced.apply(lower)
    injective = True
    spans_minus = True
    minus = a.minus(i)
    for n in range(1, horizon + 1):
        classes = [k for k in split.length0_classes if split.homology.rep_dims[k] == n]
        echelon = Echelon(track=False)
        rank = echelon.extend(images[k] for k in classes)
        injective &= rank == len(classes)
        spans_minus &= rank == minus.rank(n) and all(echelon.contains(v) for v in minus.basis.get(n, []))
    report.checks["length0_injects"] = injective
    report.checks["length0_is_minus"] = spans_minus

    brackets_ok = True
    if split.length0_classes and len(target):
        sc0 = split.sc0
        sc = target.sc
        position = split.length0_classes
        for s, k in enumerate(position):
            for t, m in enumerate(position):
                p, q = sc0.dims[s], sc0.dims[t]
                if p + q > horizon:
                    continue
                inside = sc0.bracket(s, t)
                lhs = combine({position[u]: c for u, c in inside.items()}, images)
                rhs = sc.bracket_vectors(images[k], images[m])
                if lhs != rhs:
                    brackets_ok = False
    report.checks["brackets_match"] = brackets_ok

    total_gr = empty
    for dims in gr.values():
        total_gr = total_gr + dims
    report.checks["envelope_series"] = pbw_series(total_gr).agrees_with(pbw_series(split.total.truncate(horizon)))
    logger.info("Structure checks for degree %d: %s", i, report.checks)
    return report


def strong_freeness(L: DgLPresentation) -> dict[int, FreenessCertificate]:
    """Certify that each HL_i^+ is a free Lie algebra through the horizon.

    Freeness is tested inside HL_i itself, with the bottom filtration piece
    F_0 taken to be HL_i^-.
    """
    a = analysis(L)
    certificates = {}
    for i in range(1, a.length + 1):
        H = a.homology(i)
        generators = a.plus(i).vectors()
        f0 = a.minus(i).vectors()
        lie = H.sc if len(H) else ScLie.empty(H.horizon)
        certificates[i] = schreier_check(lie, generators, f0)
    return certificates
