"""Exact truncated power series and the closed-form Hilbert series of the engine."""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

__all__ = [
    "SeriesError",
    "NotInvertible",
    "SeriesZ",
    "GradedDims",
    "ProductSpheresPolys",
    "series_inverse",
    "pbw_series",
    "tensor_series",
    "free_lie_dims",
    "prod_spheres_polys",
    "anick_rhs",
    "anick_chain",
    "free_product_inverse",
]

logger = logging.getLogger(__name__)


class SeriesError(RuntimeError):
    """Raised when a series operation cannot be carried out."""


class NotInvertible(SeriesError):
    """Raised when inverting a series whose constant term is not a unit."""


def _min_order(a: int | None, b: int | None) -> int | None:
    if a is None:
        return b
    if b is None:
        return a
    return min(a, b)


@dataclass(frozen=True, slots=True)
class SeriesZ:
    """Integer power series valid through ``trunc_order``.

    ``trunc_order=None`` marks an exact polynomial.  Coefficients are stored
    lowest degree first with trailing zeros stripped.
    """

    coeffs: tuple[int, ...] = ()
    trunc_order: int | None = None

    def __post_init__(self) -> None:
        values = list(self.coeffs)
        if self.trunc_order is not None:
            if self.trunc_order < 0:
                raise SeriesError("Truncation order must be non-negative.")
            values = values[: self.trunc_order + 1]
        while values and values[-1] == 0:
            values.pop()
        object.__setattr__(self, "coeffs", tuple(int(c) for c in values))

    # ------------------------------------------------------------------
    # Constructors
    @classmethod
    def from_mapping(cls, coeffs: Mapping[int, int], trunc_order: int | None = None) -> "SeriesZ":
        if not coeffs:
            return cls((), trunc_order)
        if min(coeffs) < 0:
            raise SeriesError("Series exponents must be non-negative.")
        values = [0] * (max(coeffs) + 1)
        for exponent, value in coeffs.items():
            values[exponent] += value
        return cls(tuple(values), trunc_order)

    @classmethod
    def monomial(cls, exponent: int, coeff: int = 1, trunc_order: int | None = None) -> "SeriesZ":
        return cls.from_mapping({exponent: coeff}, trunc_order)

    @classmethod
    def one(cls, trunc_order: int | None = None) -> "SeriesZ":
        return cls((1,), trunc_order)

    # ------------------------------------------------------------------
    def coefficient(self, n: int) -> int:
        if self.trunc_order is not None and n > self.trunc_order:
            raise SeriesError(f"Coefficient z^{n} lies beyond truncation order {self.trunc_order}.")
        return self.coeffs[n] if 0 <= n < len(self.coeffs) else 0

    def coefficients(self, through: int | None = None) -> list[int]:
        """Return coefficients of z^0..z^through (default: through the truncation order)."""
        upper = self.trunc_order if through is None else through
        if upper is None:
            upper = len(self.coeffs) - 1
        return [self.coefficient(n) for n in range(upper + 1)]

    @property
    def is_polynomial(self) -> bool:
        return self.trunc_order is None

    def truncate(self, order: int) -> "SeriesZ":
        return SeriesZ(self.coeffs, _min_order(self.trunc_order, order))

    def agrees_with(self, other: "SeriesZ") -> bool:
        """Equality through the common truncation order."""
        order = _min_order(self.trunc_order, other.trunc_order)
        if order is None:
            return self.coeffs == other.coeffs
        return self.truncate(order).coeffs == other.truncate(order).coeffs

    # ------------------------------------------------------------------
    # Arithmetic
    def __add__(self, other: "SeriesZ | int") -> "SeriesZ":
        other = _as_series(other)
        size = max(len(self.coeffs), len(other.coeffs))
        values = [self.coefficient_raw(n) + other.coefficient_raw(n) for n in range(size)]
        return SeriesZ(tuple(values), _min_order(self.trunc_order, other.trunc_order))

    __radd__ = __add__

    def __neg__(self) -> "SeriesZ":
        return SeriesZ(tuple(-c for c in self.coeffs), self.trunc_order)

    def __sub__(self, other: "SeriesZ | int") -> "SeriesZ":
        return self + (-_as_series(other))

    def __rsub__(self, other: int) -> "SeriesZ":
        return _as_series(other) - self

    def __mul__(self, other: "SeriesZ | int") -> "SeriesZ":
        if isinstance(other, int):
            return SeriesZ(tuple(other * c for c in self.coeffs), self.trunc_order)
        order = _min_order(self.trunc_order, other.trunc_order)
        size = len(self.coeffs) + len(other.coeffs) - 1
        if order is not None:
            size = min(size, order + 1)
        values = [0] * max(size, 0)
        for i, a in enumerate(self.coeffs):
            if a == 0 or i >= len(values):
                continue
            for j, b in enumerate(other.coeffs):
                if i + j >= len(values):
                    break
                values[i + j] += a * b
        return SeriesZ(tuple(values), order)

    __rmul__ = __mul__

    def __pow__(self, exponent: int) -> "SeriesZ":
        if exponent < 0:
            return series_inverse(self) ** (-exponent)
        result = SeriesZ.one(self.trunc_order)
        base = self
        while exponent:
            if exponent & 1:
                result = result * base
            base = base * base
            exponent >>= 1
        return result

    def coefficient_raw(self, n: int) -> int:
        return self.coeffs[n] if n < len(self.coeffs) else 0

    # ------------------------------------------------------------------
    # Rendering
    def render_text(self) -> str:
        terms: list[str] = []
        for n, c in enumerate(self.coeffs):
            if c == 0:
                continue
            if n == 0:
                terms.append(str(c))
            elif n == 1:
                terms.append(f"{c} z")
            else:
                terms.append(f"{c} z^{n}")
        body = " + ".join(terms) if terms else "0"
        body = body.replace("+ -", "- ")
        if self.trunc_order is None:
            return body
        return f"{body} (trunc {self.trunc_order})"

    def render_machine(self) -> str:
        return " ".join(str(c) for c in self.coefficients())

    def __str__(self) -> str:
        return self.render_text()


def _as_series(value: "SeriesZ | int") -> SeriesZ:
    if isinstance(value, SeriesZ):
        return value
    return SeriesZ((int(value),))


@dataclass(frozen=True, slots=True)
class GradedDims:
    """Ranks of a connected finite-type graded space, exact through ``horizon``."""

    ranks: Mapping[int, int] = field(default_factory=dict)
    horizon: int = 0

    def __post_init__(self) -> None:
        cleaned: dict[int, int] = {}
        for n, rank in sorted(self.ranks.items()):
            if rank < 0:
                raise SeriesError(f"Negative rank {rank} in dimension {n}.")
            if rank == 0 or n > self.horizon:
                continue
            if n <= 0:
                raise SeriesError("Graded dimensions must vanish in dimension <= 0.")
            cleaned[n] = rank
        object.__setattr__(self, "ranks", cleaned)

    def __getitem__(self, n: int) -> int:
        return self.ranks.get(n, 0)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, GradedDims):
            return NotImplemented
        return dict(self.ranks) == dict(other.ranks) and self.horizon == other.horizon

    def agrees_with(self, other: "GradedDims", through: int | None = None) -> bool:
        upper = min(self.horizon, other.horizon) if through is None else through
        return all(self[n] == other[n] for n in range(1, upper + 1))

    def truncate(self, horizon: int) -> "GradedDims":
        return GradedDims(self.ranks, min(self.horizon, horizon))

    def series(self) -> SeriesZ:
        return SeriesZ.from_mapping(dict(self.ranks), self.horizon)

    def hilbert_series(self) -> SeriesZ:
        """Series of a connected space with these ranks: the unit plus ``series()``."""
        return SeriesZ.one(self.horizon) + self.series()

    def __add__(self, other: "GradedDims") -> "GradedDims":
        horizon = min(self.horizon, other.horizon)
        keys = set(self.ranks) | set(other.ranks)
        return GradedDims({n: self[n] + other[n] for n in keys}, horizon)

    def __sub__(self, other: "GradedDims") -> "GradedDims":
        horizon = min(self.horizon, other.horizon)
        keys = set(self.ranks) | set(other.ranks)
        return GradedDims({n: self[n] - other[n] for n in keys if n <= horizon}, horizon)

    def table(self) -> list[tuple[int, int]]:
        return sorted(self.ranks.items())


def series_inverse(f: SeriesZ, order: int | None = None) -> SeriesZ:
    """Invert *f*, whose constant term must be +1 or -1."""
    target = _min_order(f.trunc_order, order)
    if target is None:
        raise SeriesError("Inverting a polynomial requires an explicit truncation order.")
    constant = f.coefficient_raw(0)
    if constant not in (1, -1):
        raise NotInvertible(f"Constant term {constant} is not a unit in Z[[z]].")
    result = [0] * (target + 1)
    result[0] = constant
    for n in range(1, target + 1):
        acc = 0
        for j in range(1, min(n, len(f.coeffs) - 1) + 1):
            acc += f.coeffs[j] * result[n - j]
        result[n] = -constant * acc
    return SeriesZ(tuple(result), target)


def pbw_series(dims: GradedDims) -> SeriesZ:
    """Hilbert series of UL for a graded Lie algebra with the given ranks."""
    order = dims.horizon
    result = SeriesZ.one(order)
    for n, rank in dims.table():
        if n % 2:
            factor = (SeriesZ.one(order) + SeriesZ.monomial(n, 1, order)) ** rank
        else:
            factor = series_inverse(SeriesZ.one(order) - SeriesZ.monomial(n, 1, order)) ** rank
        result = result * factor
    return result


def tensor_series(gen_dims: GradedDims) -> SeriesZ:
    """Hilbert series 1/(1 - V(z)) of the tensor algebra on *gen_dims*."""
    return series_inverse(SeriesZ.one(gen_dims.horizon) - gen_dims.series())


def free_lie_dims(gen_dims: GradedDims) -> GradedDims:
    """Ranks of the free graded Lie algebra on a graded space.

    Solved one dimension at a time from ``pbw_series(l) = tensor_series(V)``: a
    new rank l_n in dimension n contributes exactly l_n z^n at order n.
    """
    horizon = gen_dims.horizon
    target = tensor_series(gen_dims)
    ranks: dict[int, int] = {}
    for n in range(1, horizon + 1):
        partial = pbw_series(GradedDims(ranks, n))
        ranks[n] = target.coefficient(n) - partial.coefficient(n)
    return GradedDims(ranks, horizon)


@dataclass(frozen=True, slots=True)
class ProductSpheresPolys:
    """The polynomials A_i(z), A(z) and B_k(z) attached to a product of spheres."""

    a: tuple[SeriesZ, ...]
    total: SeriesZ
    b: Mapping[int, SeriesZ]


def _neg_z_power(k: int) -> SeriesZ:
    return SeriesZ.monomial(k, (-1) ** k)


def prod_spheres_polys(sphere_dims: Sequence[int]) -> ProductSpheresPolys:
    """Expand prod_i (1 - z^{n_i - 1} x) = sum_i A_i(z) x^i."""
    r = len(sphere_dims)
    if r < 2 or any(n < 2 for n in sphere_dims):
        raise SeriesError("Need at least two spheres, each of dimension >= 2.")
    # coefficients in x, each a polynomial in z
    by_x: list[SeriesZ] = [SeriesZ.one()]
    for n in sphere_dims:
        shifted = [SeriesZ()] + [poly * SeriesZ.monomial(n - 1, -1) for poly in by_x]
        by_x = [(by_x[i] if i < len(by_x) else SeriesZ()) + shifted[i] for i in range(len(shifted))]
    total = SeriesZ()
    for poly in by_x:
        total = total + poly
    b: dict[int, SeriesZ] = {}
    for k in range(2, r + 1):
        tail = SeriesZ()
        for i in range(k + 1, r + 1):
            tail = tail + by_x[i]
        b[k] = _neg_z_power(k - 1) * tail
    return ProductSpheresPolys(a=tuple(by_x), total=total, b=b)


def anick_rhs(k: int, sphere_dims: Sequence[int], prev_inverse: SeriesZ) -> SeriesZ:
    """One step of the inverse Poincare series recursion for the stage-k thick wedge."""
    if k < 2:
        raise SeriesError("The recursion starts at stage k = 2.")
    polys = prod_spheres_polys(sphere_dims)
    if k > len(sphere_dims):
        raise SeriesError(f"Stage {k} exceeds the number of spheres {len(sphere_dims)}.")
    z = SeriesZ.monomial(1)
    return polys.total + _neg_z_power(k - 1) * polys.a[k] - z * (prev_inverse - polys.total)


def anick_chain(sphere_dims: Sequence[int], k: int) -> SeriesZ:
    """Run the recursion from the wedge stage up to stage *k*."""
    polys = prod_spheres_polys(sphere_dims)
    current = polys.a[0] + polys.a[1]
    for stage in range(2, k + 1):
        current = anick_rhs(stage, sphere_dims, current)
    return current


def free_product_inverse(inv_list: Iterable[SeriesZ]) -> SeriesZ:
    """Inverse Hilbert series of a free product of connected algebras."""
    factors = list(inv_list)
    if not factors:
        return SeriesZ.one()
    for factor in factors:
        if factor.coefficient_raw(0) != 1:
            raise SeriesError("Free product factors must have constant term 1.")
    total = factors[0]
    for factor in factors[1:]:
        total = total + factor
    return total - (len(factors) - 1)
