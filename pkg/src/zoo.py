"""Built-in dgL models: projective spaces, wedges and products of spheres, connected sums."""

from __future__ import annotations

import itertools
import logging
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Sequence

from . import config
from .algebra import Generator
from .dgl import (
    DgLPresentation,
    DSquareNonzero,
    LieExpr,
    Tree,
    build,
    homology_upto,
)
from .separation import analysis, is_separated
from .series import GradedDims
from .utils import sort_sign

__all__ = [
    "ZooError",
    "SignResolutionFailed",
    "MismatchedDimension",
    "TopCellWitness",
    "cpn",
    "cp_infty",
    "wedge",
    "product_spheres_cone",
    "connected_sum",
    "crafted_nonseparated",
    "random_cellular",
    "random_nonseparated",
    "top_cell_witness",
    "subset_name",
]

logger = logging.getLogger(__name__)

HALF = Fraction(1, 2)


class ZooError(RuntimeError):
    """Raised when a model family cannot be instantiated."""


class SignResolutionFailed(ZooError):
    """Raised when no configured sign rule gives a differential with d^2 = 0."""


class MismatchedDimension(ZooError):
    """Raised when connected-sum factors have different total dimensions."""


def _trunc(trunc: int | None) -> int:
    return config.DEFAULT_TRUNC if trunc is None else trunc


def cpn(n: int, trunc: int | None = None) -> DgLPresentation:
    """Model of CP^n: v_k of degree k and dimension 2k-1, dv_k = 1/2 sum_{i+j=k} [v_i, v_j]."""
    if n < 1:
        raise ZooError("CP^n needs n >= 1.")
    return _projective(n, _trunc(trunc), f"cpn {n}")


def cp_infty(trunc: int | None = None) -> DgLPresentation:
    """CP^infinity truncated to the generators of dimension <= trunc."""
    trunc = _trunc(trunc)
    return _projective((trunc + 1) // 2, trunc, "cp-infty")


def _projective(n: int, trunc: int, family: str) -> DgLPresentation:
    gens = [Generator(f"v{k}", k, 2 * k - 1) for k in range(1, n + 1)]
    diff = {}
    for k in range(2, n + 1):
        terms = []
        for i in range(1, k // 2 + 1):
            j = k - i
            terms.append(((f"v{i}", f"v{j}"), HALF if i == j else Fraction(1)))
        diff[f"v{k}"] = LieExpr.from_terms(terms)
    return build(gens, diff, trunc, {"family": family})


def wedge(sphere_dims: Sequence[int], trunc: int | None = None) -> DgLPresentation:
    """Free dgL with zero differential on x_i of dimension n_i - 1."""
    _check_spheres(sphere_dims, minimum=1)
    gens = [Generator(f"x{i}", 1, n - 1) for i, n in enumerate(sphere_dims, start=1)]
    label = ",".join(str(n) for n in sphere_dims)
    return build(gens, {}, _trunc(trunc), {"family": f"wedge {label}"})


def _check_spheres(sphere_dims: Sequence[int], minimum: int) -> None:
    if len(sphere_dims) < minimum:
        raise ZooError(f"Need at least {minimum} spheres, got {len(sphere_dims)}.")
    if any(n < 2 for n in sphere_dims):
        raise ZooError("Sphere dimensions must be at least 2.")


def subset_name(subset: Sequence[int]) -> str:
    return "x" + "_".join(str(i) for i in subset)


def _coalgebra_sign(first: tuple[int, ...], second: tuple[int, ...], spheres: Sequence[int]) -> int:
    degrees = {i: spheres[i - 1] for i in range(1, len(spheres) + 1)}
    sign = -1 if sum(degrees[i] for i in first) % 2 else 1
    return sign * sort_sign(first + second, degrees)


def _suspended_sign(first: tuple[int, ...], second: tuple[int, ...], spheres: Sequence[int]) -> int:
    degrees = {i: spheres[i - 1] - 1 for i in range(1, len(spheres) + 1)}
    return sort_sign(first + second, degrees)


SIGN_RULES: dict[str, Callable[[tuple[int, ...], tuple[int, ...], Sequence[int]], int]] = {
    "coalgebra": _coalgebra_sign,
    "suspended": _suspended_sign,
}


def _splits(subset: tuple[int, ...]):
    """Unordered splits S = A + B with min S in A and both parts non-empty."""
    head, rest = subset[0], subset[1:]
    for size in range(0, len(rest)):
        for chosen in itertools.combinations(rest, size):
            first = (head,) + chosen
            second = tuple(i for i in rest if i not in chosen)
            yield first, second


def _product_data(spheres: Sequence[int], stage: int, rule: str):
    sign = SIGN_RULES[rule]
    gens = []
    diff = {}
    indices = range(1, len(spheres) + 1)
    for size in range(1, stage + 1):
        for subset in itertools.combinations(indices, size):
            name = subset_name(subset)
            dim = sum(spheres[i - 1] for i in subset) - 1
            gens.append(Generator(name, size, dim))
            if size > 1:
                terms = [
                    ((subset_name(first), subset_name(second)), sign(first, second, spheres))
                    for first, second in _splits(subset)
                ]
                diff[name] = LieExpr.from_terms(terms)
    return gens, diff


def product_spheres_cone(
    sphere_dims: Sequence[int],
    stage: int | None = None,
    trunc: int | None = None,
) -> DgLPresentation:
    """Cellular model of the stage-k subcomplex of a product of spheres.

    One generator x_S per non-empty subset S with |S| <= k, of degree |S| and
    dimension sum(n_i for i in S) - 1, with d x_S a signed sum of [x_A, x_B]
    over the splits of S.  Sign rules are tried in the configured order.
    """
    _check_spheres(sphere_dims, minimum=2)
    r = len(sphere_dims)
    stage = r if stage is None else stage
    if not 1 <= stage <= r:
        raise ZooError(f"Stage must lie in 1..{r}, got {stage}.")
    trunc = _trunc(trunc)
    label = ",".join(str(n) for n in sphere_dims)
    for rule in config.SIGN_RULES:
        if rule not in SIGN_RULES:
            logger.warning("Ignoring unknown sign rule %r", rule)
            continue
        gens, diff = _product_data(sphere_dims, stage, rule)
        metadata = {"family": f"product {label} stage {stage}", "sign_rule": rule}
        # d^2 of every generator is checked, not only those under trunc
        check_trunc = max(trunc, max(gen.dim for gen in gens))
        try:
            checked = build(gens, diff, check_trunc, metadata)
        except DSquareNonzero as exc:
            logger.info("Sign rule %r fails for spheres %s: %s", rule, label, exc)
            continue
        return checked if check_trunc == trunc else build(gens, diff, trunc, metadata)
    raise SignResolutionFailed(f"No sign rule gives d^2 = 0 for spheres {label}.")


def _rename(tree: Tree, prefix: str) -> Tree:
    if isinstance(tree, str):
        return prefix + tree
    return (_rename(tree[0], prefix), _rename(tree[1], prefix))


def connected_sum(factors: Sequence[Sequence[int]], trunc: int | None = None) -> DgLPresentation:
    """Model of a connected sum of products of spheres of equal total dimension N.

    Each factor contributes its product model without the top generator; one
    new generator v of dimension N - 1 has dv the sum of the removed
    generators' differentials.
    """
    if len(factors) < 2:
        raise ZooError("A connected sum needs at least two factors.")
    totals = {sum(factor) for factor in factors}
    if len(totals) != 1:
        raise MismatchedDimension(f"Factors have different total dimensions {sorted(totals)}.")
    N = totals.pop()
    trunc = _trunc(trunc)
    gens: list[Generator] = []
    diff: dict[str, LieExpr] = {}
    top_terms = []
    rules = set()
    for i, factor in enumerate(factors, start=1):
        model = product_spheres_cone(factor, len(factor), max(trunc, N))
        rules.add(model.metadata.get("sign_rule", ""))
        prefix = f"m{i}"
        top = subset_name(range(1, len(factor) + 1))
        for gen in model.gens:
            expr = model.differential(gen.name)
            renamed = LieExpr.from_terms((_rename(tree, prefix), c) for tree, c in expr.terms)
            if gen.name == top:
                top_terms.extend(renamed.terms)
                continue
            gens.append(Generator(prefix + gen.name, gen.degree, gen.dim))
            if not renamed.is_zero:
                diff[prefix + gen.name] = renamed
    degree = max(len(factor) for factor in factors)
    gens.append(Generator("v", degree, N - 1))
    diff["v"] = LieExpr.from_terms(top_terms)
    label = ";".join(",".join(str(n) for n in factor) for factor in factors)
    metadata = {"family": f"connected-sum {label}", "sign_rule": ",".join(sorted(rules))}
    return build(gens, diff, trunc, metadata)


def crafted_nonseparated(trunc: int | None = None) -> DgLPresentation:
    """a, b (degree 1, dim 2); c (degree 2, dim 5, dc = [a,b]); e (degree 3, dim 3, de = a)."""
    gens = [
        Generator("a", 1, 2),
        Generator("b", 1, 2),
        Generator("c", 2, 5),
        Generator("e", 3, 3),
    ]
    diff = {
        "c": LieExpr.from_terms([(("a", "b"), 1)]),
        "e": LieExpr.gen("a"),
    }
    return build(gens, diff, _trunc(trunc), {"family": "crafted"})


def random_cellular(
    rng: random.Random,
    max_generators: int = 5,
    min_dim: int = 2,
    max_dim: int = 4,
    max_degree: int = 3,
    trunc: int | None = None,
) -> DgLPresentation:
    """A random presentation built degree by degree.

    Each generator of degree i >= 2 has as differential a random combination
    of homology representatives of L_{i-1}, so d^2 = 0 by construction.
    """
    trunc = _trunc(trunc)
    sample_trunc = max_dim + 1
    count = rng.randint(2, max_generators)
    gens: list[Generator] = []
    diff: dict[str, LieExpr] = {}
    first = rng.randint(1, min(2, count))
    for _ in range(first):
        gens.append(Generator(f"g{len(gens) + 1}", 1, rng.randint(min_dim, max_dim)))
    degree = 1
    while len(gens) < count and degree < max_degree:
        degree += 1
        sample = build(gens, diff, sample_trunc)
        H = homology_upto(sample, degree - 1)
        choices = [k for k in range(len(H)) if H.rep_dims[k] + 1 <= max_dim]
        if not choices:
            break
        for _ in range(rng.randint(1, count - len(gens))):
            n = H.rep_dims[rng.choice(choices)]
            same = [k for k in choices if H.rep_dims[k] == n]
            coords = {k: Fraction(rng.randint(-2, 2)) for k in same}
            coords = {k: c for k, c in coords.items() if c}
            if not coords:
                coords = {same[0]: Fraction(1)}
            name = f"g{len(gens) + 1}"
            expr = H.complex.expression(n, H.class_vector(coords))
            gens.append(Generator(name, degree, n + 1))
            diff[name] = expr
            if len(gens) >= count:
                break
    return build(gens, diff, trunc, {"family": "random"})


def random_nonseparated(rng: random.Random, trunc: int | None = None, **options: int) -> DgLPresentation:
    """Draw from ``random_cellular`` until a presentation is not separated.

    Candidates are screened at truncation 7 through dimension 4, then rebuilt
    at *trunc*.
    """
    trunc = _trunc(trunc)
    for attempt in range(config.RANDOM_MODEL_ATTEMPTS):
        sample = random_cellular(rng, trunc=min(trunc, 7), **options)
        if is_separated(sample).failures(min(trunc, 7) - 3):
            logger.debug("Non-separated model found after %d draws", attempt + 1)
            return build(list(sample.gens), dict(sample.diff), trunc, sample.metadata)
    raise ZooError(f"No non-separated model in {config.RANDOM_MODEL_ATTEMPTS} draws.")


@dataclass(frozen=True, slots=True)
class TopCellWitness:
    """Evidence that the top cell of a product of spheres is attached inertly."""

    top_class_dim: int
    top_class_nonzero: bool
    length1: GradedDims
    surjective: bool

    @property
    def inert(self) -> bool:
        return self.top_class_nonzero and not self.length1.ranks and self.surjective


def top_cell_witness(L: DgLPresentation) -> TopCellWitness:
    """Check d~ of the top generator, (HE_r)_1 and surjectivity of HL_{r-1} -> HL_r."""
    a = analysis(L)
    r = L.max_degree
    tops = L.generators_of_degree(r)
    if len(tops) != 1:
        raise ZooError("Top-cell witness needs a single generator of top degree.")
    top = tops[0]
    coords = a.tilde_d(r).get(top.name, {})
    split = a.etilde_split(r)
    horizon = split.horizon
    surjective = a.minus(r).dims().agrees_with(a.homology(r).dims, horizon)
    return TopCellWitness(top.dim - 1, bool(coords), split.length1, surjective)
