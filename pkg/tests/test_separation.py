from __future__ import annotations

import random
from fractions import Fraction

import pytest

from src.algebra import Generator
from src.dgl import LieExpr, build, sub_dgl
from src.linalg import GradedSubspace, axpy
from src.separation import (
    InsufficientTruncation,
    NotSeparated,
    analysis,
    etilde_homology_split,
    gr_dims,
    hat_dims,
    hat_table,
    ideal_closure,
    induced_H_map,
    is_separated,
    kn_separated,
    strong_freeness,
    tilde_d,
    verify_sep_then,
)
from src.series import GradedDims, pbw_series
from src.zoo import connected_sum, cpn, product_spheres_cone, wedge

F = Fraction


def test_cp2_induced_map(cp2):
    induced = induced_H_map(cp2, 2)
    assert induced.source.dims.ranks == {1: 1, 2: 1}
    # v1 survives, [v1, v1] becomes a boundary
    assert induced.image.dims().ranks == {1: 1}
    square = induced.source.classes_in_dim(2)[0]
    assert induced.columns[square] == {}
    v1 = induced.target.classes_in_dim(1)[0]
    assert induced.preimage(1, {v1: 1}) is not None


def test_cp2_tilde_d_hits_the_square(cp2):
    value = tilde_d(cp2, 2)
    assert list(value) == ["v2"]
    assert value["v2"]


def test_cp2_is_separated(cp2):
    report = is_separated(cp2)
    assert report.separated
    assert report.failures() == []
    first = report.degrees[0]
    assert first.plus.ranks == {2: 1}
    assert first.minus.ranks == {}


def test_cp3_is_separated():
    assert is_separated(cpn(3, trunc=8)).separated


def test_crafted_model_is_not_separated(crafted):
    report = is_separated(crafted)
    assert not report.separated
    assert report.failures() == [(2, 2)]
    assert not kn_separated(crafted, 2, 3)
    assert kn_separated(crafted, 2, 2)
    assert kn_separated(crafted, 1, 7)


def test_cp2_etilde_split(cp2):
    split = etilde_homology_split(cp2, 2)
    assert split.length0.ranks == {1: 1}
    assert split.length1.ranks == {4: 1}
    assert not split.higher


def test_gr_of_cp2(cp2):
    gr = gr_dims(cp2, 2)
    assert gr[0].ranks == {1: 1}
    assert gr[1].ranks == {4: 1}


def test_cp2_hat_table(cp2):
    table = hat_table(cp2)
    assert table.passed
    assert [row.free_side.ranks for row in table.rows] == [{1: 1}, {4: 1}]
    # the top cell of CP^2 is not inert
    assert not table.surjective_top
    assert table.top_length1.ranks == {4: 1}
    assert hat_dims(cp2, 2).semidirect.ranks == {4: 1}


def test_hat_table_requires_separation(crafted):
    with pytest.raises(NotSeparated):
        hat_table(crafted)
    with pytest.raises(NotSeparated):
        verify_sep_then(crafted, 2)


@pytest.mark.parametrize("degree", [1, 2])
def test_cp2_structure_checks(cp2, degree):
    report = verify_sep_then(cp2, degree)
    assert report.passed, report.checks


def test_fat_wedge_structure_checks():
    L = product_spheres_cone((2, 2, 2), 2, trunc=6)
    assert is_separated(L).separated
    for degree in (1, 2):
        assert verify_sep_then(L, degree).passed
    assert hat_table(L).passed


def test_strong_freeness_of_cp2(cp2):
    certificates = strong_freeness(cp2)
    assert set(certificates) == {1, 2}
    assert all(certificate.passed for certificate in certificates.values())
    assert certificates[1].generator_dims.ranks == {2: 1}


def test_ideal_closure(free_lie_xy):
    ideal = ideal_closure(free_lie_xy, [(2, {1: 1})])
    assert ideal.dims().ranks == {2: 1, 4: 1, 6: 2}


def test_etilde_needs_some_horizon():
    L = build([Generator("a", 1, 1), Generator("b", 2, 2)], {"b": LieExpr.gen("a")}, 2)
    with pytest.raises(InsufficientTruncation):
        etilde_homology_split(L, 2)


def test_total_etilde_homology_matches_gr(cp2):
    split = etilde_homology_split(cp2, 2)
    gr_total = GradedDims({}, split.horizon)
    for dims in gr_dims(cp2, 2).values():
        gr_total = gr_total + dims
    assert pbw_series(gr_total).agrees_with(pbw_series(split.total))


STRUCTURE_MODELS = [
    pytest.param(lambda: wedge((2, 3), trunc=6), id="wedge-2-3"),
    pytest.param(lambda: connected_sum([(2, 2), (2, 2)], trunc=6), id="connected-sum"),
    pytest.param(lambda: cpn(3, trunc=10), id="cp3", marks=pytest.mark.slow),
    *[
        pytest.param(
            lambda k=k: product_spheres_cone((3, 3, 3), k, trunc=9),
            id=f"product-333-stage-{k}",
            marks=pytest.mark.slow,
        )
        for k in (1, 2, 3)
    ],
]


@pytest.mark.parametrize("make", STRUCTURE_MODELS)
def test_separated_models_pass_every_structure_check(make):
    L = make()
    assert is_separated(L).separated
    for degree in range(1, L.max_degree + 1):
        report = verify_sep_then(L, degree)
        assert report.passed, (degree, report.checks)
    assert hat_table(L).passed


@pytest.mark.parametrize(
    "make",
    [
        pytest.param(lambda: product_spheres_cone((2, 2, 2), 2, trunc=5), id="fat-wedge"),
        pytest.param(lambda: connected_sum([(2, 2), (2, 2)], trunc=6), id="connected-sum"),
        pytest.param(lambda: cpn(3, trunc=8), id="cp3"),
    ],
)
def test_strong_freeness_of_separated_models(make):
    L = make()
    certificates = strong_freeness(L)
    assert set(certificates) == set(range(1, L.max_degree + 1))
    assert all(certificate.passed for certificate in certificates.values())


def _change_basis(space, rng):
    changed = GradedSubspace(space.horizon)
    for n, vectors in space.basis.items():
        for j, vector in enumerate(vectors):
            combined = {k: F(rng.randint(1, 3)) * c for k, c in vector.items()}
            for later in vectors[j + 1:]:
                axpy(combined, later, rng.randint(-2, 2))
            changed.add(n, combined)
    return changed


@pytest.mark.parametrize("seed", range(3))
def test_intersection_is_symmetric_and_basis_free(crafted, seed):
    a = analysis(crafted)
    rng = random.Random(seed)
    for i in range(1, crafted.max_degree + 1):
        minus, plus = a.minus(i), a.plus(i)
        forward = minus.intersection(plus).dims()
        assert plus.intersection(minus).dims() == forward
        assert _change_basis(minus, rng).intersection(_change_basis(plus, rng)).dims() == forward
    assert a.intersection(2).rank(2) == 1


@pytest.mark.parametrize("name", ["cp2", "crafted", "fat_wedge"])
def test_minus_and_plus_parts_are_closed_under_brackets(request, name):
    L = request.getfixturevalue(name)
    a = analysis(L)
    for i in range(1, L.max_degree + 1):
        H = a.homology(i)
        if not len(H):
            continue
        sc = H.sc
        basis = [(H.rep_dims[k], {k: F(1)}) for k in range(len(H))]
        minus, plus = a.minus(i), a.plus(i)
        for p, u in minus.vectors():
            for q, v in minus.vectors():
                if p + q <= H.horizon:
                    assert minus.contains(p + q, sc.bracket_vectors(u, v))
        # HL_i^+ is an ideal
        for p, u in plus.vectors():
            for q, v in basis:
                if p + q <= H.horizon:
                    assert plus.contains(p + q, sc.bracket_vectors(u, v))


@pytest.mark.parametrize("name", ["cp2", "fat_wedge"])
def test_length0_part_is_the_quotient_by_the_attaching_classes(request, name):
    L = request.getfixturevalue(name)
    a = analysis(L)
    i = L.max_degree
    lower = a.homology(i - 1)
    dims = {gen.name: gen.dim for gen in L.gens}
    seeds = [(dims[gen] - 1, coords) for gen, coords in a.tilde_d(i).items() if coords]
    quotient = lower.dims - ideal_closure(lower.sc, seeds).dims()
    split = a.etilde_split(i)
    horizon = split.horizon
    assert split.length0.agrees_with(quotient, horizon)
    assert a.minus(i).dims().agrees_with(quotient, horizon)
    # the bracket table of (HE_i)_0 matches HL_i through the induced map
    assert verify_sep_then(L, i).checks["brackets_match"]


@pytest.mark.parametrize("k", [1, 2])
def test_product_stages_are_sub_dgls_of_the_product(k):
    full = product_spheres_cone((2, 2, 2), 3, trunc=6)
    stage = product_spheres_cone((2, 2, 2), k, trunc=6)
    restricted = sub_dgl(full, k)
    assert [(g.name, g.degree, g.dim) for g in stage.gens] == [(g.name, g.degree, g.dim) for g in restricted.gens]
    assert dict(stage.diff) == dict(restricted.diff)
