from __future__ import annotations

from fractions import Fraction

import pytest

from src.algebra import Generator, commutator_terms, tensor_ambient
from src.dgl import (
    DegreeViolation,
    DimensionViolation,
    DSquareNonzero,
    DuplicateGenerator,
    LieExpr,
    LieGenerator,
    NotACycle,
    PresentationError,
    UnknownGenerator,
    bracket,
    build,
    differential_matrices,
    envelope_homology_dims,
    evaluate,
    homology,
    homology_upto,
    lie_basis,
    sub_dgl,
)
from src.freelie import FreeLieBasis
from src.linalg import axpy
from src.series import GradedDims, SeriesZ, free_lie_dims, pbw_series, series_inverse
from src.zoo import cp_infty, cpn, product_spheres_cone

F = Fraction


def test_lie_expr_normal_form():
    expr = LieExpr.from_terms([("a", 1), ("b", 2), ("a", -1)])
    assert expr.terms == (("b", F(2)),)
    assert LieExpr.from_terms([("a", 1), ("a", -1)]).is_zero
    assert (bracket("a", "b") * F(1, 2)).render() == "1/2*[a,b]"
    assert (LieExpr.gen("a") - LieExpr.gen("a")).is_zero
    assert bracket(bracket("a", "b"), "c").leaves() == {"a", "b", "c"}


def test_lie_expr_rejects_malformed_brackets():
    with pytest.raises(PresentationError):
        LieExpr.from_terms([(("a", "b", "c"), 1)])


def test_build_rejects_unknown_generators():
    gens = [Generator("a", 1, 2)]
    with pytest.raises(UnknownGenerator):
        build(gens, {"b": LieExpr.gen("a")}, 4)
    with pytest.raises(UnknownGenerator):
        build(gens + [Generator("c", 2, 3)], {"c": LieExpr.gen("z")}, 4)


def test_build_rejects_duplicates():
    with pytest.raises(DuplicateGenerator):
        build([Generator("a", 1, 2), Generator("a", 2, 3)], {}, 4)


def test_build_checks_degree_before_dimension():
    gens = [Generator("a", 2, 2), Generator("b", 2, 2)]
    with pytest.raises(DegreeViolation):
        build(gens, {"b": LieExpr.gen("a")}, 4)


def test_build_checks_dimension_drop():
    gens = [Generator("a", 1, 2), Generator("b", 2, 4)]
    with pytest.raises(DimensionViolation):
        build(gens, {"b": LieExpr.gen("a")}, 4)


def test_build_checks_d_squared():
    gens = [Generator("a", 1, 2), Generator("b", 2, 3), Generator("c", 3, 4)]
    diff = {"b": LieExpr.gen("a"), "c": LieExpr.gen("b")}
    with pytest.raises(DSquareNonzero) as info:
        build(gens, diff, 5)
    assert info.value.generator == "c"


def test_build_skips_d_squared_above_truncation():
    gens = [Generator("a", 1, 2), Generator("b", 2, 3), Generator("c", 3, 4)]
    diff = {"b": LieExpr.gen("a"), "c": LieExpr.gen("b")}
    L = build(gens, diff, 3)
    assert L.trunc == 3


def test_cp2_differential_value(cp2):
    assert cp2.letter_value("v2") == {(0, 0): F(1)}
    assert evaluate(cp2, bracket("v1", "v1")).terms == {(0, 0): F(2)}


def test_cp2_homology(cp2):
    H = homology(cp2)
    assert H.horizon == 7
    assert H.dims.ranks == {1: 1, 4: 1}
    assert H.dims_by_grade(0).ranks == {1: 1}
    assert H.dims_by_grade(1).ranks == {4: 1}


def test_cp3_homology():
    assert homology(cpn(3, trunc=8)).dims.ranks == {1: 1, 6: 1}


def test_cp_infty_homology_is_one_odd_class():
    H = homology(cp_infty(trunc=7))
    assert H.dims.ranks == {1: 1}


@pytest.mark.slow
def test_cp3_homology_at_truncation_10():
    H = homology(cpn(3, trunc=10))
    assert H.horizon == 9
    assert H.dims.ranks == {1: 1, 6: 1}


@pytest.mark.slow
def test_cp_infty_homology_at_truncation_11():
    H = homology(cp_infty(trunc=11))
    assert H.horizon == 10
    assert H.dims.ranks == {1: 1}


def test_wedge_homology_is_free(wedge_23):
    H = homology(wedge_23)
    assert H.dims == free_lie_dims(GradedDims({1: 1, 2: 1}, 5))


def test_homology_upto_uses_the_sub_dgl(cp2):
    H1 = homology_upto(cp2, 1)
    assert H1.dims.ranks == {1: 1, 2: 1}
    assert homology_upto(cp2, 5) is homology(cp2)


def test_sub_dgl(cp2):
    lower = sub_dgl(cp2, 1)
    assert lower.names == ["v1"]
    assert sub_dgl(cp2, 2) is cp2
    with pytest.raises(PresentationError):
        sub_dgl(cp2, 0)


def test_class_coordinates(cp2):
    H = homology(cp2)
    v1 = {(0,): F(1)}
    assert H.coordinates(v1) == {H.classes_in_dim(1)[0]: F(1)}
    # [v1, v1] = 2 v1 v1 bounds d(2 v2)
    assert H.is_boundary({(0, 0): F(2)})
    with pytest.raises(NotACycle):
        H.coordinates({(1,): F(1)})


def test_homology_structure_constants_of_cp2(cp2):
    sc = homology(cp2).sc
    assert sc.dims == (1, 4)
    assert sc.check_antisymmetry() == []
    assert sc.check_jacobi() == []


def test_bounding_chain(cp2):
    complex_ = cp2.complex()
    chain = complex_.bounding_chain(2, {(0, 0): F(1)})
    assert complex_.d(chain) == {(0, 0): F(1)}
    assert complex_.expression(3, chain) == LieExpr.gen("v2")
    assert complex_.bounding_chain(1, {(0,): F(1)}) is None


def test_differential_matrices(cp2):
    matrices = differential_matrices(cp2)
    # d v2 = [v1, v1] / 2 in the Lie basis of dimension 2
    assert matrices[3] == [{0: F(1, 2)}]


def test_envelope_homology_matches_pbw_of_homology(cp2, wedge_23, fat_wedge):
    for L in (cp2, wedge_23, fat_wedge):
        lie = homology(L).dims
        assert envelope_homology_dims(L).hilbert_series().agrees_with(pbw_series(lie))
    assert envelope_homology_dims(cp2).ranks == {1: 1, 4: 1, 5: 1}


def test_envelope_hilbert_series_starts_with_the_unit(cp2):
    series = envelope_homology_dims(cp2).hilbert_series()
    assert series.coefficients() == [1, 1, 0, 0, 1, 1, 0, 0]
    assert series.coefficients() == pbw_series(homology(cp2).dims).coefficients()


def _letters(horizon):
    ambient = tensor_ambient([Generator("x", 1, 1), Generator("y", 1, 2)], horizon)
    seeds = [LieGenerator("x", {(0,): F(1)}, 1), LieGenerator("y", {(1,): F(1)}, 2)]
    return ambient, seeds


def test_letters_of_a_tensor_algebra_get_a_lyndon_basis():
    ambient, seeds = _letters(6)
    basis = lie_basis(ambient, seeds, 6)
    assert isinstance(basis, FreeLieBasis)
    assert basis.dims() == free_lie_dims(GradedDims({1: 1, 2: 1}, 6))
    # [x, x] is the odd square
    assert basis.words[2] == [(0, 0), (1,)]
    assert basis.is_square(2, 0)


def test_lyndon_basis_spans_the_same_subalgebra_as_elimination():
    ambient, seeds = _letters(6)
    lyndon = lie_basis(ambient, seeds, 6)
    scaled_seeds = [LieGenerator("x", {(0,): F(2)}, 1), LieGenerator("y", {(1,): F(-1)}, 2)]
    generic = lie_basis(ambient, scaled_seeds, 6)
    assert not isinstance(generic, FreeLieBasis)
    assert generic.dims() == lyndon.dims()
    for n, vectors in lyndon.vectors.items():
        for vector in vectors:
            assert generic.contains(n, vector)


def test_lyndon_brackets_agree_with_commutators():
    ambient, seeds = _letters(6)
    basis = lie_basis(ambient, seeds, 6)
    for p in range(1, 6):
        for q in range(1, 7 - p):
            for a in range(basis.rank(p)):
                for b in range(basis.rank(q)):
                    expected = commutator_terms(ambient, basis.vector(p, a), basis.vector(q, b), p, q)
                    value: dict = {}
                    for j, c in basis.bracket(p, a, q, b).items():
                        axpy(value, basis.vector(p + q, j), c)
                    assert value == expected, (p, a, q, b)


def test_lyndon_coordinates_reject_vectors_outside_the_algebra():
    ambient, seeds = _letters(4)
    basis = lie_basis(ambient, seeds, 4)
    assert basis.coordinates(3, {(0, 1): F(1)}) is None
    bracket_xy = {(0, 1): F(1), (1, 0): F(-1)}
    coords = basis.coordinates(3, bracket_xy)
    assert coords is not None and len(coords) == 1


@pytest.mark.slow
def test_fat_wedge_homology_at_truncation_11():
    L = product_spheres_cone((2, 2, 2), 2, trunc=11)
    H = homology(L)
    assert H.horizon == 10
    fat = SeriesZ.from_mapping({0: 1, 1: -3, 2: 3, 3: -1, 4: -1})
    expected = series_inverse(fat, 10)
    assert expected.coefficients(4) == [1, 3, 6, 10, 16]
    assert pbw_series(H.dims).coefficients(10) == expected.coefficients(10)
