from __future__ import annotations

import pytest

from src.series import (
    GradedDims,
    NotInvertible,
    SeriesError,
    SeriesZ,
    anick_chain,
    anick_rhs,
    free_lie_dims,
    free_product_inverse,
    pbw_series,
    prod_spheres_polys,
    series_inverse,
    tensor_series,
)

z = SeriesZ.monomial(1)
one = SeriesZ.one()


def test_geometric_series_inverse():
    assert series_inverse(one - z, 5).coefficients() == [1, 1, 1, 1, 1, 1]


def test_polynomial_inverse_needs_an_order():
    with pytest.raises(SeriesError):
        series_inverse(one - z)


def test_non_unit_constant_term_is_rejected():
    with pytest.raises(NotInvertible):
        series_inverse(SeriesZ((2, 1)), 4)


def test_truncated_arithmetic_keeps_the_smaller_order():
    a = SeriesZ((1, 2, 3), 2)
    b = SeriesZ((1, 1, 1, 1, 1), 4)
    assert (a * b).trunc_order == 2
    assert (a * b).coefficients() == [1, 3, 6]


def test_agrees_with_compares_through_common_order():
    assert SeriesZ((1, 2, 3), 2).agrees_with(SeriesZ((1, 2, 3, 9), 3))
    assert not SeriesZ((1, 2, 4), 2).agrees_with(SeriesZ((1, 2, 3), 3))


def test_render_text():
    assert (one - z * 3).render_text() == "1 - 3 z"
    assert SeriesZ((1, 0, 2), 4).render_text() == "1 + 2 z^2 (trunc 4)"


def test_graded_dims_rejects_negative_ranks():
    with pytest.raises(SeriesError):
        GradedDims({1: -1}, 3)
    with pytest.raises(SeriesError):
        GradedDims({1: 1}, 3) - GradedDims({1: 2}, 3)


def test_graded_dims_drops_zero_and_out_of_horizon_entries():
    dims = GradedDims({1: 1, 2: 0, 9: 4}, 5)
    assert dims.table() == [(1, 1)]
    assert dims[9] == 0


def test_pbw_series_of_odd_and_even_generators():
    # one odd class of dim 1 and its square of dim 2 give 1/(1-z)
    assert pbw_series(GradedDims({1: 1, 2: 1}, 6)).coefficients() == [1] * 7
    assert pbw_series(GradedDims({2: 1}, 6)).coefficients() == [1, 0, 1, 0, 1, 0, 1]


def test_tensor_series():
    assert tensor_series(GradedDims({1: 2}, 4)).coefficients() == [1, 2, 4, 8, 16]


@pytest.mark.parametrize(
    ("generators", "expected"),
    [
        ({2: 1}, {2: 1}),
        ({1: 1}, {1: 1, 2: 1}),
        ({1: 2}, {1: 2, 2: 3, 3: 2}),
        ({2: 2}, {2: 2, 4: 1, 6: 2, 8: 3}),
    ],
)
def test_free_lie_dims(generators, expected):
    horizon = max(expected)
    assert free_lie_dims(GradedDims(generators, horizon)).ranks == expected


def test_prod_spheres_polys_for_three_two_spheres():
    polys = prod_spheres_polys((2, 2, 2))
    assert [p.coefficients() for p in polys.a] == [[1], [0, -3], [0, 0, 3], [0, 0, 0, -1]]
    assert polys.total.coefficients() == [1, -3, 3, -1]
    assert polys.b[2].coefficients() == [0, 0, 0, 0, 1]
    assert polys.b[3].coeffs == ()


def test_anick_rhs_first_stage():
    result = anick_rhs(2, (2, 2, 2), one - z * 3)
    assert result.coefficients() == [1, -3, 3, -1, -1]


def test_anick_chain_reaches_the_product_at_the_last_stage():
    assert anick_chain((2, 2, 2), 3).coefficients() == [1, -3, 3, -1]


@pytest.mark.parametrize(
    "spheres",
    [(2, 2), (2, 3), (2, 2, 2), (2, 3, 4), (3, 3, 3, 3), (2, 2, 3, 5)],
)
def test_anick_chain_equals_a_minus_b(spheres):
    polys = prod_spheres_polys(spheres)
    for k in range(2, len(spheres) + 1):
        assert anick_chain(spheres, k).coefficients() == (polys.total - polys.b[k]).coefficients()


def test_fat_wedge_inverse_series():
    inverse = series_inverse(anick_chain((2, 2, 2), 2), 10)
    assert inverse.coefficients()[:5] == [1, 3, 6, 10, 16]


def test_free_product_inverse_of_product_and_sphere():
    # removing the top cell of S^2 x S^2 x S^2 splits off a free factor on a dim-4 class
    product = (one - z) ** 3
    assert free_product_inverse([product, one - z ** 4]).coefficients() == [1, -3, 3, -1, -1]


def test_free_product_inverse_requires_unit_constant_terms():
    with pytest.raises(SeriesError):
        free_product_inverse([one - z, SeriesZ((2,))])
