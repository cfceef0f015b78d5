from __future__ import annotations

from fractions import Fraction

import pytest

from src.linalg import Echelon, GradedSubspace, LinearAlgebraError, axpy, combine

F = Fraction


def test_axpy_removes_cancelled_entries():
    target = {"a": F(1), "b": F(2)}
    axpy(target, {"a": F(1)}, -1)
    assert target == {"b": F(2)}


def test_combine():
    vectors = {0: {"x": F(1)}, 1: {"x": F(1), "y": F(1)}}
    assert combine({0: F(2), 1: F(-1)}, vectors) == {"x": F(1), "y": F(-1)}


def test_insert_reports_relations_for_dependent_vectors():
    echelon = Echelon()
    assert echelon.insert({"x": F(1)}, "u") == (True, {})
    assert echelon.insert({"y": F(2)}, "v")[0]
    independent, relation = echelon.insert({"x": F(3), "y": F(4)}, "w")
    assert not independent
    assert relation == {"w": F(1), "u": F(-3), "v": F(-2)}
    assert echelon.rank == 2
    assert echelon.labels == ["u", "v"]


def test_solve_returns_coordinates_against_inserted_vectors():
    echelon = Echelon()
    echelon.insert({"x": F(1), "y": F(1)}, 0)
    echelon.insert({"y": F(1)}, 1)
    assert echelon.solve({"x": F(2), "y": F(5)}) == {0: F(2), 1: F(3)}
    assert echelon.solve({"z": F(1)}) is None


def test_solve_accounts_for_rescaling_by_non_unit_pivots():
    echelon = Echelon()
    echelon.insert({"x": F(2), "y": F(1)}, 0)
    echelon.insert({"y": F(3)}, 1)
    assert echelon.solve({"x": F(1)}) == {0: F(1, 2), 1: F(-1, 6)}
    assert echelon.solve({"x": F(1, 3), "y": F(1)}) == {0: F(1, 6), 1: F(5, 18)}


def test_pivots_are_the_smallest_keys():
    echelon = Echelon(track=False)
    echelon.insert({"y": F(-4), "x": F(6)}, 0)
    # stored primitive with a positive pivot on the smallest key
    assert echelon.reduce({"x": F(3)}) == {"y": F(2)}
    clone = echelon.copy()
    clone.insert({"y": F(1)}, 1)
    assert clone.rank == 2 and echelon.rank == 1
    with pytest.raises(LinearAlgebraError):
        echelon.solve({"x": F(1)})


def test_extend_counts_independent_vectors():
    echelon = Echelon()
    assert echelon.extend([{"x": F(1)}, {"x": F(2)}, {"y": F(1)}]) == 2
    assert echelon.contains({"x": F(1), "y": F(-1)})


def test_graded_subspace_intersection():
    left = GradedSubspace.spanned_by([(2, {"a": F(1)}), (2, {"b": F(1)}), (3, {"c": F(1)})], 5)
    right = GradedSubspace.spanned_by([(2, {"a": F(1), "b": F(1)}), (2, {"d": F(1)}), (4, {"e": F(1)})], 5)
    common = left.intersection(right)
    assert common.dims().ranks == {2: 1}
    assert common.contains(2, {"a": F(1), "b": F(1)})
    assert left.sum_rank(right, 2) == 3


def test_graded_subspace_ignores_vectors_beyond_horizon():
    space = GradedSubspace(3)
    assert not space.add(4, {"a": F(1)})
    assert space.add(1, {"a": F(1)})
    assert not space.add(1, {"a": F(2)})
    assert space.vectors() == [(1, {"a": F(1)})]
