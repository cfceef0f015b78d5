"""Shared fixtures: small models that every suite uses."""

from __future__ import annotations

import pytest

from src.zoo import cpn, crafted_nonseparated, product_spheres_cone, wedge


@pytest.fixture
def cp2():
    return cpn(2, trunc=8)


@pytest.fixture
def crafted():
    return crafted_nonseparated(trunc=8)


@pytest.fixture
def fat_wedge():
    """Stage-2 model of S^2 x S^2 x S^2, exact through dimension 4."""
    return product_spheres_cone((2, 2, 2), 2, trunc=5)


@pytest.fixture
def wedge_23():
    return wedge((2, 3), trunc=6)


@pytest.fixture
def free_lie_xy():
    """Free Lie algebra on x, y of dimension 2 through dimension 6.

    Basis: x, y, [x,y], [x,[x,y]], [y,[x,y]].
    """
    from fractions import Fraction

    from src.algebra import ScLie

    one = Fraction(1)
    table = {
        (0, 1): {2: one},
        (1, 0): {2: -one},
        (0, 2): {3: one},
        (2, 0): {3: -one},
        (1, 2): {4: one},
        (2, 1): {4: -one},
    }
    return ScLie((2, 2, 4, 6, 6), table, 6, ("x", "y", "xy", "xxy", "yxy"))
