from __future__ import annotations

import random

import pytest

from src.dgl import homology
from src.separation import is_separated
from src.separator import (
    ExtensionError,
    HorizonExceeded,
    attach_kill,
    intersection_basis,
    separate,
    separate_step,
)
from src.modelfile import dumps, from_presentation, loads, to_presentation
from src.zoo import random_nonseparated


def test_intersection_basis_of_crafted_model(crafted):
    classes = intersection_basis(crafted, 2, 2)
    assert len(classes) == 1
    assert intersection_basis(crafted, 1, 2) == []


def test_intersection_basis_beyond_horizon(crafted):
    with pytest.raises(HorizonExceeded):
        intersection_basis(crafted, 2, 8)


def test_separate_step_kills_the_shared_class(crafted):
    extended, record = separate_step(crafted, 2, 2)
    assert record.killed == 1
    assert record.added == (("a1", "b1"),)
    assert extended.generator("a1").degree == 2
    assert extended.generator("a1").dim == 3
    assert extended.generator("b1").degree == 4
    assert extended.generator("b1").dim == 4
    assert record.cycles[0].leaves() == {"a"}
    assert record.chains[0].leaves() == {"e"}
    assert not is_separated(extended).failures(2)


def test_separate_step_on_a_separated_pair_is_a_no_op(cp2):
    extended, record = separate_step(cp2, 1, 2)
    assert extended is cp2
    assert record.killed == 0


@pytest.mark.slow
def test_separate_crafted_model(crafted):
    outcome = separate(crafted)
    assert outcome.separated
    assert outcome.rounds >= 1
    assert outcome.steps[0].degree == 2
    before = homology(crafted).dims
    after = homology(outcome.presentation).dims
    assert before.agrees_with(after, outcome.target)
    again = separate(outcome.presentation)
    assert again.rounds == 0


def test_separate_leaves_separated_models_alone(cp2):
    outcome = separate(cp2)
    assert outcome.rounds == 0
    assert outcome.presentation is cp2
    assert outcome.separated


@pytest.mark.slow
@pytest.mark.parametrize("seed", range(20))
def test_separate_random_nonseparated_models(seed):
    L = random_nonseparated(random.Random(seed), trunc=10)
    assert max(gen.dim for gen in L.gens) <= 4
    assert is_separated(L).failures(L.trunc - 3)
    outcome = separate(L)
    assert outcome.separated, outcome.pending
    assert outcome.rounds >= 1
    extended = outcome.presentation
    for gen in L.gens:
        assert extended.generator(gen.name) == gen
        assert extended.differential(gen.name) == L.differential(gen.name)
    assert homology(L).dims.agrees_with(homology(extended).dims, outcome.target)
    assert separate(extended).rounds == 0


def test_attach_kill_adds_generators_in_a_new_degree(cp2):
    H = homology(cp2)
    top = H.classes_in_dim(4)[0]
    extended = attach_kill(cp2, [{top: 1}])
    assert extended.generator("k1").degree == 3
    assert extended.generator("k1").dim == 5
    # killing the dim-4 class of CP^2 gives the CP^3 pattern
    assert homology(extended).dims.ranks == {1: 1, 6: 1}


def test_attach_kill_requires_a_single_dimension(cp2):
    H = homology(cp2)
    with pytest.raises(ExtensionError):
        attach_kill(cp2, [{H.classes_in_dim(1)[0]: 1}, {H.classes_in_dim(4)[0]: 1}])


def test_separate_step_records_provenance(crafted):
    extended, record = separate_step(crafted, 2, 2)
    (alpha,) = record.classes
    ((index, coeff),) = alpha.items()
    assert extended.metadata["a1"] == f"k=2 n=2 class={coeff.numerator}/{coeff.denominator}*h{index}"
    assert extended.metadata["b1"] == "k=2 n=2 pairs=a1"
    assert extended.metadata["family"] == "crafted"
    rebuilt = to_presentation(loads(dumps(from_presentation(extended))))
    assert rebuilt.metadata == extended.metadata
    assert "a1" not in crafted.metadata


def test_attach_kill_records_the_killed_class(cp2):
    H = homology(cp2)
    top = H.classes_in_dim(4)[0]
    extended = attach_kill(cp2, [{top: 1}])
    assert extended.metadata["k1"] == f"n=4 class=1/1*h{top}"
