import itertools

import numpy as np
import pytest

from conftest import random_affine
from herding_mfg.alpharne import HerdingPolicy, alpha_rne_set, herding_choice_set, rational_measure
from herding_mfg.game import braess2, braess3, product
from herding_mfg.measures import support
from herding_mfg.predict import eliminate, is_dominated, iterated_prediction, region_vertices


def test_region_vertices():
    vs = region_vertices(3, 0, 0.5, {0, 1, 2})
    assert [v.weights for v in vs] == [(1, 0, 0), (0.5, 0.5, 0), (0.5, 0, 0.5)]


def test_is_dominated_examples():
    full = {0, 1, 2}
    assert is_dominated(braess3(0.5), 0, 2, 0.5, full, full)
    assert not is_dominated(braess2(0.5), 0, 1, 0.4, {0, 1}, {0, 1})
    assert is_dominated(product(), 2, 0, 0.5, full, full)
    assert not is_dominated(product(), 0, 2, 0.5, full, full)


@pytest.mark.parametrize("rho", [0.3, 0.5, 0.8])
def test_braess3_predicts_ab(rho):
    res = iterated_prediction(braess3(rho), 0.5)
    assert res.unique_prediction == 2
    assert [(i, j) for _, i, j in res.trace] == [(0, 2), (1, 2)]


def test_braess2_no_elimination():
    res = iterated_prediction(braess2(0.5), 0.4)
    assert res.trace == () and res.surviving == {0, 1} and res.unique_prediction is None


def test_product_predicts_one():
    res = iterated_prediction(product(), 0.5)
    assert res.unique_prediction == 0
    # smallest dominated index goes first
    assert [i for _, i, _ in res.trace] == [1, 2]


def test_alpha_one_rejected():
    with pytest.raises(ValueError):
        iterated_prediction(product(), 1.0)


@pytest.mark.parametrize("seed", range(25))
def test_order_independence(seed):
    n = 2 + seed % 3
    g = random_affine(seed, n)
    alpha = 0.3 + 0.1 * (seed % 5)
    H = herding_choice_set(g, alpha, HerdingPolicy.DECLARED)
    _, base = eliminate(g, alpha, H)
    for perm in itertools.permutations(range(n)):
        rank = {a: r for r, a in enumerate(perm)}
        _, other = eliminate(g, alpha, H, order=lambda cands: min(cands, key=rank.get))
        assert other == base


@pytest.mark.parametrize("seed", range(25))
def test_survivors_cover_equilibrium_supports(seed):
    g = random_affine(100 + seed, 3)
    alpha = 0.45
    res = iterated_prediction(g, alpha)
    for p in alpha_rne_set(g, alpha).points:
        for k in p.herding:
            rs = support(rational_measure(p.mu, k, alpha))
            assert rs <= res.surviving
            if res.unique_prediction is not None:
                assert rs == {res.unique_prediction}
