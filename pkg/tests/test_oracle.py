import numpy as np
import pytest

from conftest import random_affine
from herding_mfg.alpharne import HerdingPolicy, alpha_rne_set
from herding_mfg.classical import build_set
from herding_mfg.game import GameSpec, bandwidth, braess2, braess3, product
from herding_mfg.oracle import (OracleError, augmented_grid, exact_enumeration, grid_scan, holds,
                                verify_set)


def reps(clusters):
    return sorted(tuple(round(x, 9) for x in c.representative) for c in clusters)


@pytest.mark.parametrize("g, alpha, expected", [
    (braess3(0.5), 0.5, [(0, 0, 1), (0, 0.5, 0.5), (0.5, 0, 0.5)]),
    (bandwidth(3), 0.3, [(0.3, 0, 0.7), (0.3, 0.7, 0), (1, 0, 0)]),
    (product(), 0.8, [(1, 0, 0)]),
])
def test_grid_scan_examples(g, alpha, expected):
    assert reps(grid_scan(g, alpha, "declared", 100)) == sorted(expected)


def test_grid_scan_black_box():
    g = braess3(0.5)
    clusters = grid_scan(lambda mu: g.b + g.M @ mu, 0.5, "declared", 60, n=3)
    assert reps(clusters) == [(0, 0, 1), (0, 0.5, 0.5), (0.5, 0, 0.5)]


def test_augmented_grid_contains_special_values():
    X = augmented_grid(3, 50, 0.37)
    assert np.allclose(X.sum(axis=1), 1)
    assert any(np.allclose(x, (0.37, 0.63, 0)) for x in X)


def test_holds_definition():
    pay = lambda X: X @ braess2(0.5).M.T + braess2(0.5).b  # noqa: E731
    assert holds(pay, (0.6, 0.4), 0, 0.4, "strict")
    assert not holds(pay, (0.6, 0.4), 1, 0.4, "strict")


def test_verify_agreement():
    g = braess2(0.5)
    rep = verify_set(g, 0.4, "declared", alpha_rne_set(g, 0.4))
    assert rep.agreement


def test_verify_detects_missing():
    g = braess2(0.5)
    claimed = build_set([((0.4, 0.6), (1,))])
    rep = verify_set(g, 0.4, "declared", claimed)
    assert not rep.agreement
    assert any(np.allclose(s, (0.6, 0.4)) for s in rep.completeness_suspects)


def test_verify_detects_bogus_member():
    g = braess2(0.5)
    claimed = build_set([((0.4, 0.6), (1,)), ((0.6, 0.4), (0,)), ((0.3, 0.7), (1,))])
    rep = verify_set(g, 0.4, "declared", claimed)
    assert rep.membership_failures and rep.enumeration_mismatches


def test_grid_too_coarse():
    with pytest.raises(ValueError):
        verify_set(braess2(0.5), 0.4, "declared", alpha_rne_set(braess2(0.5), 0.4), G=10)


def test_oracle_rejects_high_nullity():
    with pytest.raises(OracleError):
        exact_enumeration(GameSpec(("a", "b", "c"), [0, 0, 0], np.zeros((3, 3))), 1.0)


@pytest.mark.parametrize("seed", range(100))
def test_random_games_strict(seed):
    g = random_affine(1000 + seed, 3)
    claimed = alpha_rne_set(g, 0.55, HerdingPolicy.STRICT)
    ref = exact_enumeration(g, 0.55, "strict")
    assert len(ref.points) == len(claimed.points) and not ref.segments
    for p in claimed.points:
        assert ref.contains(p.mu.weights, 1e-9)


BUILTINS = [braess2(0.3), braess2(0.5), braess2(0.8), braess3(0.3), braess3(0.5), braess3(0.8),
            bandwidth(3), product()]


@pytest.mark.parametrize("g", BUILTINS, ids=lambda g: f"{g.name}{g.params}")
@pytest.mark.parametrize("policy", ["strict", "declared"])
def test_builtins_exact_agreement(g, policy):
    for alpha in np.round(np.arange(0.1, 1.0, 0.1), 10):
        claimed = alpha_rne_set(g, alpha, policy)
        ref = exact_enumeration(g, alpha, policy)
        assert len(ref.points) == len(claimed.points) and not ref.segments
        for p in claimed.points:
            assert ref.contains(p.mu.weights, 1e-9)
