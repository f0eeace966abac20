import numpy as np
import pytest

from conftest import random_affine, same_points
from herding_mfg.alpharne import (HerdingPolicy, alpha_rne_set, herding_choice_set, is_alpha_rne,
                                  rational_measure, records, theorem_one_sets)
from herding_mfg.classical import build_set, classical_equilibria
from herding_mfg.errors import HerdingMassTooSmall
from herding_mfg.game import GameSpec, bandwidth, braess2, braess3, product

S, D = HerdingPolicy.STRICT, HerdingPolicy.DECLARED


def test_rational_measure_examples():
    assert rational_measure((0.4, 0.6), 1, 0.4).close_to((1, 0), 1e-12)
    assert rational_measure((1, 0, 0), 0, 0.7).close_to((1, 0, 0), 1e-12)
    assert rational_measure((0.5, 0, 0.5), 0, 0.5).close_to((0, 0, 1), 1e-12)


def test_rational_measure_mass_too_small():
    with pytest.raises(HerdingMassTooSmall):
        rational_measure((0.2, 0.8), 0, 0.5)


@pytest.mark.parametrize("alpha", [0, -0.1, 1.2])
def test_alpha_validated(alpha):
    with pytest.raises(ValueError):
        alpha_rne_set(braess2(0.5), alpha)


def test_is_alpha_rne_examples():
    # herders fill the heavier route; rationals take the other one
    assert is_alpha_rne(braess2(0.5), (0.6, 0.4), 0, 0.4, D)
    assert is_alpha_rne(braess2(0.5), (0.6, 0.4), 0, 0.4, S)
    assert is_alpha_rne(braess2(0.5), (0.4, 0.6), 1, 0.4, S)
    v = is_alpha_rne(braess2(0.5), (0.6, 0.4), 1, 0.4, D)
    assert not v and "1 - alpha" in v.reason
    v = is_alpha_rne(braess3(0.5), (0.4, 0, 0.6), 0, 0.6, D)
    assert v and v.reason == "ok"
    v = is_alpha_rne(braess3(0.5), (0.4, 0, 0.6), 0, 0.6, S)
    assert not v and "strict" in v.reason
    for k in range(3):
        assert not is_alpha_rne(product(), (0, 1, 0), k, 0.5, D)


@pytest.mark.parametrize("alpha, expected", [
    (0.2, [(0.2, 0.8), (0.8, 0.2)]), (0.4, [(0.4, 0.6), (0.6, 0.4)]), (0.5, [(0.5, 0.5)]),
    (0.6, [(0.5, 0.5)]), (0.8, [(0.5, 0.5)]), (1.0, [(0.5, 0.5)]),
])
@pytest.mark.parametrize("policy", [S, D])
def test_braess2_sets(alpha, expected, policy):
    assert same_points(alpha_rne_set(braess2(0.5), alpha, policy), expected)


def test_braess3_sets():
    g = braess3(0.5)
    assert same_points(alpha_rne_set(g, 0.7, S), [(0, 0, 1)])
    assert same_points(alpha_rne_set(g, 0.7, D), [(0, 0, 1)])
    assert same_points(alpha_rne_set(g, 0.6, D), [(0, 0, 1), (0.4, 0, 0.6), (0, 0.4, 0.6)])
    assert same_points(alpha_rne_set(g, 0.6, S), [(0, 0, 1)])


@pytest.mark.parametrize("policy", [S, D])
def test_bandwidth_set(policy):
    assert same_points(alpha_rne_set(bandwidth(3), 0.3, policy), [(1, 0, 0), (0.3, 0.7, 0), (0.3, 0, 0.7)])


def test_bandwidth_upper_range_needs_declared():
    # at alpha in [1/2, 1 - 1/n] the level-1 mass alpha is the majority
    g = bandwidth(3)
    assert same_points(alpha_rne_set(g, 0.6, D), [(1, 0, 0), (0.6, 0.4, 0), (0.6, 0, 0.4)])
    assert same_points(alpha_rne_set(g, 0.6, S), [(1, 0, 0)])


def test_herding_annotations():
    eqs = alpha_rne_set(braess2(0.5), 0.4)
    ann = {p.mu.weights: p.herding for p in eqs.points}
    assert ann[(0.4, 0.6)] == (1,) and ann[(0.6, 0.4)] == (0,)


@pytest.mark.parametrize("g, alpha, policy, expected", [
    (product(), 0.5, D, {0, 1, 2}),
    (braess3(0.5), 0.8, D, {2}),
    (braess2(0.5), 0.6, S, {0}),
    (braess2(0.5), 0.6, D, {0, 1}),
])
def test_herding_choice_set(g, alpha, policy, expected):
    assert herding_choice_set(g, alpha, policy) == expected


@pytest.mark.parametrize("g", [braess2(0.5), braess3(0.3), braess3(0.5), braess3(0.8), bandwidth(3),
                               bandwidth(4), product()])
def test_full_herding_set_below_threshold(g):
    for alpha in np.linspace(0.05, 1 - 1 / g.n, 7):
        assert herding_choice_set(g, alpha, D) == set(range(g.n))


def test_herding_set_requires_alpha_below_one():
    with pytest.raises(ValueError):
        herding_choice_set(braess2(0.5), 1.0)


@pytest.mark.parametrize("g", [braess2(0.5), braess3(0.5), bandwidth(3), product(), random_affine(3, 3)])
@pytest.mark.parametrize("policy", [S, D])
def test_alpha_one_reduces_to_classical(g, policy):
    assert alpha_rne_set(g, 1.0, policy).same_as(classical_equilibria(g))


@pytest.mark.parametrize("seed", range(40))
@pytest.mark.parametrize("policy", [S, D])
def test_tail_collapse_to_classical(seed, policy):
    n = 2 + seed % 3
    g = random_affine(seed, n)
    for alpha in (1 - 1 / n + 0.01, 0.95, 0.99):
        assert alpha_rne_set(g, alpha, policy).same_as(classical_equilibria(g))


@pytest.mark.parametrize("seed", range(40))
@pytest.mark.parametrize("alpha", [0.2, 0.4, 0.7, 0.9])
def test_theorem_one_identity(seed, alpha):
    g = random_affine(seed, 2 + seed % 3)
    full = alpha_rne_set(g, alpha, S)
    parts = theorem_one_sets(g, alpha, S)
    n1 = classical_equilibria(g)
    kept = [p.mu for p in n1.points if not any(p.mu.close_to(r, 1e-12) for r in parts.m_alpha_removed)]
    # removed ones are exactly the classical equilibria with every action under 1 - alpha
    for m in parts.m_alpha_removed:
        assert max(m.weights) < 1 - alpha + 1e-9
    for p in parts.p_alpha.points:
        assert any(abs(p.mu[k] - (1 - alpha)) <= 1e-9 for k in p.herding)
    union = build_set([(m, ()) for m in kept] + [(p.mu, ()) for p in parts.p_alpha.points])
    assert union.same_as(full)


@pytest.mark.parametrize("g, alpha", [(braess3(0.5), 0.6), (bandwidth(3), 0.3), (product(), 0.5),
                                      (braess2(0.5), 0.4)])
@pytest.mark.parametrize("policy", [S, D])
def test_records_pass_membership(g, alpha, policy):
    for rec in records(g, alpha_rne_set(g, alpha, policy), alpha, policy):
        assert is_alpha_rne(g, rec.mu, rec.herding_action, alpha, policy)
        composed = alpha * rec.mu_R.array()
        composed[rec.herding_action] += 1 - alpha
        assert np.allclose(composed, rec.mu.array(), atol=1e-9)


def test_family_restriction():
    g = GameSpec(("a", "b", "c"), [1, 1, 0], np.zeros((3, 3)))
    eqs = alpha_rne_set(g, 0.3, S)
    assert not eqs.points
    pieces = {tuple(sorted(tuple(np.round(e, 9)) for e in f.endpoints())): f.herding for f in eqs.families}
    assert pieces == {
        ((0.7, 0.3, 0.0), (1.0, 0.0, 0.0)): (0,),
        ((0.0, 1.0, 0.0), (0.3, 0.7, 0.0)): (1,),
        ((0.0, 0.3, 0.7), (0.3, 0.0, 0.7)): (2,),
    }
