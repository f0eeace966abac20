"""Choosing which action to steer the herders toward.

A designer publishes an influence measure; herders follow its top action
``h``, and rational players then settle into an equilibrium of the game
conditioned on that herding mass. The designer picks ``h`` to maximize an
objective of the resulting population.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .alpharne import HerdingPolicy, check_alpha, herding_choice_set, is_alpha_rne
from .classical import EquilibriumSet, classical_equilibria, social_value
from .errors import DegenerateGame, EmptyHerdingSet, IllPosed
from .game import GameSpec
from .measures import EPS, Measure, check_tol, make_measure, point_mass


def conditioned_game(g: GameSpec, h: int, alpha: float) -> GameSpec:
    """Game faced by rationals when ``1 - alpha`` mass is pinned on ``h``."""
    b = g.b + (1 - alpha) * g.M[:, h]
    return GameSpec(g.labels, b, alpha * g.M, name=g.name)


def lower_level_equilibrium(g: GameSpec, h: int, alpha: float, tol: float = EPS) -> EquilibriumSet:
    alpha = check_alpha(alpha)
    if alpha == 1:
        raise ValueError("influence needs alpha < 1")
    return classical_equilibria(conditioned_game(g, h, alpha), tol)


def well_posed(g: GameSpec, alpha: float, policy: HerdingPolicy = HerdingPolicy.DECLARED,
               tol: float = EPS) -> tuple[bool, dict[int, int | None]]:
    """Whether every candidate herding action has a unique rational response.

    The detail maps each action to its number of lower-level equilibria
    (None when the lower-level system is degenerate or has a continuum).
    """
    detail: dict[int, int | None] = {}
    for h in sorted(herding_choice_set(g, alpha, policy, tol)):
        try:
            eqs = lower_level_equilibrium(g, h, alpha, tol)
        except DegenerateGame:
            detail[h] = None
            continue
        detail[h] = None if eqs.families else len(eqs.points)
    return all(c == 1 for c in detail.values()) and bool(detail), detail


@dataclass(frozen=True)
class Objective:
    """Designer objective: weighted adoption of actions, or social utility."""

    mode: str = "adoption"
    weights: tuple[float, ...] | None = None

    def __post_init__(self):
        if self.mode not in ("adoption", "social"):
            raise ValueError(f"objective mode must be 'adoption' or 'social', got {self.mode!r}")
        if self.mode == "adoption":
            if self.weights is None:
                raise ValueError("adoption objective needs weights")
            if not np.all(np.isfinite(self.weights)):
                raise ValueError("objective weights must be finite")

    def __call__(self, g: GameSpec, mu: np.ndarray) -> float:
        if self.mode == "social":
            return social_value(g, mu)
        w = np.asarray(self.weights, dtype=float)
        if w.shape != (g.n,):
            raise ValueError(f"expected {g.n} objective weights, got {w.size}")
        return float(w @ mu)


@dataclass(frozen=True)
class InfluenceSolution:
    i_H_star: int
    nu_star: Measure
    mu_R_star: Measure
    mu_star: Measure
    f_star: float
    values: dict  # herding action -> objective value


def design_influence(g: GameSpec, alpha: float, objective: Objective,
                     policy: HerdingPolicy = HerdingPolicy.DECLARED, tol: float = EPS) -> InfluenceSolution:
    alpha = check_alpha(alpha)
    tol = check_tol(tol)
    if alpha == 1:
        raise ValueError("influence needs alpha < 1")
    H = herding_choice_set(g, alpha, policy, tol)
    if not H:
        raise EmptyHerdingSet(f"no action can host the herders at alpha={alpha}")
    ok, detail = well_posed(g, alpha, policy, tol)
    if not ok:
        bad = {h + 1: c for h, c in detail.items() if c != 1}
        raise IllPosed(f"lower-level equilibrium not unique for herding actions {bad}")
    best = None
    values = {}
    for h in sorted(H):
        mu_r = lower_level_equilibrium(g, h, alpha, tol).points[0].mu
        mu = alpha * mu_r.array()
        mu[h] += 1 - alpha
        values[h] = objective(g, mu)
        if best is None or values[h] > values[best[0]] + tol:
            best = (h, mu_r, mu)
    h, mu_r, mu = best
    mu_star = make_measure(mu, tol)
    verdict = is_alpha_rne(g, mu_star, h, alpha, HerdingPolicy.DECLARED, tol)
    if not verdict:
        raise IllPosed(f"designed population is not an equilibrium: {verdict.reason}")
    return InfluenceSolution(h, point_mass(g.n, h), mu_r, mu_star, values[h], values)
