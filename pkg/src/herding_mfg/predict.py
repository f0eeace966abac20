"""Herding-aware iterated elimination of strictly dominated actions.

Rational players know the set ``H`` of possible herding actions. For each
``h`` in ``H`` the population lies in the polytope where ``h`` carries at
least ``1 - alpha`` mass; with affine utilities an action is dominated on the
polytope iff it is dominated at every vertex.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .alpharne import HerdingPolicy, check_alpha, herding_choice_set
from .game import GameSpec
from .measures import EPS, Measure, check_tol, make_measure


def region_vertices(n: int, h: int, alpha: float, surviving) -> list[Measure]:
    """Vertices ``(1 - alpha) e_h + alpha e_j`` for ``j`` in ``surviving``."""
    out = []
    for j in sorted(surviving):
        w = np.zeros(n)
        w[h] += 1 - alpha
        w[j] += alpha
        out.append(make_measure(w))
    return out


def is_dominated(g: GameSpec, i: int, j: int, alpha: float, H, surviving, tol: float = EPS) -> bool:
    """True iff ``j`` beats ``i`` by more than ``tol`` at every vertex of every region."""
    if i == j:
        return False
    for h in sorted(H):
        for v in region_vertices(g.n, h, alpha, surviving):
            u = g.payoffs(v)
            if not u[i] < u[j] - tol:
                return False
    return True


@dataclass(frozen=True)
class PredictionResult:
    trace: tuple[tuple[int, int, int], ...]  # (round, eliminated, dominated by)
    surviving: frozenset[int]
    herding_set: frozenset[int]

    @property
    def unique_prediction(self) -> int | None:
        return next(iter(self.surviving)) if len(self.surviving) == 1 else None


def eliminate(g: GameSpec, alpha: float, H, tol: float = EPS, order=None):
    """Run elimination with ``H`` held fixed; ``order`` picks among dominated actions.

    By default each round removes the smallest dominated index.
    """
    surviving = set(range(g.n))
    trace = []
    rnd = 0
    while len(surviving) > 1:
        dominated = {}
        for i in sorted(surviving):
            for j in sorted(surviving):
                if is_dominated(g, i, j, alpha, H, surviving, tol):
                    dominated[i] = j
                    break
        if not dominated:
            break
        rnd += 1
        i = min(dominated) if order is None else order(sorted(dominated))
        surviving.discard(i)
        trace.append((rnd, i, dominated[i]))
    return trace, frozenset(surviving)


def iterated_prediction(g: GameSpec, alpha: float, policy: HerdingPolicy = HerdingPolicy.DECLARED,
                        tol: float = EPS) -> PredictionResult:
    alpha = check_alpha(alpha)
    tol = check_tol(tol)
    if alpha == 1:
        raise ValueError("prediction needs alpha < 1")
    H = herding_choice_set(g, alpha, policy, tol)
    trace, surviving = eliminate(g, alpha, H, tol)
    return PredictionResult(tuple(trace), surviving, H)
