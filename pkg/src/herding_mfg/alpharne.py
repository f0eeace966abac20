"""Equilibria of mixed populations: rational best-responders plus herders.

A fraction ``alpha`` of the population best-responds; the remaining
``1 - alpha`` all sit on one herding action ``k``. Which ``k`` counts as
consistent is governed by a :class:`HerdingPolicy`.
"""
from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np

from ._faces import face_solutions, split_span, supports
from .classical import EquilibriumSet, Family, build_set, classical_equilibria, segment_to_family
from .errors import HerdingMassTooSmall
from .game import GameSpec
from .measures import EPS, Measure, argmax_set, as_array, check_tol, herding_choice, make_measure, support


class HerdingPolicy(str, Enum):
    """How the herding action must relate to the population measure.

    STRICT: herders follow the smallest-index majority action of ``mu``.
    DECLARED: herders may also sit on any action tied for the majority, or on
    an action holding exactly their own mass ``1 - alpha`` when
    ``alpha <= 1 - 1/n`` (herders following themselves).
    """

    STRICT = "strict"
    DECLARED = "declared"


def check_alpha(alpha: float) -> float:
    alpha = float(alpha)
    if not 0 < alpha <= 1:
        raise ValueError(f"alpha must lie in (0, 1], got {alpha!r}")
    return alpha


def policy_allows(mu, k: int, alpha: float, policy: HerdingPolicy, tol: float = EPS) -> bool:
    """Herding-consistency test for action ``k`` at ``mu``."""
    w = as_array(mu)
    if k == herding_choice(w, tol):
        return True
    if HerdingPolicy(policy) is HerdingPolicy.DECLARED:
        if w[k] >= w.max() - tol:
            return True
        n = w.size
        return abs(w[k] - (1 - alpha)) <= tol and alpha <= 1 - 1 / n + tol
    return False


def rational_measure(mu, k: int | None, alpha: float, tol: float = EPS) -> Measure:
    """Recover the rational players' measure from ``mu`` and herding action ``k``."""
    alpha = check_alpha(alpha)
    tol = check_tol(tol)
    w = as_array(mu)
    if alpha == 1 or k is None:
        return make_measure(w, tol)
    if w[k] < 1 - alpha - tol:
        raise HerdingMassTooSmall(
            f"herding action {k + 1} carries {float(w[k])!r} < 1 - alpha = {1 - alpha!r}")
    r = w / alpha
    r[k] = (w[k] - (1 - alpha)) / alpha
    # division by alpha magnifies rounding; scale the tolerance with it
    return make_measure(np.clip(r, 0.0, None), tol / alpha)


@dataclass(frozen=True)
class AlphaRNE:
    mu: Measure
    herding_action: int | None
    mu_R: Measure
    alpha: float
    policy: HerdingPolicy


class Verdict:
    """Boolean result that also carries a human-readable reason."""

    __slots__ = ("ok", "reason")

    def __init__(self, ok: bool, reason: str = ""):
        self.ok = bool(ok)
        self.reason = reason

    def __bool__(self):
        return self.ok

    def __repr__(self):
        return f"Verdict({self.ok}, {self.reason!r})"


def is_alpha_rne(g: GameSpec, mu, k: int | None, alpha: float,
                 policy: HerdingPolicy = HerdingPolicy.DECLARED, tol: float = EPS) -> Verdict:
    alpha = check_alpha(alpha)
    w = as_array(mu)
    if w.shape != (g.n,):
        return Verdict(False, "measure dimension does not match the game")
    if alpha < 1:
        if k is None or not 0 <= k < g.n:
            return Verdict(False, "a herding action is required when alpha < 1")
    try:
        r = rational_measure(w, k, alpha, tol).array()
    except (HerdingMassTooSmall, ValueError) as exc:
        return Verdict(False, str(exc))
    best = argmax_set(g.payoffs(w), tol)
    stray = support(r, tol) - best
    if stray:
        return Verdict(False, f"rational mass on non-best responses {sorted(i + 1 for i in stray)}")
    if alpha < 1:
        composed = alpha * r
        composed[k] += 1 - alpha
        if float(np.max(np.abs(composed - w))) > tol:
            return Verdict(False, "composition of rational and herding mass does not match")
        if not policy_allows(w, k, alpha, policy, tol):
            return Verdict(False, f"herding on action {k + 1} is inconsistent with the {HerdingPolicy(policy).value} policy")
    return Verdict(True, "ok")


def valid_herding_actions(g, mu, alpha, policy, tol=EPS) -> tuple[int, ...]:
    if alpha == 1:
        return ()
    return tuple(k for k in range(g.n) if is_alpha_rne(g, mu, k, alpha, policy, tol))


# -- families ------------------------------------------------------------------

def _restrict_family(f: Family, k: int, alpha: float, policy: HerdingPolicy, tol: float):
    """Sub-segments (or single points) of ``f`` on which ``k`` is a valid herding action."""
    base = np.asarray(f.base)
    d = np.asarray(f.direction)
    n = base.size
    step = float(np.max(np.abs(d)))
    strict = HerdingPolicy(policy) is HerdingPolicy.STRICT
    mass_row = (base[k] - (1 - alpha), d[k])

    # k must hold the majority; under the strict rule lower indices must trail it
    a, s = [mass_row[0]], [mass_row[1]]
    for j in range(n):
        if j != k:
            a.append(base[k] - base[j] - (2 * tol if strict and j < k else 0.0))
            s.append(d[k] - d[j])
    found = [split_span(np.array(a), np.array(s), f.t_lo, f.t_hi, step, tol)]

    if not strict and alpha <= 1 - 1 / n + tol:
        # herders following themselves: k holds exactly 1 - alpha
        gap = mass_row[0]
        if abs(d[k]) <= 1e-14:
            if abs(gap) <= tol:
                found.append(("segment", f.t_lo, f.t_hi))
        else:
            t = -gap / d[k]
            if f.t_lo - tol <= t <= f.t_hi + tol:
                found.append(("point", float(np.clip(t, f.t_lo, f.t_hi))))
    points, fams = [], []
    for item in found:
        if item is None:
            continue
        if item[0] == "point":
            points.append(f.at(item[1]))
        else:
            fams.append(Family(f.base, f.direction, item[1], item[2], (k,)))
    return points, fams


# -- filter and constructor sets ------------------------------------------------------

@dataclass(frozen=True)
class TheoremOneSets:
    """Classical equilibria removed by herding, those kept, and the new ones."""

    m_alpha_removed: tuple[Measure, ...]
    kept: EquilibriumSet
    p_alpha: EquilibriumSet


def theorem_one_sets(g: GameSpec, alpha: float, policy: HerdingPolicy = HerdingPolicy.DECLARED,
                     tol: float = EPS, classical: EquilibriumSet | None = None) -> TheoremOneSets:
    alpha = check_alpha(alpha)
    tol = check_tol(tol)
    policy = HerdingPolicy(policy)
    n1 = classical if classical is not None else classical_equilibria(g, tol)
    removed, kept_pts, kept_fams = [], [], []
    for p in n1.points:
        ks = valid_herding_actions(g, p.mu, alpha, policy, tol) if alpha < 1 else ()
        if alpha < 1 and not ks:
            removed.append(p.mu)
        else:
            kept_pts.append((p.mu, ks))
    for f in n1.families:
        if alpha == 1:
            kept_fams.append(f)
            continue
        for k in range(g.n):
            pts, fams = _restrict_family(f, k, alpha, policy, tol)
            kept_pts.extend((w, (k,)) for w in pts if is_alpha_rne(g, w, k, alpha, policy, tol))
            kept_fams.extend(fams)

    new_pts, new_fams = [], []
    if alpha < 1:
        for k in range(g.n):
            offset = np.zeros(g.n)
            offset[k] = 1 - alpha
            for S in supports(g.n, exclude=k):
                pts, segs = face_solutions(g.b, g.M, S, offset, alpha, tol)
                new_pts.extend((w, (k,)) for w in pts if is_alpha_rne(g, w, k, alpha, policy, tol))
                for seg in segs:
                    sub_pts, sub_fams = _restrict_family(segment_to_family(seg), k, alpha, policy, tol)
                    new_pts.extend((w, (k,)) for w in sub_pts
                                   if is_alpha_rne(g, w, k, alpha, policy, tol))
                    new_fams.extend(sub_fams)
    return TheoremOneSets(tuple(removed), build_set(kept_pts, kept_fams, tol),
                          build_set(new_pts, new_fams, tol))


def alpha_rne_set(g: GameSpec, alpha: float, policy: HerdingPolicy = HerdingPolicy.DECLARED,
                  tol: float = EPS) -> EquilibriumSet:
    """All equilibria at rational fraction ``alpha``, each annotated with every valid herding action."""
    alpha = check_alpha(alpha)
    tol = check_tol(tol)
    if alpha == 1:
        return classical_equilibria(g, tol)
    parts = theorem_one_sets(g, alpha, policy, tol)
    raw = [(p.mu, p.herding) for p in parts.kept.points + parts.p_alpha.points]
    merged = build_set(raw, parts.kept.families + parts.p_alpha.families, tol)
    points = [(p.mu, valid_herding_actions(g, p.mu, alpha, policy, tol)) for p in merged.points]
    return build_set(points, merged.families, tol)


def records(g: GameSpec, eqs: EquilibriumSet, alpha: float,
            policy: HerdingPolicy = HerdingPolicy.DECLARED, tol: float = EPS) -> list[AlphaRNE]:
    """One :class:`AlphaRNE` per (point, herding action) pair of ``eqs``."""
    out = []
    for p in eqs.points:
        if alpha == 1:
            out.append(AlphaRNE(p.mu, None, p.mu, 1.0, HerdingPolicy(policy)))
            continue
        for k in p.herding:
            out.append(AlphaRNE(p.mu, k, rational_measure(p.mu, k, alpha, tol), alpha, HerdingPolicy(policy)))
    return out


def herding_choice_set(g: GameSpec, alpha: float, policy: HerdingPolicy = HerdingPolicy.DECLARED,
                       tol: float = EPS) -> frozenset[int]:
    alpha = check_alpha(alpha)
    if alpha == 1:
        raise ValueError("the herding set needs alpha < 1")
    return alpha_rne_set(g, alpha, policy, tol).herding_actions()
