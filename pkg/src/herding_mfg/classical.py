"""Exact enumeration of classical mean-field equilibria (all players rational).

A measure is an equilibrium when every action it uses is a best response to
it. With affine utilities each candidate support gives a linear system, so
enumerating the ``2^n - 1`` supports finds every equilibrium exactly.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import linprog

from ._faces import face_solutions, solve_affine, supports
from .game import GameSpec
from .measures import EPS, Measure, as_array, check_tol, make_measure, sort_key


@dataclass(frozen=True)
class Family:
    """A segment of equilibria ``base + t * direction``, ``t`` in ``[t_lo, t_hi]``."""

    base: tuple[float, ...]
    direction: tuple[float, ...]
    t_lo: float
    t_hi: float
    herding: tuple[int, ...] = ()

    def at(self, t: float) -> np.ndarray:
        return np.asarray(self.base) + t * np.asarray(self.direction)

    def endpoints(self) -> tuple[np.ndarray, np.ndarray]:
        return self.at(self.t_lo), self.at(self.t_hi)

    def midpoint(self) -> np.ndarray:
        return self.at(0.5 * (self.t_lo + self.t_hi))

    def distance(self, mu) -> float:
        """Max-norm distance from ``mu`` to its Euclidean projection on the segment."""
        d = np.asarray(self.direction)
        w = as_array(mu) - np.asarray(self.base)
        t = float(np.clip(w @ d / (d @ d), self.t_lo, self.t_hi))
        return float(np.max(np.abs(self.at(t) - as_array(mu))))

    def same_segment(self, other: "Family", tol: float) -> bool:
        a0, a1 = self.endpoints()
        b0, b1 = other.endpoints()
        close = lambda x, y: float(np.max(np.abs(x - y))) <= tol  # noqa: E731
        return (close(a0, b0) and close(a1, b1)) or (close(a0, b1) and close(a1, b0))


@dataclass(frozen=True)
class EqPoint:
    mu: Measure
    herding: tuple[int, ...] = ()


@dataclass(frozen=True)
class EquilibriumSet:
    points: tuple[EqPoint, ...]
    families: tuple[Family, ...] = field(default=())

    def measures(self) -> list[Measure]:
        return [p.mu for p in self.points]

    def __len__(self):
        return len(self.points) + len(self.families)

    def __iter__(self):
        return iter(self.points)

    def contains(self, mu, tol: float = EPS) -> bool:
        return (any(p.mu.close_to(mu, tol) for p in self.points)
                or any(f.distance(mu) <= tol for f in self.families))

    def same_as(self, other: "EquilibriumSet", tol: float = EPS) -> bool:
        """Equal as point sets (herding annotations ignored)."""
        if len(self.points) != len(other.points) or len(self.families) != len(other.families):
            return False
        if not all(other.contains(p.mu, tol) for p in self.points):
            return False
        if not all(self.contains(p.mu, tol) for p in other.points):
            return False
        return all(any(f.same_segment(h, tol) for h in other.families) for f in self.families)

    def herding_actions(self) -> frozenset[int]:
        out = set()
        for p in self.points:
            out.update(p.herding)
        for f in self.families:
            out.update(f.herding)
        return frozenset(out)


def _merge_families(families, tol):
    merged: list[Family] = []
    for f in families:
        for i, h in enumerate(merged):
            if h.same_segment(f, tol):
                ks = tuple(sorted(set(h.herding) | set(f.herding)))
                merged[i] = Family(h.base, h.direction, h.t_lo, h.t_hi, ks)
                break
        else:
            merged.append(f)
    return merged


def build_set(points, families=(), tol: float = EPS) -> EquilibriumSet:
    """Deduplicate raw ``(weights, herding)`` pairs and families into a set.

    Points closer than ``tol`` (max-norm) merge with the union of their
    herding annotations; a point lying on a family whose annotations already
    cover it is absorbed by the family.
    """
    fams = _merge_families(list(families), tol)
    merged: list[tuple[np.ndarray, set]] = []
    for w, ks in points:
        w = as_array(w)
        for entry in merged:
            if float(np.max(np.abs(entry[0] - w))) <= tol:
                entry[1].update(ks)
                break
        else:
            merged.append((w, set(ks)))
    out = []
    for w, ks in merged:
        if any(f.distance(w) <= tol and ks <= set(f.herding) for f in fams):
            continue
        out.append(EqPoint(make_measure(w, tol), tuple(sorted(ks))))
    out.sort(key=lambda p: sort_key(p.mu))
    fams.sort(key=lambda f: (sort_key(f.at(f.t_lo)), sort_key(f.at(f.t_hi))))
    return EquilibriumSet(tuple(out), tuple(fams))


def segment_to_family(seg, herding=()) -> Family:
    return Family(tuple(float(x) for x in seg.base), tuple(float(x) for x in seg.direction),
                  float(seg.t_lo), float(seg.t_hi), tuple(herding))


def classical_equilibria(g: GameSpec, tol: float = EPS) -> EquilibriumSet:
    tol = check_tol(tol)
    zero = np.zeros(g.n)
    points, families = [], []
    for S in supports(g.n):
        pts, segs = face_solutions(g.b, g.M, S, zero, 1.0, tol)
        points.extend((p, ()) for p in pts)
        families.extend(segment_to_family(s) for s in segs)
    return build_set(points, families, tol)


def is_classical_equilibrium(g: GameSpec, mu, tol: float = EPS) -> bool:
    u = g.payoffs(mu)
    w = as_array(mu)
    return bool(np.all(u[w > tol] >= u.max() - tol))


# -- social optimum ----------------------------------------------------------------

@dataclass(frozen=True)
class SocialOptimum:
    argmax: Measure
    value: float


def social_value(g: GameSpec, mu) -> float:
    w = as_array(mu)
    return float(w @ g.payoffs(w))


def social_optimum(g: GameSpec, tol: float = EPS) -> SocialOptimum:
    """Maximize the quadratic social utility over the simplex by face enumeration.

    On each face the stationarity conditions are linear in ``(x, lambda)``. The
    objective is constant along any null direction of that system, so when a
    face has a continuum of critical points any feasible one will do.
    """
    tol = check_tol(tol)
    n = g.n
    Q = g.M + g.M.T
    best_w, best_v = None, -np.inf
    for S in supports(n):
        S = list(S)
        m = len(S)
        A = np.zeros((m + 1, m + 1))
        A[:m, :m] = Q[np.ix_(S, S)]
        A[:m, m] = -1.0
        A[m, :m] = 1.0
        c = np.concatenate([-g.b[S], [1.0]])
        sol = solve_affine(A, c)
        if sol is None:
            continue
        x0, N = sol
        if N.shape[1] == 0:
            x = x0[:m]
            if np.any(x < -tol):
                continue
        else:
            res = linprog(np.zeros(m + 1), A_eq=A, b_eq=c,
                          bounds=[(0, None)] * m + [(None, None)], method="highs")
            if res.status != 0:
                continue
            x = res.x[:m]
        w = np.zeros(n)
        w[S] = np.clip(x, 0.0, None)
        w /= w.sum()
        v = social_value(g, w)
        if v > best_v + tol:
            best_w, best_v = w, v
    return SocialOptimum(make_measure(best_w, tol), best_v)
