"""Support (face) systems shared by the classical and alpha-RNE enumerators.

On a fixed support the equal-utility conditions of an affine game are linear,
so each face reduces to an affine system plus sign and best-response
inequalities. Solutions come back as isolated points or one-parameter
segments.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np
from scipy.optimize import linprog

from .errors import DegenerateGame

_RCOND = 1e-10


def supports(n: int, exclude: int | None = None):
    """Nonempty subsets of ``range(n)`` by size, then lexicographically."""
    pool = [i for i in range(n) if i != exclude]
    for size in range(1, len(pool) + 1):
        yield from itertools.combinations(pool, size)


def solve_affine(A: np.ndarray, c: np.ndarray):
    """Return ``(x0, N)`` spanning all solutions of ``A x = c``, or None."""
    A = np.atleast_2d(np.asarray(A, dtype=float))
    c = np.asarray(c, dtype=float)
    U, s, Vt = np.linalg.svd(A)
    scale = max(1.0, float(s[0])) if s.size else 1.0
    rank = int(np.sum(s > _RCOND * scale))
    x0 = Vt[:rank].T @ ((U[:, :rank].T @ c) / s[:rank])
    resid = float(np.max(np.abs(A @ x0 - c))) if c.size else 0.0
    if resid > 1e-9 * max(1.0, float(np.max(np.abs(c))), scale):
        return None
    return x0, Vt[rank:].T


def feasible_interval(a: np.ndarray, slope: np.ndarray, lo: float, hi: float, tol: float,
                      flat_tol: float | None = None):
    """Shrink ``[lo, hi]`` to the ``t`` satisfying ``a + slope * t >= -tol`` row-wise.

    Rows with no slope are tested against ``flat_tol`` (defaults to ``tol``).
    """
    flat_tol = tol if flat_tol is None else flat_tol
    for ai, si in zip(np.atleast_1d(a), np.atleast_1d(slope)):
        if abs(si) <= 1e-14:
            if ai < -flat_tol:
                return None
            continue
        bound = (-tol - ai) / si
        if si > 0:
            lo = max(lo, bound)
        else:
            hi = min(hi, bound)
    if lo > hi:
        return None
    return lo, hi


@dataclass(frozen=True)
class Segment:
    """``base + t * direction`` for ``t`` in ``[t_lo, t_hi]`` (full-length vectors)."""

    base: np.ndarray
    direction: np.ndarray
    t_lo: float
    t_hi: float


def split_span(a, slope, lo, hi, step, tol):
    """Classify the ``t`` satisfying ``a + slope * t >= 0`` as a segment or a point.

    Returns ``("segment", lo, hi)`` when the exact span moves the measure by
    more than ``tol`` (``step`` is the max-norm length of a unit move),
    ``("point", t)`` when only a tolerance-wide sliver survives, else None.
    """
    exact = feasible_interval(a, slope, lo, hi, 0.0, tol)
    if exact is not None and (exact[1] - exact[0]) * step > tol:
        return ("segment",) + exact
    loose = feasible_interval(a, slope, lo, hi, tol)
    if loose is None:
        return None
    if exact is not None:
        return ("point", 0.5 * (exact[0] + exact[1]))
    return ("point", 0.5 * (loose[0] + loose[1]))


def face_solutions(b, M, support, offset, mass, tol):
    """Measures ``offset + x`` with ``x >= 0`` on ``support`` summing to ``mass``.

    Utilities must tie across ``support`` and every support action must be a
    best response within ``tol``. Returns ``(points, segments)``.
    """
    S = list(support)
    n = len(b)
    E = np.zeros((n, len(S)))
    E[S, np.arange(len(S))] = 1.0
    u0 = b + M @ offset
    G = M @ E
    s0 = S[0]
    A = np.vstack([G[S[1:]] - G[s0], np.ones((1, len(S)))])
    c = np.concatenate([u0[s0] - u0[S[1:]], [mass]])
    sol = solve_affine(A, c)
    if sol is None:
        return [], []
    x0, N = sol
    others = [m for m in range(n) if m not in S]
    Gbr = G[s0] - G[others]
    hbr = u0[s0] - u0[others]
    nullity = N.shape[1]

    if nullity == 0:
        if np.all(x0 > tol) and np.all(hbr + Gbr @ x0 >= -tol):
            return [offset + E @ x0], []
        return [], []

    if nullity == 1:
        d = N[:, 0] / np.max(np.abs(N[:, 0]))
        a = np.concatenate([x0, hbr + Gbr @ x0])
        slope = np.concatenate([d, Gbr @ d])
        found = split_span(a, slope, -np.inf, np.inf, 1.0, tol)
        if found is None:
            return [], []
        if found[0] == "point":
            return [offset + E @ (x0 + found[1] * d)], []
        return [], [Segment(offset + E @ x0, E @ d, found[1], found[2])]

    return _lp_face(A, c, Gbr, hbr, offset, E, S, nullity, tol)


def _lp_face(A, c, Gbr, hbr, offset, E, S, nullity, tol):
    # Higher nullity: accept only when the constraints pin a single point.
    k = A.shape[1]
    A_ub = -Gbr if Gbr.size else None
    b_ub = hbr + tol if Gbr.size else None
    bounds = [(0, None)] * k
    lows, highs, x_ref = [], [], None
    for i in range(k):
        for sign in (1.0, -1.0):
            obj = np.zeros(k)
            obj[i] = sign
            res = linprog(obj, A_ub=A_ub, b_ub=b_ub, A_eq=A, b_eq=c, bounds=bounds, method="highs")
            if res.status == 2:
                return [], []
            if res.status != 0:
                raise DegenerateGame(f"linear program failed on support {S}: {res.message}")
            (lows if sign > 0 else highs).append(res.x[i])
            if x_ref is None:
                x_ref = res.x
    if max(h - l for l, h in zip(lows, highs)) > 1e-7:
        raise DegenerateGame(
            f"support {tuple(i + 1 for i in S)} has a {nullity}-dimensional solution set")
    return [offset + E @ np.clip(x_ref, 0.0, None)], []
