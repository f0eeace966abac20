"""Population measures on the action simplex.

All comparisons go through a single absolute tolerance ``EPS``; callers may
pass their own ``tol`` but it must be positive.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .errors import NotASimplexPoint

EPS = 1e-9


def check_tol(tol: float) -> float:
    tol = float(tol)
    if not tol > 0 or not np.isfinite(tol):
        raise ValueError(f"tolerance must be a positive finite number, got {tol!r}")
    return tol


@dataclass(frozen=True)
class Measure:
    """An immutable point on the probability simplex over ``n`` actions."""

    weights: tuple[float, ...]

    @property
    def n(self) -> int:
        return len(self.weights)

    def array(self) -> np.ndarray:
        return np.array(self.weights, dtype=float)

    def __len__(self):
        return len(self.weights)

    def __getitem__(self, i):
        return self.weights[i]

    def __iter__(self):
        return iter(self.weights)

    def close_to(self, other, tol: float = EPS) -> bool:
        other = as_array(other)
        return other.shape == (self.n,) and float(np.max(np.abs(self.array() - other))) <= tol


def as_array(mu) -> np.ndarray:
    if isinstance(mu, Measure):
        return mu.array()
    return np.asarray(mu, dtype=float)


def make_measure(weights: Iterable[float], tol: float = EPS) -> Measure:
    """Validate ``weights`` against the simplex and clamp them into [0, 1]."""
    tol = check_tol(tol)
    w = np.asarray(list(weights), dtype=float)
    if w.ndim != 1 or w.size == 0:
        raise NotASimplexPoint("a measure needs a nonempty vector of weights")
    if not np.all(np.isfinite(w)):
        raise NotASimplexPoint(f"non-finite weight in {w.tolist()}")
    bad = np.flatnonzero((w < -tol) | (w > 1 + tol))
    if bad.size:
        i = int(bad[0])
        raise NotASimplexPoint(f"weight {i} = {w[i]!r} outside [0, 1]")
    total = float(w.sum())
    if abs(total - 1.0) > tol:
        raise NotASimplexPoint(f"weights sum to {total!r}, not 1")
    return Measure(tuple(float(x) for x in np.clip(w, 0.0, 1.0)))


def point_mass(n: int, i: int) -> Measure:
    w = [0.0] * n
    w[i] = 1.0
    return Measure(tuple(w))


def support(mu, tol: float = EPS) -> frozenset[int]:
    """Indices carrying more than ``tol`` mass (0-based)."""
    w = as_array(mu)
    return frozenset(int(i) for i in np.flatnonzero(w > tol))


def argmax_set(values: Sequence[float], tol: float = EPS) -> frozenset[int]:
    v = np.asarray(values, dtype=float)
    return frozenset(int(i) for i in np.flatnonzero(v >= v.max() - tol))


def herding_choice(mu, tol: float = EPS) -> int:
    """Smallest index whose mass is within ``tol`` of the largest mass."""
    return min(argmax_set(as_array(mu), tol))


def sort_key(mu) -> tuple[float, ...]:
    # rounding keeps the order stable against last-bit noise
    return tuple(round(float(x), 12) for x in as_array(mu))
