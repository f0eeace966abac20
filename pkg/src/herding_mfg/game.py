"""Finite-action mean-field games with utilities affine in the population.

A game stores ``u(i, mu) = b[i] + sum_j M[i, j] * mu[j]``. The four built-in
games (product selection, two- and three-route networks, bandwidth sharing)
are all of this form.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .errors import GameSchemaError
from .measures import as_array

BUILTINS = ("product", "braess2", "braess3", "bandwidth")


def _frozen(a) -> np.ndarray:
    a = np.array(a, dtype=float)
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class GameSpec:
    labels: tuple[str, ...]
    b: np.ndarray
    M: np.ndarray
    name: str | None = None
    params: dict = field(default_factory=dict)

    def __post_init__(self):
        b = _frozen(self.b)
        M = _frozen(self.M)
        n = len(self.labels)
        if n < 2:
            raise ValueError("a game needs at least two actions")
        if len(set(self.labels)) != n:
            raise ValueError(f"action labels must be distinct: {self.labels}")
        if b.shape != (n,) or M.shape != (n, n):
            raise ValueError(f"utility dimensions {b.shape}, {M.shape} do not match {n} actions")
        if not (np.all(np.isfinite(b)) and np.all(np.isfinite(M))):
            raise ValueError("utility coefficients must be finite")
        object.__setattr__(self, "labels", tuple(self.labels))
        object.__setattr__(self, "b", b)
        object.__setattr__(self, "M", M)

    @property
    def n(self) -> int:
        return len(self.labels)

    def payoffs(self, mu) -> np.ndarray:
        """Vector of ``u(i, mu)`` over all actions."""
        w = as_array(mu)
        if w.shape != (self.n,):
            raise ValueError(f"measure has {w.size} weights, game has {self.n} actions")
        return self.b + self.M @ w

    def rescaled(self, scale: float, shift: float = 0.0) -> "GameSpec":
        return GameSpec(self.labels, scale * self.b + shift, scale * self.M, self.name, dict(self.params))

    def __eq__(self, other):
        if not isinstance(other, GameSpec):
            return NotImplemented
        return (self.labels == other.labels and np.array_equal(self.b, other.b)
                and np.array_equal(self.M, other.M))

    def __hash__(self):
        return hash((self.labels, self.b.tobytes(), self.M.tobytes()))

    def __repr__(self):
        return f"GameSpec(name={self.name!r}, labels={self.labels})"


def utility(g: GameSpec, i: int, mu) -> float:
    if not 0 <= i < g.n:
        raise ValueError(f"action index {i} out of range for {g.n} actions")
    return float(g.payoffs(mu)[i])


def utility_diff(g: GameSpec, i: int, j: int, mu) -> float:
    """``h_ij(mu) = u(i, mu) - u(j, mu)``."""
    if i == j:
        raise ValueError("utility_diff needs two distinct actions")
    u = g.payoffs(mu)
    return float(u[i] - u[j])


# -- built-in games ---------------------------------------------------------

def _check_rho(rho):
    if not 0 < rho < 1:
        raise ValueError(f"congestion coefficient must lie in (0, 1), got {rho!r}")


def braess2(rho: float) -> GameSpec:
    _check_rho(rho)
    return GameSpec(("A", "B"), [-1.0, -1.0], [[-rho, 0.0], [0.0, -rho]],
                    name="braess2", params={"rho": rho})


def braess3(rho: float) -> GameSpec:
    _check_rho(rho)
    M = [[-rho, 0.0, -rho],
         [0.0, -rho, -rho],
         [-rho, -rho, -2 * rho]]
    return GameSpec(("A", "B", "AB"), [-1.0, -1.0, 0.0], M, name="braess3", params={"rho": rho})


def bandwidth_levels(n: int) -> list[float]:
    return [1.0 / j for j in range(1, n + 1)]


def bandwidth(n: int) -> GameSpec:
    if int(n) != n or n < 2:
        raise ValueError(f"bandwidth game needs an integer n >= 2, got {n!r}")
    n = int(n)
    levels = np.array(bandwidth_levels(n))
    labels = tuple("1" if j == 1 else f"1/{j}" for j in range(1, n + 1))
    return GameSpec(labels, levels, -np.outer(levels, levels), name="bandwidth", params={"n": n})


def product(c1: float = 3.0, c2: float = 2.0, c3: float = 1.0) -> GameSpec:
    if not c1 > c2 > c3:
        raise ValueError(f"product game needs c1 > c2 > c3, got {(c1, c2, c3)}")
    return GameSpec(("1", "2", "3"), [c1, c2, c3], np.zeros((3, 3)),
                    name="product", params={"c": [c1, c2, c3]})


def builtin(name: str, *, rho: float | None = None, n: int | None = None,
            constants: Sequence[float] | None = None) -> GameSpec:
    if name == "braess2":
        return braess2(0.5 if rho is None else rho)
    if name == "braess3":
        return braess3(0.5 if rho is None else rho)
    if name == "bandwidth":
        return bandwidth(3 if n is None else n)
    if name == "product":
        c = (3.0, 2.0, 1.0) if constants is None else tuple(constants)
        if len(c) != 3:
            raise ValueError("product game takes exactly three constants")
        return product(*c)
    raise ValueError(f"unknown built-in game {name!r}; choose from {', '.join(BUILTINS)}")


# -- JSON --------------------------------------------------------------------

def _number(x, path):
    if isinstance(x, bool) or not isinstance(x, (int, float)):
        raise GameSchemaError(path, f"expected a number, got {type(x).__name__}")
    if not np.isfinite(x):
        raise GameSchemaError(path, "number must be finite")
    return float(x)


def game_from_dict(doc) -> GameSpec:
    if not isinstance(doc, dict):
        raise GameSchemaError("$", "game document must be an object")
    name = doc.get("name")
    if name is not None and not isinstance(name, str):
        raise GameSchemaError("$.name", "must be a string")
    actions = doc.get("actions")
    if not isinstance(actions, list) or len(actions) < 2:
        raise GameSchemaError("$.actions", "must be a list of at least two strings")
    for k, a in enumerate(actions):
        if not isinstance(a, str):
            raise GameSchemaError(f"$.actions[{k}]", "must be a string")
    if len(set(actions)) != len(actions):
        raise GameSchemaError("$.actions", "labels must be distinct")
    n = len(actions)
    util = doc.get("utility")
    if not isinstance(util, dict):
        raise GameSchemaError("$.utility", "missing or not an object")
    kind = util.get("type", "affine")
    if kind != "affine":
        raise GameSchemaError("$.utility.type", f"unsupported utility type {kind!r}")
    for key in ("b", "M"):
        if key not in util:
            raise GameSchemaError(f"$.utility.{key}", "missing")
    b = util["b"]
    if not isinstance(b, list) or len(b) != n:
        raise GameSchemaError("$.utility.b", f"must be a list of {n} numbers")
    b = [_number(x, f"$.utility.b[{i}]") for i, x in enumerate(b)]
    M = util["M"]
    if not isinstance(M, list) or len(M) != n:
        raise GameSchemaError("$.utility.M", f"must be a list of {n} rows")
    rows = []
    for i, row in enumerate(M):
        if not isinstance(row, list) or len(row) != n:
            raise GameSchemaError(f"$.utility.M[{i}]", f"must be a list of {n} numbers")
        rows.append([_number(x, f"$.utility.M[{i}][{j}]") for j, x in enumerate(row)])
    return GameSpec(tuple(actions), b, rows, name=name)


def parse_game(text: str) -> GameSpec:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise GameSchemaError("$", f"invalid JSON: {exc}") from None
    return game_from_dict(doc)


def game_to_dict(g: GameSpec) -> dict:
    doc = {}
    if g.name is not None:
        doc["name"] = g.name
    doc["actions"] = list(g.labels)
    doc["utility"] = {"type": "affine", "b": g.b.tolist(), "M": g.M.tolist()}
    return doc


def serialize_game(g: GameSpec) -> str:
    # repr-based float text round-trips exactly
    return json.dumps(game_to_dict(g))

