"""Independent brute-force checks for claimed equilibrium sets.

Nothing here reuses the solver's equilibrium code. Membership is re-derived
from the equilibrium definition directly, completeness is probed by scanning
an augmented simplex grid, and an exact enumeration over (herding action,
rational support) pairs solves for the rational measure itself rather than
the population measure.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field

import numpy as np
from scipy.linalg import lstsq, null_space

from .measures import EPS

SCAN_TOL = 1e-6
CLUSTER_RADIUS = 1e-3


class OracleError(Exception):
    """The exact enumeration met a case it does not handle."""


def _policy_name(policy) -> str:
    name = getattr(policy, "value", policy)
    if name not in ("strict", "declared"):
        raise ValueError(f"unknown herding policy {policy!r}")
    return name


def _payoff_fn(game):
    if hasattr(game, "b") and hasattr(game, "M"):
        b = np.asarray(game.b, dtype=float)
        M = np.asarray(game.M, dtype=float)
        return lambda X: X @ M.T + b
    return lambda X: np.apply_along_axis(lambda row: np.asarray(game(row), dtype=float), -1, X)


# -- the definition, vectorized ----------------------------------------------------

def definition_mask(U, X, k, alpha, policy, tol):
    """Rows of ``X`` (population measures, payoffs ``U``) that are equilibria with herding on ``k``."""
    n = X.shape[1]
    top = U.max(axis=1, keepdims=True)
    if k is None:
        R = X
        ok = np.ones(len(X), dtype=bool)
    else:
        ok = X[:, k] >= 1 - alpha - tol
        R = X / alpha
        R[:, k] = (X[:, k] - (1 - alpha)) / alpha
    ok &= np.all(X >= -tol, axis=1) & np.all(R >= -tol / min(alpha, 1.0), axis=1)
    used = R > tol
    ok &= ~np.any(used & (U < top - tol), axis=1)
    if k is not None:
        lead = X.max(axis=1)
        first = np.argmax(X >= lead[:, None] - tol, axis=1)
        good = first == k
        if policy == "declared":
            good |= X[:, k] >= lead - tol
            if alpha <= 1 - 1 / n + tol:
                good |= np.abs(X[:, k] - (1 - alpha)) <= tol
        ok &= good
    return ok


def holds(payoff, mu, k, alpha, policy, tol=EPS) -> bool:
    X = np.asarray(mu, dtype=float)[None, :]
    return bool(definition_mask(payoff(X), X, k, alpha, _policy_name(policy), tol)[0])


def _herding_options(n, alpha):
    return [None] if alpha >= 1 else list(range(n))


# -- grid scan ---------------------------------------------------------------------

@dataclass
class Cluster:
    representative: tuple[float, ...]
    size: int
    herding: set = field(default_factory=set)


def augmented_grid(n: int, G: int, alpha: float) -> np.ndarray:
    values = set(np.round(np.arange(G + 1) / G, 15))
    values |= {0.0, alpha, 1 - alpha, 0.5, 1 / n, 1.0}
    vals = np.array(sorted(values))
    vals = vals[(vals >= 0) & (vals <= 1)]
    head = np.array(list(itertools.product(vals, repeat=n - 1)))
    last = 1 - head.sum(axis=1)
    keep = last >= -1e-12
    X = np.column_stack([head[keep], np.clip(last[keep], 0, None)])
    return X


def grid_scan(game, alpha: float, policy="declared", G: int = 100, tol: float = SCAN_TOL,
              n: int | None = None) -> list[Cluster]:
    """Approximate equilibria on the augmented grid, clustered at ``CLUSTER_RADIUS``.

    ``game`` is either an affine game (attributes ``b`` and ``M``) or a
    callable mapping a measure to its payoff vector, in which case ``n`` is
    required.
    """
    policy = _policy_name(policy)
    n = n if n is not None else len(game.b)
    payoff = _payoff_fn(game)
    X = augmented_grid(n, G, alpha)
    U = payoff(X)
    hits: dict[int, set] = {}
    for k in _herding_options(n, alpha):
        for row in np.flatnonzero(definition_mask(U, X, k, alpha, policy, tol)):
            hits.setdefault(int(row), set()).add(k)
    clusters: list[Cluster] = []
    for row in sorted(hits, key=lambda r: tuple(X[r])):
        x = X[row]
        for c in clusters:
            if np.max(np.abs(np.asarray(c.representative) - x)) <= CLUSTER_RADIUS:
                c.size += 1
                c.herding |= hits[row]
                break
        else:
            clusters.append(Cluster(tuple(float(v) for v in x), 1, set(hits[row])))
    return clusters


# -- exact enumeration ----------------------------------------------------------------

@dataclass
class OracleSet:
    points: list[np.ndarray] = field(default_factory=list)
    segments: list[tuple[np.ndarray, np.ndarray]] = field(default_factory=list)

    def contains(self, mu, tol: float) -> bool:
        mu = np.asarray(mu, dtype=float)
        if any(np.max(np.abs(p - mu)) <= tol for p in self.points):
            return True
        return any(_segment_gap(a, b, mu) <= tol for a, b in self.segments)


def _segment_gap(a, b, x) -> float:
    d = b - a
    dd = float(d @ d)
    t = 0.0 if dd == 0 else float(np.clip((x - a) @ d / dd, 0.0, 1.0))
    return float(np.max(np.abs(a + t * d - x)))


def _line_pieces(payoff, p, d, k, alpha, policy, tol, funcs):
    """Valid points and segments of ``p + t d`` found by testing between breakpoints."""
    cuts = set()
    for a0, a1 in funcs:
        if abs(a1) > 1e-13:
            cuts.add(-a0 / a1)
    cuts = sorted(cuts)
    ok = lambda t: holds(payoff, p + t * d, k, alpha, policy, tol)  # noqa: E731
    good_cuts = [t for t in cuts if ok(t)]
    pts, segs = [], []
    for lo, hi in zip(cuts, cuts[1:]):
        if hi - lo > 1e-12 and ok(0.5 * (lo + hi)):
            if segs and abs(segs[-1][1] - lo) <= 1e-12:
                segs[-1] = (segs[-1][0], hi)
            else:
                segs.append((lo, hi))
    for t in good_cuts:
        if not any(lo - 1e-12 <= t <= hi + 1e-12 for lo, hi in segs):
            pts.append(p + t * d)
    return pts, [(p + lo * d, p + hi * d) for lo, hi in segs]


def exact_enumeration(game, alpha: float, policy="declared", tol: float = EPS) -> OracleSet:
    """Enumerate equilibria by solving for the rational measure on every support.

    For herding action ``k`` and rational support ``S`` the population is
    ``alpha * r + (1 - alpha) e_k`` with ``r`` supported on ``S``; payoffs tie
    on ``S`` and ``r`` sums to one. Two or more free directions raise
    :class:`OracleError`.
    """
    policy = _policy_name(policy)
    b = np.asarray(game.b, dtype=float)
    M = np.asarray(game.M, dtype=float)
    n = b.size
    payoff = _payoff_fn(game)
    out = OracleSet()
    for k in _herding_options(n, alpha):
        base = np.zeros(n)
        if k is not None:
            base[k] = 1 - alpha
        scale = 1.0 if k is None else alpha
        c0 = b + M @ base
        for size in range(1, n + 1):
            for S in itertools.combinations(range(n), size):
                S = list(S)
                cols = scale * M[:, S]
                A = np.vstack([cols[S[1:]] - cols[S[0]], np.ones(size)])
                rhs = np.concatenate([c0[S[0]] - c0[S[1:]], [1.0]])
                r0, *_ = lstsq(A, rhs)
                if np.max(np.abs(A @ r0 - rhs)) > 1e-9:
                    continue
                Z = null_space(A, rcond=1e-10)
                mu0 = base.copy()
                mu0[S] += scale * r0
                if Z.shape[1] == 0:
                    if np.all(r0 > tol) and holds(payoff, mu0, k, alpha, policy, tol):
                        out.points.append(mu0)
                    continue
                if Z.shape[1] > 1:
                    raise OracleError(f"support {S} with herding {k} leaves {Z.shape[1]} free directions")
                d = np.zeros(n)
                d[S] = scale * Z[:, 0]
                # breakpoints: rational weights, payoff gaps, and herding-rule comparisons
                U0, U1 = c0 + M @ (mu0 - base), M @ d
                funcs = [(mu0[i] - base[i], d[i]) for i in S]
                funcs += [(U0[i] - U0[j], U1[i] - U1[j]) for i in range(n) for j in range(i)]
                if k is not None:
                    funcs += [(mu0[k] - mu0[j], d[k] - d[j]) for j in range(n) if j != k]
                    funcs.append((mu0[k] - (1 - alpha), d[k]))
                pts, segs = _line_pieces(payoff, mu0, d, k, alpha, policy, tol, funcs)
                out.points.extend(pts)
                out.segments.extend(segs)
    pts: list[np.ndarray] = []
    for p in out.points:
        if not any(np.max(np.abs(p - q)) <= tol for q in pts):
            pts.append(p)
    out.points = [p for p in pts if not any(_segment_gap(a, b_, p) <= tol for a, b_ in out.segments)]
    return out


# -- verification report ---------------------------------------------------------------

@dataclass
class OracleReport:
    membership_failures: list[str] = field(default_factory=list)
    completeness_suspects: list[tuple[float, ...]] = field(default_factory=list)
    enumeration_mismatches: list[str] = field(default_factory=list)

    @property
    def agreement(self) -> bool:
        return not (self.membership_failures or self.completeness_suspects or self.enumeration_mismatches)


def _claimed_samples(claimed):
    for p in claimed.points:
        yield np.asarray(p.mu.weights if hasattr(p.mu, "weights") else p.mu, dtype=float), tuple(p.herding)
    for f in claimed.families:
        a, b = f.endpoints()
        for x in (a, 0.5 * (a + b), b):
            yield np.asarray(x, dtype=float), tuple(f.herding)


def _claimed_distance(claimed, x) -> float:
    dists = [float(np.max(np.abs(np.asarray(p.mu.weights) - x))) for p in claimed.points]
    dists += [_segment_gap(*f.endpoints(), x) for f in claimed.families]
    return min(dists) if dists else np.inf


def verify_set(game, alpha: float, policy, claimed, G: int = 100, tol: float = EPS,
               enumerate_exact: bool = True) -> OracleReport:
    """Re-check ``claimed`` point by point, scan for missed equilibria, and compare enumerations."""
    if G < 50:
        raise ValueError(f"grid resolution must be at least 50, got {G}")
    policy = _policy_name(policy)
    n = len(game.b)
    payoff = _payoff_fn(game)
    report = OracleReport()
    for x, ks in _claimed_samples(claimed):
        options = ks if (ks and alpha < 1) else _herding_options(n, alpha)
        verdicts = [holds(payoff, x, k, alpha, policy, tol) for k in options]
        if (ks and alpha < 1 and not all(verdicts)) or not any(verdicts):
            report.membership_failures.append(
                f"mu={tuple(round(float(v), 12) for v in x)} herding={tuple(k + 1 for k in ks)}")
    for c in grid_scan(game, alpha, policy, G):
        if _claimed_distance(claimed, np.asarray(c.representative)) > CLUSTER_RADIUS:
            report.completeness_suspects.append(c.representative)
    if enumerate_exact:
        ref = exact_enumeration(game, alpha, policy, tol)
        slack = max(tol, 1e-9) * 10
        for x, _ in _claimed_samples(claimed):
            if not ref.contains(x, slack):
                report.enumeration_mismatches.append(f"extra {tuple(round(float(v), 12) for v in x)}")
        probes = list(ref.points) + [q for a, b in ref.segments for q in (a, 0.5 * (a + b), b)]
        for x in probes:
            if _claimed_distance(claimed, x) > slack:
                report.enumeration_mismatches.append(f"missing {tuple(round(float(v), 12) for v in x)}")
    return report
