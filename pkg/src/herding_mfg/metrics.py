"""Efficiency of equilibria: social utility, PoA/PoS, per-type utilities.

Also holds the closed-form comparison between the three-route and two-route
networks and the (alpha, rho) sweep over it.
"""
from __future__ import annotations

import csv
from dataclasses import dataclass, field

import numpy as np

from .alpharne import HerdingPolicy, AlphaRNE, alpha_rne_set, check_alpha, records
from .classical import EqPoint, EquilibriumSet, Family, is_classical_equilibrium, social_optimum, social_value
from .errors import UndefinedRatio
from .game import GameSpec, braess2, braess3
from .measures import EPS, check_tol, make_measure

BREAKPOINT_TOL = 1e-9


def social_utility(g: GameSpec, mu) -> float:
    return social_value(g, mu)


def family_range(g: GameSpec, f: Family) -> tuple[float, float]:
    """Exact min and max of the quadratic social utility along a family segment."""
    base = np.asarray(f.base)
    d = np.asarray(f.direction)
    a2 = float(d @ g.M @ d)
    a1 = float(g.b @ d + base @ (g.M + g.M.T) @ d)
    ts = [f.t_lo, f.t_hi]
    if abs(a2) > 1e-15:
        t = -a1 / (2 * a2)
        if f.t_lo < t < f.t_hi:
            ts.append(t)
    vals = [social_value(g, f.at(t)) for t in ts]
    return min(vals), max(vals)


def value_range(g: GameSpec, eqs: EquilibriumSet) -> tuple[float, float]:
    vals = [social_value(g, p.mu) for p in eqs.points]
    for f in eqs.families:
        vals.extend(family_range(g, f))
    if not vals:
        raise ValueError("equilibrium set is empty")
    return min(vals), max(vals)


def ratios(lo: float, hi: float, u_star: float, tol: float = EPS) -> tuple[float, float]:
    if abs(u_star) <= tol:
        raise UndefinedRatio(f"social optimum {u_star!r} is zero; PoA/PoS undefined")
    return lo / u_star, hi / u_star


def poa_pos(g: GameSpec, alpha: float, policy: HerdingPolicy = HerdingPolicy.DECLARED,
            tol: float = EPS) -> tuple[float, float]:
    """Worst and best equilibrium social utility, each over the social optimum.

    Plain ratios give values >= 1 for cost games (negative optimum) and <= 1
    for payoff games.
    """
    eqs = alpha_rne_set(g, alpha, policy, tol)
    lo, hi = value_range(g, eqs)
    return ratios(lo, hi, social_optimum(g, tol).value, tol)


def per_type_utilities(g: GameSpec, eq: AlphaRNE) -> tuple[float, float]:
    """``(u_R, u_I)``: a rational player's best-response utility and the herders' utility."""
    u = g.payoffs(eq.mu)
    u_r = float(u.max())
    u_i = u_r if eq.herding_action is None else float(u[eq.herding_action])
    return u_r, u_i


# -- utility bound checks ---------------------------------------------------------------

@dataclass
class Theorem2Entry:
    mu: tuple[float, ...]
    herding_action: int | None
    u_R: float
    u_I: float
    in_classical: bool
    claims: dict


@dataclass
class Theorem2Report:
    u_s_star: float
    entries: list[Theorem2Entry] = field(default_factory=list)

    @property
    def violations(self) -> list[str]:
        out = []
        for e in self.entries:
            for name, ok in e.claims.items():
                if not ok:
                    out.append(f"{name} fails at mu={e.mu}, k={e.herding_action}")
        return out

    @property
    def ok(self) -> bool:
        return not self.violations


def _samples(g, eqs: EquilibriumSet, alpha, policy, tol):
    recs = records(g, eqs, alpha, policy, tol)
    for f in eqs.families:
        for t in (f.t_lo, 0.5 * (f.t_lo + f.t_hi), f.t_hi):
            mu = make_measure(f.at(t), tol)
            recs.extend(records(g, EquilibriumSet((EqPoint(mu, f.herding),)), alpha, policy, tol))
    return recs


def theorem2_check(g: GameSpec, alpha: float, policy: HerdingPolicy = HerdingPolicy.DECLARED,
                   tol: float = EPS, eqs: EquilibriumSet | None = None) -> Theorem2Report:
    """Herders never beat rationals, nor the optimum; in classical equilibria they tie."""
    alpha = check_alpha(alpha)
    tol = check_tol(tol)
    eqs = eqs if eqs is not None else alpha_rne_set(g, alpha, policy, tol)
    u_star = social_optimum(g, tol).value
    report = Theorem2Report(u_star)
    for rec in _samples(g, eqs, alpha, policy, tol):
        u_r, u_i = per_type_utilities(g, rec)
        classical = is_classical_equilibrium(g, rec.mu, tol)
        claims = {"u_I <= u_R": u_i <= u_r + tol, "u_I <= u_s_star": u_i <= u_star + tol}
        if classical:
            claims["u_R == u_I"] = abs(u_r - u_i) <= tol
            claims["u_s_star >= u_R"] = u_star >= u_r - tol
        report.entries.append(Theorem2Entry(rec.mu.weights, rec.herding_action, u_r, u_i, classical, claims))
    return report


# -- full report ----------------------------------------------------------------------

@dataclass
class MetricsReport:
    alpha: float
    policy: str
    u_s_star: float
    optimum: tuple[float, ...]
    social_values: list[float]
    family_ranges: list[tuple[float, float]]
    poa: float
    pos: float
    per_eq: list[Theorem2Entry]
    theorem2_ok: dict


def build_metrics(g: GameSpec, alpha: float, policy: HerdingPolicy = HerdingPolicy.DECLARED,
                  tol: float = EPS) -> MetricsReport:
    alpha = check_alpha(alpha)
    policy = HerdingPolicy(policy)
    eqs = alpha_rne_set(g, alpha, policy, tol)
    opt = social_optimum(g, tol)
    lo, hi = value_range(g, eqs)
    poa, pos = ratios(lo, hi, opt.value, tol)
    t2 = theorem2_check(g, alpha, policy, tol, eqs)
    verdicts: dict[str, bool] = {}
    for e in t2.entries:
        for name, ok in e.claims.items():
            verdicts[name] = verdicts.get(name, True) and ok
    return MetricsReport(alpha, policy.value, opt.value, opt.argmax.weights,
                         [social_value(g, p.mu) for p in eqs.points],
                         [family_range(g, f) for f in eqs.families],
                         poa, pos, t2.entries, verdicts)


# -- two-route versus three-route comparison ----------------------------------------------

@dataclass(frozen=True)
class BraessComparison:
    alpha: float
    rho: float
    g_b: float
    g_w: float
    alpha_bar: float
    pieces: tuple[str, str]


def _check_rho(rho):
    rho = float(rho)
    if not 0 < rho < 1:
        raise ValueError(f"rho must lie in (0, 1), got {rho!r}")
    return rho


def braess_comparison(alpha: float, rho: float) -> BraessComparison:
    """Closed-form best/worst equilibrium gaps (three routes minus two routes).

    The piecewise forms assume ``rho > 2/3``, where ``alpha_bar < 1/2``.
    """
    a = check_alpha(alpha)
    r = _check_rho(rho)
    abar = (1 - r) / r
    if a < abar:
        gb, pb = 1 - r - 2 * r * a + 2 * r * a * a, "(0, alpha_bar)"
    elif a <= 0.5:
        gb, pb = r * a * a - 2 * r * a + a, "[alpha_bar, 1/2]"
    elif a <= 2 / 3:
        gb, pb = -r * a * a - r / 2 + a, "(1/2, 2/3]"
    else:
        gb, pb = 1 - 1.5 * r, "(2/3, 1]"
    if a < abar:
        gw, pw = r * a * a + a - 2 * r * a, "(0, alpha_bar)"
    elif a <= 0.5:
        gw, pw = 1 - r - 2 * r * a + 2 * r * a * a, "[alpha_bar, 1/2]"
    else:
        gw, pw = 1 - 1.5 * r, "(1/2, 1]"
    return BraessComparison(a, r, gb, gw, abar, (pb, pw))


def braess_building_blocks(alpha: float, rho: float) -> dict[str, float]:
    """Best and worst three-route values and the two-route value, in closed form."""
    a = check_alpha(alpha)
    r = _check_rho(rho)
    abar = (1 - r) / r
    mixed = -r * a * a - r + a - 1
    best3 = -2 * r if (a < abar or a > 2 / 3) else mixed
    worst3 = mixed if a < abar else -2 * r
    two = -1 - r + 2 * r * a - 2 * r * a * a if a <= 0.5 else -1 - r / 2
    return {"u_b3": best3, "u_w3": worst3, "u_2": two}


def enumerated_gaps(alpha: float, rho: float, policy: HerdingPolicy = HerdingPolicy.DECLARED,
                    tol: float = EPS) -> tuple[float, float]:
    """``(g_b, g_w)`` from the enumerated equilibrium sets of both networks."""
    lo3, hi3 = value_range(braess3(rho), alpha_rne_set(braess3(rho), alpha, policy, tol))
    lo2, hi2 = value_range(braess2(rho), alpha_rne_set(braess2(rho), alpha, policy, tol))
    return hi3 - hi2, lo3 - hi2


# -- sweep ------------------------------------------------------------------------------

def parse_range(text: str) -> tuple[float, float, int]:
    """Parse ``lo:hi:count`` (count defaults to 50)."""
    parts = text.split(":")
    if len(parts) not in (2, 3):
        raise ValueError(f"range {text!r} is not of the form lo:hi[:count]")
    lo, hi = float(parts[0]), float(parts[1])
    count = int(parts[2]) if len(parts) == 3 else 50
    if not lo < hi or count < 1:
        raise ValueError(f"range {text!r} needs lo < hi and count >= 1")
    return lo, hi, count


def cell_centers(lo: float, hi: float, count: int) -> np.ndarray:
    """Midpoints of ``count`` equal half-open cells covering ``[lo, hi)``."""
    return lo + (np.arange(count) + 0.5) * (hi - lo) / count


@dataclass(frozen=True)
class SweepRow:
    alpha: float
    rho: float
    g_b: float
    g_w: float
    sign_b: str
    poa: float
    pos: float
    g_b_enum: float
    g_w_enum: float


def _sign(alpha, comp: BraessComparison, tol) -> str:
    marks = (comp.alpha_bar, 0.5, 2 / 3)
    if any(abs(alpha - m) <= BREAKPOINT_TOL for m in marks) or abs(comp.g_b) <= tol:
        return "boundary"
    return "paradox" if comp.g_b < 0 else "improvement"


def sweep_cell(alpha: float, rho: float, policy: HerdingPolicy = HerdingPolicy.DECLARED,
               tol: float = EPS) -> SweepRow:
    comp = braess_comparison(alpha, rho)
    g3 = braess3(rho)
    lo3, hi3 = value_range(g3, alpha_rne_set(g3, alpha, policy, tol))
    g2 = braess2(rho)
    _, hi2 = value_range(g2, alpha_rne_set(g2, alpha, policy, tol))
    poa, pos = ratios(lo3, hi3, social_optimum(g3, tol).value, tol)
    return SweepRow(float(alpha), float(rho), comp.g_b, comp.g_w, _sign(alpha, comp, tol),
                    poa, pos, hi3 - hi2, lo3 - hi2)


def sweep(alpha_range: tuple[float, float, int], rho_range: tuple[float, float, int],
          policy: HerdingPolicy = HerdingPolicy.DECLARED, tol: float = EPS) -> list[SweepRow]:
    """Row-major (alpha outer, rho inner) sweep over cell midpoints."""
    a_lo, a_hi, _ = alpha_range
    r_lo, r_hi, _ = rho_range
    if not (0 <= a_lo and a_hi <= 1 and 0 <= r_lo and r_hi <= 1):
        raise ValueError("sweep ranges must lie inside [0, 1]")
    return [sweep_cell(a, r, policy, tol)
            for a in cell_centers(*alpha_range) for r in cell_centers(*rho_range)]


SWEEP_HEADER = ("alpha", "rho", "g_b", "g_w", "sign_b", "poa", "pos")


def fmt(x: float) -> str:
    return f"{x:.12g}"


def write_sweep_csv(rows, fh) -> None:
    w = csv.writer(fh, lineterminator="\n")
    w.writerow(SWEEP_HEADER)
    for r in rows:
        w.writerow([fmt(r.alpha), fmt(r.rho), fmt(r.g_b), fmt(r.g_w), r.sign_b, fmt(r.poa), fmt(r.pos)])
