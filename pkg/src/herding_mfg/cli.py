"""Command-line front end.

Exit codes: 0 success, 2 usage or validation error, 3 solver failure,
4 oracle disagreement.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from pathlib import Path

from . import alpharne, influence, metrics, oracle, predict
from .errors import GameSchemaError, SolverError
from .game import GameSpec, builtin, parse_game
from .measures import EPS

EXIT_OK, EXIT_USAGE, EXIT_SOLVER, EXIT_DISAGREE = 0, 2, 3, 4

POLICY_HELP = (
    "herding-consistency rule (default: declared). 'strict' lets herders sit only on the "
    "smallest-index majority action of the population. 'declared' also accepts any action tied "
    "for the majority, and an action holding exactly the herders' own mass 1-alpha when "
    "alpha <= 1-1/n. The two differ for alpha in (1/2, 1-1/n], where only 'declared' recovers "
    "the asymmetric three-route and bandwidth equilibria.")


class UsageError(Exception):
    pass


def num(x: float) -> float:
    """12 significant digits, with negative zero folded to zero."""
    v = float(f"{x:.12g}")
    return 0.0 if v == 0 else v


def vec(xs) -> list[float]:
    return [num(x) for x in xs]


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="herding-mfg",
        description="Exact equilibria of finite-action mean-field games with rational and herding players.")
    sub = p.add_subparsers(dest="command", required=True, metavar="COMMAND")

    def common(sp, alpha=True, alpha_help="fraction of rational players, in (0, 1]"):
        src = sp.add_mutually_exclusive_group(required=True)
        src.add_argument("--game", choices=["braess2", "braess3", "bandwidth", "product", "braess-compare"],
                         help="built-in game")
        src.add_argument("--game-file", type=Path, help="JSON game document")
        sp.add_argument("--rho", help="congestion coefficient for the route games (default 0.5); "
                                      "a lo:hi:count range for sweep")
        sp.add_argument("--n", type=int, help="number of levels for bandwidth (default 3)")
        sp.add_argument("--constants", help="c1,c2,c3 for product (default 3,2,1)")
        if alpha:
            sp.add_argument("--alpha", required=True, help=alpha_help)
        sp.add_argument("--policy", choices=["declared", "strict"], default="declared", help=POLICY_HELP)
        sp.add_argument("--tol", type=float, default=EPS, help="absolute tolerance (default 1e-9)")
        sp.add_argument("--format", choices=["json", "table", "csv"], default="json")
        sp.add_argument("--out", type=Path, help="write output here instead of stdout")
        return sp

    common(sub.add_parser("solve", help="equilibria at a given rational fraction"))
    common(sub.add_parser("classical", help="equilibria with all players rational"), alpha=False)
    common(sub.add_parser("metrics", help="social optimum, PoA/PoS and per-type utilities"))
    common(sub.add_parser("herding-set", help="actions that can host the herders"))
    common(sub.add_parser("predict", help="iterated elimination of dominated actions"))
    sp = common(sub.add_parser("influence", help="best herding target for a designer"))
    obj = sp.add_mutually_exclusive_group(required=True)
    obj.add_argument("--weights", help="comma-separated adoption weights, one per action")
    obj.add_argument("--objective", choices=["social"], help="maximize social utility instead")
    sp = common(sub.add_parser("sweep", help="two-route vs three-route comparison over an (alpha, rho) grid"),
                alpha_help="alpha range lo:hi:count")
    sp.set_defaults(format="csv")
    sp = common(sub.add_parser("verify", help="check the solver against the brute-force oracle"))
    sp.add_argument("--grid", type=int, default=100, help="grid resolution, at least 50 (default 100)")
    return p


def _floats(text: str, what: str) -> list[float]:
    try:
        return [float(x) for x in text.split(",")]
    except ValueError:
        raise UsageError(f"{what} must be comma-separated numbers, got {text!r}") from None


def load_game(args) -> GameSpec:
    if args.game_file is not None:
        try:
            text = args.game_file.read_text()
        except OSError as exc:
            raise UsageError(f"cannot read {args.game_file}: {exc}") from None
        return parse_game(text)
    if args.game == "braess-compare":
        raise UsageError("--game braess-compare is only valid with the sweep command")
    constants = _floats(args.constants, "--constants") if args.constants else None
    rho = None
    if args.rho is not None:
        rho = _floats(args.rho, "--rho")
        if len(rho) != 1:
            raise UsageError(f"--rho must be a single number, got {args.rho!r}")
        rho = rho[0]
    return builtin(args.game, rho=rho, n=args.n, constants=constants)


def _alpha(args) -> float:
    try:
        return alpharne.check_alpha(float(args.alpha))
    except ValueError:
        raise UsageError(f"--alpha must be a number in (0, 1], got {args.alpha!r}") from None


def _label(g, k):
    return {"action": k + 1, "label": g.labels[k]}


def _eq_doc(g, eqs, alpha, tol):
    pts = []
    for p in eqs.points:
        entry = {"mu": vec(p.mu.weights), "herding": []}
        for k in p.herding:
            mu_r = alpharne.rational_measure(p.mu, k, alpha, tol)
            entry["herding"].append({**_label(g, k), "mu_R": vec(mu_r.weights)})
        pts.append(entry)
    fams = [{"start": vec(f.at(f.t_lo)), "end": vec(f.at(f.t_hi)),
             "herding": [_label(g, k) for k in f.herding]} for f in eqs.families]
    return pts, fams


def _header(g, args, alpha=None):
    doc = {"command": args.command, "game": {"name": g.name, "actions": list(g.labels)}}
    if alpha is not None:
        doc["alpha"] = num(alpha)
        doc["policy"] = args.policy
    return doc


def cmd_solve(args, g):
    alpha = _alpha(args) if args.command == "solve" else 1.0
    eqs = alpharne.alpha_rne_set(g, alpha, args.policy, args.tol)
    doc = _header(g, args, alpha if args.command == "solve" else None)
    doc["equilibria"], doc["families"] = _eq_doc(g, eqs, alpha, args.tol)
    return doc, EXIT_OK


def cmd_metrics(args, g):
    alpha = _alpha(args)
    rep = metrics.build_metrics(g, alpha, args.policy, args.tol)
    doc = _header(g, args, alpha)
    doc.update({
        "u_s_star": num(rep.u_s_star), "optimum": vec(rep.optimum),
        "poa": num(rep.poa), "pos": num(rep.pos),
        "social_values": vec(rep.social_values),
        "family_ranges": [vec(r) for r in rep.family_ranges],
        "per_equilibrium": [
            {"mu": vec(e.mu), "herding": None if e.herding_action is None else _label(g, e.herding_action),
             "u_R": num(e.u_R), "u_I": num(e.u_I), "classical": e.in_classical}
            for e in rep.per_eq],
        "theorem2": rep.theorem2_ok,
    })
    return doc, EXIT_OK


def cmd_herding_set(args, g):
    alpha = _alpha(args)
    H = alpharne.herding_choice_set(g, alpha, args.policy, args.tol)
    doc = _header(g, args, alpha)
    doc["herding_set"] = [_label(g, k) for k in sorted(H)]
    return doc, EXIT_OK


def cmd_predict(args, g):
    alpha = _alpha(args)
    res = predict.iterated_prediction(g, alpha, args.policy, args.tol)
    doc = _header(g, args, alpha)
    doc["herding_set"] = [_label(g, k) for k in sorted(res.herding_set)]
    doc["trace"] = [{"round": r, "eliminated": _label(g, i), "dominated_by": _label(g, j)}
                    for r, i, j in res.trace]
    doc["surviving"] = [_label(g, k) for k in sorted(res.surviving)]
    u = res.unique_prediction
    doc["prediction"] = None if u is None else _label(g, u)
    return doc, EXIT_OK


def cmd_influence(args, g):
    alpha = _alpha(args)
    if args.objective == "social":
        objective = influence.Objective("social")
    else:
        w = _floats(args.weights, "--weights")
        if len(w) != g.n:
            raise UsageError(f"--weights needs {g.n} values, got {len(w)}")
        objective = influence.Objective("adoption", tuple(w))
    sol = influence.design_influence(g, alpha, objective, args.policy, args.tol)
    doc = _header(g, args, alpha)
    doc.update({
        "i_H_star": _label(g, sol.i_H_star), "nu_star": vec(sol.nu_star.weights),
        "mu_R_star": vec(sol.mu_R_star.weights), "mu_star": vec(sol.mu_star.weights),
        "f_star": num(sol.f_star),
        "values": [{**_label(g, h), "f": num(v)} for h, v in sorted(sol.values.items())],
    })
    return doc, EXIT_OK


def cmd_verify(args, g):
    alpha = _alpha(args)
    claimed = alpharne.alpha_rne_set(g, alpha, args.policy, args.tol)
    rep = oracle.verify_set(g, alpha, args.policy, claimed, G=args.grid, tol=args.tol)
    doc = _header(g, args, alpha)
    doc.update({
        "agreement": rep.agreement,
        "membership_failures": rep.membership_failures,
        "completeness_suspects": [vec(x) for x in rep.completeness_suspects],
        "enumeration_mismatches": rep.enumeration_mismatches,
    })
    return doc, EXIT_OK if rep.agreement else EXIT_DISAGREE


def run_sweep(args) -> tuple[str, int]:
    if args.game != "braess-compare":
        raise UsageError("sweep requires --game braess-compare")
    try:
        a_rng = metrics.parse_range(args.alpha)
        r_rng = metrics.parse_range(args.rho or "0.667:1:50")
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    if a_rng[0] < 0 or a_rng[1] > 1 or r_rng[0] < 0 or r_rng[1] > 1:
        raise UsageError("sweep ranges must lie inside [0, 1]")
    rows = metrics.sweep(a_rng, r_rng, args.policy, args.tol)
    if args.format == "json":
        doc = {"command": "sweep", "policy": args.policy,
               "rows": [{"alpha": num(r.alpha), "rho": num(r.rho), "g_b": num(r.g_b), "g_w": num(r.g_w),
                         "sign_b": r.sign_b, "poa": num(r.poa), "pos": num(r.pos)} for r in rows]}
        return json.dumps(doc, indent=2) + "\n", EXIT_OK
    buf = io.StringIO()
    metrics.write_sweep_csv(rows, buf)
    return buf.getvalue(), EXIT_OK


COMMANDS = {
    "solve": cmd_solve, "classical": cmd_solve, "metrics": cmd_metrics, "herding-set": cmd_herding_set,
    "predict": cmd_predict, "influence": cmd_influence, "verify": cmd_verify,
}


# -- text renderings ------------------------------------------------------------------

def _table(doc) -> str:
    lines = []
    for key, val in doc.items():
        if isinstance(val, list) and val and isinstance(val[0], dict):
            lines.append(f"{key}:")
            for item in val:
                lines.append("  " + "  ".join(f"{k}={_plain(v)}" for k, v in item.items()))
        else:
            lines.append(f"{key}: {_plain(val)}")
    return "\n".join(lines) + "\n"


def _plain(v):
    if isinstance(v, dict):
        if "label" in v and "action" in v and len(v) == 2:
            return v["label"]
        return "{" + ", ".join(f"{k}: {_plain(x)}" for k, x in v.items()) + "}"
    if isinstance(v, list):
        return "[" + ", ".join(str(_plain(x)) for x in v) + "]"
    return v


def _csv(doc) -> str:
    if "equilibria" not in doc:
        raise UsageError("csv output is only available for solve, classical and sweep")
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow([f"mu_{a}" for a in doc["game"]["actions"]] + ["herding"])
    for e in doc["equilibria"]:
        w.writerow([f"{x:.12g}" for x in e["mu"]] + [" ".join(h["label"] for h in e["herding"])])
    for f in doc["families"]:
        w.writerow([f"{a:.12g}..{b:.12g}" for a, b in zip(f["start"], f["end"])]
                   + [" ".join(h["label"] for h in f["herding"])])
    return buf.getvalue()


def render(doc, fmt: str) -> str:
    if fmt == "json":
        return json.dumps(doc, indent=2) + "\n"
    if fmt == "table":
        return _table(doc)
    return _csv(doc)


def run(argv=None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        if args.command == "sweep":
            text, code = run_sweep(args)
        else:
            g = load_game(args)
            doc, code = COMMANDS[args.command](args, g)
            text = render(doc, args.format)
    except (UsageError, GameSchemaError, ValueError) as exc:
        print(f"error: {exc}", file=stderr)
        return EXIT_USAGE
    except (SolverError, oracle.OracleError) as exc:
        print(f"solver error: {type(exc).__name__}: {exc}", file=stderr)
        return EXIT_SOLVER
    if args.out is not None:
        args.out.write_text(text)
    else:
        stdout.write(text)
    return code


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
