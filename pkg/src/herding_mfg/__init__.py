"""Exact equilibrium solver for finite-action mean-field games with herding."""
from .alpharne import (AlphaRNE, HerdingPolicy, alpha_rne_set, herding_choice_set, is_alpha_rne,
                       rational_measure, theorem_one_sets)
from .classical import EquilibriumSet, classical_equilibria, social_optimum
from .errors import (DegenerateGame, EmptyHerdingSet, GameSchemaError, HerdingMassTooSmall, IllPosed,
                     NotASimplexPoint, SolverError, UndefinedRatio)
from .game import GameSpec, bandwidth, braess2, braess3, builtin, parse_game, product, serialize_game
from .influence import Objective, design_influence, lower_level_equilibrium, well_posed
from .measures import EPS, Measure, herding_choice, make_measure, support
from .metrics import braess_comparison, build_metrics, per_type_utilities, poa_pos, social_utility, sweep
from .oracle import grid_scan, verify_set
from .predict import is_dominated, iterated_prediction

__all__ = [
    "AlphaRNE", "HerdingPolicy", "alpha_rne_set", "herding_choice_set", "is_alpha_rne", "rational_measure",
    "theorem_one_sets", "EquilibriumSet", "classical_equilibria", "social_optimum", "DegenerateGame",
    "EmptyHerdingSet", "GameSchemaError", "HerdingMassTooSmall", "IllPosed", "NotASimplexPoint",
    "SolverError", "UndefinedRatio", "GameSpec", "bandwidth", "braess2", "braess3", "builtin", "parse_game",
    "product", "serialize_game", "Objective", "design_influence", "lower_level_equilibrium", "well_posed",
    "EPS", "Measure", "herding_choice", "make_measure", "support", "braess_comparison", "build_metrics",
    "per_type_utilities", "poa_pos", "social_utility", "sweep", "grid_scan", "verify_set", "is_dominated",
    "iterated_prediction",
]
