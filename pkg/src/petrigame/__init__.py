"""Synthesis for Petri games with a single system player."""

from .game import BadSpec, GameError, NotOneSystemPlayer, PetriGame, ValidationReport, validate
from .graphgame import PLAIN, PRIMED, BadClass, GameVertex, solve_explicit
from .io import ParseError, export_dot, parse, read_game, serialize
from .multiset import Multiset
from .net import BoundExceeded, NetError, PetriNet, explore
from .reductions import builtin_examples, gen_3sat, gen_g5, solve_g5_tiny
from .sat import Cnf, sat_solve, two_sat
from .solver import Verdict, build_cnf, decide, decide_twosat
from .strategy import CommitmentStrategy, CounterexamplePlay, validate_strategy
from .unfolding import AxiomViolation, UnfoldingPrefix, check_axioms, lkc, unfold

__version__ = "0.1.0"

__all__ = [
    "AxiomViolation", "BadClass", "BadSpec", "BoundExceeded", "Cnf", "CommitmentStrategy",
    "CounterexamplePlay", "GameError", "GameVertex", "Multiset", "NetError", "NotOneSystemPlayer",
    "PLAIN", "PRIMED", "ParseError", "PetriGame", "PetriNet", "UnfoldingPrefix", "ValidationReport",
    "Verdict", "build_cnf", "builtin_examples", "check_axioms", "decide", "decide_twosat", "explore",
    "export_dot", "gen_3sat", "gen_g5", "lkc", "parse", "read_game", "sat_solve", "serialize",
    "solve_explicit", "solve_g5_tiny", "two_sat", "unfold", "validate", "validate_strategy",
]
