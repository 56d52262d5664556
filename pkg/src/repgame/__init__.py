"""Two-state zero-sum repeated game with a switching hidden state.

Player 1 sees the state, Player 2 sees only past actions.  The package
computes the value of the ladder strategy, Player 2's best response and its
optimality checks, pressure certificates for the belief dynamics, a
perturbation comparison, and a Monte-Carlo simulator.
"""

from .beliefs import GameParameter, alpha, orbit, orbit_points, phi, psi
from .errors import (ConvergenceError, DivergenceError, DomainError, InconclusiveError,
                     NoContractionError, RangeError, RepgameError, UnsupportedModeError)
from .perturbation import PerturbationConfig, lemma_margin, perturbed_value
from .precision import Precision
from .pressure import (certify_auto, certify_nine_interval_a, certify_nine_interval_b,
                       certify_range, certify_three_interval)
from .response import solve_response
from .sigma_star import p_star, value_ladder, value_matrix
from .spectral import spectral_radius

__version__ = "0.1.0"

__all__ = [
    "GameParameter", "Precision", "alpha", "orbit", "orbit_points", "phi", "psi",
    "value_ladder", "value_matrix", "p_star", "solve_response", "spectral_radius",
    "certify_three_interval", "certify_nine_interval_a", "certify_nine_interval_b",
    "certify_auto", "certify_range", "PerturbationConfig", "lemma_margin", "perturbed_value",
    "RepgameError", "DomainError", "DivergenceError", "UnsupportedModeError",
    "NoContractionError", "RangeError", "ConvergenceError", "InconclusiveError",
]
