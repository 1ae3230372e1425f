"""Simulation-based solvers for two-stage defend-attack games.

Monte Carlo, Metropolis-Hastings and Gibbs augmented probability
simulation (APS) for complete-information games and adversarial risk
analysis (ARA), with power/annealed variants, diagnostics and a catalog
of ready-built games.
"""

from .aps import (AnnealSchedule, ApsConfig, ApsSolution, ChainTrace, PositivityError, anneal_schedule,
                  attack_distribution_aps, inner_aps_attack, mh_acceptance, sample_attack, solve_ara_aps,
                  solve_complete_aps)
from .diagnostics import bgr_statistic, estimate_mode_continuous, estimate_mode_discrete
from .game import (AraGame, CompleteInfoGame, DecisionSpace, GameError, OutcomeModel, RandomAttackerModel,
                   Support, UtilityFunction, validate_game)
from .mc import (McConfig, McSolution, attack_distribution_mc, estimate_attacker_eu, estimate_sample_size,
                 solve_ara_mc, solve_complete_mc)
from .rng import RandomSource

__version__ = "0.1.0"
