"""Ready-built games, perturbation classes and the exact oracle.

Games are addressable by name through :func:`get_game`; names of the
form ``resource-grid-<precision>`` discretise the resource game.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

from ..game import GameError
from .ddos import ddos_game
from .oracle import (CapabilityError, ExactSolution, brute_force_solve, expected_utility_tables,
                     grid_discretize, power_marginal)
from .resource import check_monotonicity, resource_game
from .toy import (build_toy_perturbation_classes, toy_ara_attack_probability, toy_ara_defender_eu,
                  toy_cyber_ara_game, toy_cyber_game)

__all__ = [
    "CapabilityError", "ExactSolution", "brute_force_solve", "expected_utility_tables",
    "grid_discretize", "power_marginal", "ddos_game", "resource_game", "check_monotonicity",
    "toy_cyber_game", "toy_cyber_ara_game", "build_toy_perturbation_classes",
    "toy_ara_attack_probability", "toy_ara_defender_eu", "CatalogEntry", "CATALOG", "get_game",
    "list_games",
]


@dataclass(frozen=True)
class CatalogEntry:
    name: str
    builder: Callable
    info: str
    params: dict
    description: str


CATALOG = {
    "toy-cyber": CatalogEntry("toy-cyber", toy_cyber_game, "complete", {"e": 1.0, "shift": 21.0},
                              "ten protection levels, attack or not, binary breach"),
    "toy-cyber-ara": CatalogEntry("toy-cyber-ara", toy_cyber_ara_game, "ara",
                                  {"beta_scale": 1.0, "shift": 21.0},
                                  "toy game with Beta success beliefs and e ~ U(0, 2)"),
    "resource": CatalogEntry("resource", resource_game, "complete",
                             {"s": 10.0, "c": 1.0, "e": 1.0, "h": 0.5, "k": 0.5},
                             "resource investment on [0, 1] x [0, 1]"),
    "ddos": CatalogEntry("ddos", ddos_game, "ara", {"cost_base": 300.0, "cost_per_gbps": 12.0},
                         "cloud DDoS protection (gbps) against attack days"),
}


def _grid_precision(name: str) -> float | None:
    prefix = "resource-grid-"
    if not name.startswith(prefix):
        return None
    try:
        return float(name[len(prefix):])
    except ValueError:
        raise GameError(f"bad grid precision in {name!r}") from None


def get_game(name: str, **overrides):
    """Build a catalog game; ``overrides`` replace its default parameters."""
    prec = _grid_precision(name)
    entry = CATALOG["resource"] if prec is not None else CATALOG.get(name)
    if entry is None:
        raise GameError(f"unknown game {name!r}; known: {', '.join(sorted(CATALOG))}, resource-grid-<p>")
    unknown = set(overrides) - set(entry.params)
    if unknown:
        raise GameError(f"unknown parameters for {name}: {sorted(unknown)}")
    params = {**entry.params, **overrides}
    if prec is not None:
        params["precision"] = prec
    return entry.builder(**params)


def _size(space):
    return space.size if space.is_discrete else "continuous"


def list_games() -> list[dict]:
    out = []
    for entry in CATALOG.values():
        g = entry.builder(**entry.params)
        out.append({"name": entry.name, "info": entry.info, "defenses": _size(g.defense_space),
                    "attacks": _size(g.attack_space), "params": entry.params,
                    "description": entry.description})
    out.append({"name": "resource-grid-<p>", "info": "complete", "defenses": "1/p + 1",
                "attacks": "1/p + 1", "params": CATALOG["resource"].params,
                "description": "resource game on a lattice of step p"})
    return out
