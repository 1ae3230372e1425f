"""Decision spaces, outcome models, utilities and the two game kinds.

Decisions are handled internally as *states*: an integer index for a
discrete space and a float array of shape ``(dim,)`` for a box. Models
and utilities always receive the decision *value* (``space.value``),
i.e. the numeric code of a discrete label or the point in the box
(a plain float when the box is one dimensional).

Outcome samplers share one signature, ``sampler(d, a, generator, size)``,
and return an array whose first axis has length ``size``. Utilities are
vectorised over that axis: ``u(decision, thetas) -> array``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Callable, Sequence

import numpy as np

from .rng import RandomSource, as_source

__all__ = [
    "GameError",
    "DecisionSpace",
    "Support",
    "OutcomeModel",
    "UtilityFunction",
    "CompleteInfoGame",
    "RandomAttackerModel",
    "AraGame",
    "ValidationReport",
    "validate_game",
]


class GameError(ValueError):
    """Invalid game component or a violated solver precondition."""


class DecisionSpace:
    """Finite ordered label set or axis-aligned box.

    Use :meth:`discrete` or :meth:`box` to build one.
    """

    def __init__(self, kind, labels=(), codes=None, lower=None, upper=None):
        self.kind = kind
        if kind == "discrete":
            self.labels = tuple(labels)
            if not self.labels:
                raise GameError("discrete decision space must be nonempty")
            if len(set(self.labels)) != len(self.labels):
                raise GameError("discrete labels must be unique")
            codes = np.arange(len(self.labels)) if codes is None else np.asarray(codes)
            if codes.shape != (len(self.labels),):
                raise GameError("need one numeric code per label")
            self.codes = codes
            self.lower = self.upper = None
        elif kind == "continuous":
            lo = np.atleast_1d(np.asarray(lower, dtype=float))
            hi = np.atleast_1d(np.asarray(upper, dtype=float))
            if lo.shape != hi.shape or lo.ndim != 1:
                raise GameError("box bounds must be 1-D and of equal length")
            if not np.all(lo < hi):
                raise GameError("box needs lower < upper in every coordinate")
            self.lower, self.upper = lo, hi
            self.labels, self.codes = (), None
        else:
            raise GameError(f"unknown decision space kind {kind!r}")

    @classmethod
    def discrete(cls, labels: Sequence[Any], codes: Sequence[float] | None = None):
        """Ordered finite space. Codes default to the labels when numeric."""
        labels = list(labels)
        if codes is None and all(isinstance(x, (int, float, np.integer, np.floating)) for x in labels):
            codes = labels
        return cls("discrete", labels=labels, codes=codes)

    @classmethod
    def box(cls, lower, upper):
        return cls("continuous", lower=lower, upper=upper)

    @property
    def is_discrete(self) -> bool:
        return self.kind == "discrete"

    @property
    def size(self) -> int:
        if not self.is_discrete:
            raise GameError("a continuous space has no cardinality")
        return len(self.labels)

    @property
    def dim(self) -> int:
        return 1 if self.is_discrete else len(self.lower)

    def value(self, state):
        """Decision value handed to models and utilities."""
        if self.is_discrete:
            return self.codes[int(state)].item()
        state = np.asarray(state, dtype=float)
        return float(state[0]) if state.shape == (1,) else state

    def values(self) -> list:
        return [self.value(i) for i in range(self.size)]

    def contains(self, state) -> bool:
        if self.is_discrete:
            return isinstance(state, (int, np.integer)) and 0 <= state < self.size
        x = np.atleast_1d(np.asarray(state, dtype=float))
        return x.shape == self.lower.shape and bool(np.all((x >= self.lower) & (x <= self.upper)))

    def random_state(self, generator: np.random.Generator):
        if self.is_discrete:
            return int(generator.integers(self.size))
        return generator.uniform(self.lower, self.upper)

    def state_of(self, value):
        """Inverse of :meth:`value` for discrete spaces (by code, then label)."""
        if not self.is_discrete:
            return np.atleast_1d(np.asarray(value, dtype=float))
        hits = np.flatnonzero(np.isclose(self.codes.astype(float), float(value), rtol=0, atol=1e-12)) \
            if isinstance(value, (int, float, np.integer, np.floating)) else []
        if len(hits):
            return int(hits[0])
        if value in self.labels:
            return self.labels.index(value)
        raise GameError(f"{value!r} is not in the decision space")

    def __repr__(self):
        if self.is_discrete:
            return f"DecisionSpace.discrete(size={self.size})"
        return f"DecisionSpace.box({self.lower.tolist()}, {self.upper.tolist()})"


@dataclass(frozen=True)
class Support:
    """Outcome support: finite values or a box (bounds may be infinite)."""

    values: tuple | None = None
    lower: float | tuple = -np.inf
    upper: float | tuple = np.inf

    @classmethod
    def discrete(cls, values):
        return cls(values=tuple(values))

    @classmethod
    def box(cls, lower=-np.inf, upper=np.inf):
        return cls(lower=lower, upper=upper)

    @property
    def is_discrete(self) -> bool:
        return self.values is not None

    def contains(self, thetas) -> np.ndarray:
        t = np.asarray(thetas)
        if self.is_discrete:
            return np.isin(t, np.asarray(self.values))
        ok = (t >= np.asarray(self.lower)) & (t <= np.asarray(self.upper))
        return ok.reshape(len(t), -1).all(axis=1) if t.ndim > 1 else ok


@dataclass(frozen=True)
class OutcomeModel:
    """Conditional outcome law p(theta | d, a).

    Parameters
    ----------
    sampler : callable
        ``sampler(d, a, generator, size) -> array`` of ``size`` draws.
    support : Support or callable
        Fixed support, or ``support(d, a)`` when it depends on the decisions.
    prob : callable, optional
        Exact evaluator ``prob(d, a, thetas) -> probabilities``.
    label : str, optional
        Short description used in reports.
    """

    sampler: Callable
    support: Support | Callable = field(default_factory=Support)
    prob: Callable | None = None
    label: str = field(default="", compare=False)

    def sample(self, d, a, rs: RandomSource, size: int = 1) -> np.ndarray:
        rs.count(size)
        return np.asarray(self.sampler(d, a, rs.generator, size))

    def support_at(self, d, a) -> Support:
        return self.support(d, a) if callable(self.support) else self.support

    @property
    def exact(self) -> bool:
        if self.prob is None:
            return False
        return callable(self.support) or self.support.is_discrete

    def enumerate(self, d, a):
        """Support values and exact probabilities at ``(d, a)``."""
        s = self.support_at(d, a)
        if self.prob is None or not s.is_discrete:
            raise GameError("exact enumeration needs a discrete support and a prob evaluator")
        vals = np.asarray(s.values)
        return vals, np.asarray(self.prob(d, a, vals), dtype=float)


@dataclass(frozen=True)
class UtilityFunction:
    """Vectorised utility ``u(decision, thetas)``.

    ``offset`` records a positive affine shift applied to a native
    (possibly negative) utility, so native values are ``u - offset``.
    """

    evaluator: Callable
    positive: bool = True
    offset: float = 0.0
    label: str = field(default="", compare=False)

    def __call__(self, decision, thetas) -> np.ndarray:
        return np.asarray(self.evaluator(decision, thetas), dtype=float)


@dataclass(frozen=True)
class CompleteInfoGame:
    defense_space: DecisionSpace
    attack_space: DecisionSpace
    u_D: UtilityFunction
    u_A: UtilityFunction
    p_D: OutcomeModel
    p_A: OutcomeModel
    name: str = ""


@dataclass(frozen=True)
class RandomAttackerModel:
    """Distribution over attacker (utility, outcome model) pairs.

    ``sampler(generator) -> (UtilityFunction, OutcomeModel)``. Each draw
    is accounted as two samples, one utility and one probability model.
    """

    sampler: Callable
    finite_atoms: tuple | None = None

    def draw(self, rs: RandomSource):
        rs.count(2)
        return self.sampler(rs.generator)

    @classmethod
    def point_mass(cls, u_A: UtilityFunction, p_A: OutcomeModel):
        return cls(sampler=lambda gen: (u_A, p_A), finite_atoms=(((u_A, p_A), 1.0),))


@dataclass(frozen=True)
class AraGame:
    defense_space: DecisionSpace
    attack_space: DecisionSpace
    u_D: UtilityFunction
    p_D: OutcomeModel
    attacker_model: RandomAttackerModel
    name: str = ""


@dataclass
class ValidationReport:
    probes: int
    violations: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def add(self, msg: str):
        if msg not in self.violations:
            self.violations.append(msg)


def _probe_pairs(game, n, gen):
    pairs = []
    for _ in range(n):
        d = game.defense_space.random_state(gen)
        a = game.attack_space.random_state(gen)
        pairs.append((game.defense_space.value(d), game.attack_space.value(a)))
    return pairs


def _check_model(report, model, u, decision_of, pairs, per_pair, gen, who):
    for d, a in pairs:
        th = np.asarray(model.sampler(d, a, gen, per_pair))
        if not np.all(model.support_at(d, a).contains(th)):
            report.add(f"outcome outside support ({who})")
        if u is not None and u.positive:
            vals = u(decision_of(d, a), th)
            if not np.all(np.isfinite(vals)) or np.any(vals <= 0):
                report.add(f"non-positive utility ({who})")


def _check_exact(report, model, space_d, space_a, who):
    if not model.exact or not (space_d.is_discrete and space_a.is_discrete):
        return
    for d in space_d.values():
        for a in space_a.values():
            _, p = model.enumerate(d, a)
            if abs(p.sum() - 1.0) > 1e-9:
                report.add(f"probabilities do not sum to 1 ({who})")
            if np.any(p <= 0):
                report.add(f"non-positive probability on support ({who})")


def validate_game(game, probes: int = 10_000, rs: RandomSource | int | None = None) -> ValidationReport:
    """Probe a game for the preconditions of the APS solvers.

    Violations are collected in the returned report, never raised.
    """
    if probes < 1:
        raise GameError("probes must be >= 1")
    gen = as_source(rs).generator
    report = ValidationReport(probes=probes)
    for sp, nm in ((game.defense_space, "defense"), (game.attack_space, "attack")):
        if sp.is_discrete and sp.size == 0:
            report.add(f"empty space ({nm})")
    n_pairs = min(probes, 64)
    per_pair = -(-probes // n_pairs)

    pairs = _probe_pairs(game, n_pairs, gen)
    _check_model(report, game.p_D, game.u_D, lambda d, a: d, pairs, per_pair, gen, "defender")
    _check_exact(report, game.p_D, game.defense_space, game.attack_space, "defender")

    if isinstance(game, CompleteInfoGame):
        _check_model(report, game.p_A, game.u_A, lambda d, a: a, pairs, per_pair, gen, "attacker")
        _check_exact(report, game.p_A, game.defense_space, game.attack_space, "attacker")
    else:
        n_models = min(probes, 32)
        for _ in range(n_models):
            u_A, p_A = game.attacker_model.sampler(gen)
            _check_model(report, p_A, u_A, lambda d, a: a, _probe_pairs(game, 2, gen),
                         max(1, per_pair // 8), gen, "attacker")
    return report
