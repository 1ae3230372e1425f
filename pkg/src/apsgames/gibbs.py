"""Gibbs-sampling APS for games with full-conditional samplers.

The conditionals are organised in *slices*: a slice fixes everything the
augmented law conditions on from outside the sweep (the defense for the
attacker stage, the best-response map or the attack forecast for the
defender stage) and exposes the conditional draws of the sweep itself.

With power ``H`` a sweep carries ``H`` outcome copies; they are
conditionally independent given the decision, and the decision given the
copies is proportional to the product of the per-copy weights, so the
decision marginal is the ``H``-th power of the expected utility.

Draw accounting: ``H`` units per block of outcome copies and one per
decision draw; attacker-model draws count two. Initial states are free.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .aps import AnnealSchedule, ApsSolution, ChainTrace, _as_schedule, _check_valid
from .diagnostics import estimate_mode_discrete
from .game import AraGame, CompleteInfoGame, GameError
from .rng import RandomSource, as_source

__all__ = ["FullConditionals", "EnumerationSlice", "enumeration_conditionals",
           "solve_complete_gibbs", "solve_ara_gibbs", "attack_distribution_gibbs"]


def _draw_index(logw, gen: np.random.Generator) -> int:
    """One categorical draw from unnormalised log weights (``-inf`` allowed)."""
    w = np.exp(logw - np.max(logw))
    c = np.cumsum(w)
    return int(np.searchsorted(c, gen.random() * c[-1], side="right"))


class EnumerationSlice:
    """Conditionals of ``pi(x, theta) ~ W[x, theta]`` built from a finite weight table.

    ``logw`` has shape ``(n_x, n_theta)``; ``-inf`` marks outcomes outside
    the support at that decision. Copies of theta are independent given
    ``x`` and ``x`` given the copies weighs by the product over copies.
    """

    def __init__(self, logw: np.ndarray, thetas: np.ndarray, logu: np.ndarray | None = None):
        self.logw = logw
        self.thetas = thetas
        self.logu = logu
        w = np.exp(logw - logw.max(axis=1, keepdims=True))
        self._row_cdf = np.cumsum(w, axis=1)
        self._row_cdf /= self._row_cdf[:, -1:]
        with np.errstate(invalid="ignore"):
            wc = np.exp(logw - logw.max(axis=0, keepdims=True))
        wc = np.nan_to_num(wc)
        self._col_cdf = np.cumsum(wc, axis=0)

    def theta(self, x: int, gen, size: int) -> np.ndarray:
        return np.searchsorted(self._row_cdf[x], gen.random(size), side="right")

    def decision(self, theta_idx, gen) -> int:
        if len(theta_idx) == 1:
            c = self._col_cdf[:, theta_idx[0]]
            return int(np.searchsorted(c, gen.random() * c[-1], side="right"))
        return _draw_index(self.logw[:, theta_idx].sum(axis=1), gen)


class _AraDefenderSlice:
    """Three-block conditionals of ``u_D(d, theta) p_D(theta | d, a) p(a | d)``."""

    def __init__(self, logw: np.ndarray, thetas: np.ndarray, logu: np.ndarray):
        self.logw, self.thetas, self.logu = logw, thetas, logu   # logw: (d, a, theta)

    def theta(self, d: int, attacks, gen) -> np.ndarray:
        return np.array([_draw_index(self.logw[d, a], gen) for a in attacks], dtype=np.int64)

    def attack(self, d: int, theta_idx, gen) -> np.ndarray:
        return np.array([_draw_index(self.logw[d, :, t], gen) for t in theta_idx], dtype=np.int64)

    def decision(self, attacks, theta_idx, gen) -> int:
        return _draw_index(self.logw[:, attacks, theta_idx].sum(axis=1), gen)


@dataclass(frozen=True)
class FullConditionals:
    """Factories of conditional slices.

    attacker : callable ``(u_A, p_A, d) -> slice`` with ``theta(a, gen, size)``
        and ``decision(theta_idx, gen)`` over attack states.
    defender : callable ``(a_star) -> slice`` with ``theta(d, gen, size)``
        and ``decision(theta_idx, gen)``, ``a_star`` the best attack state per defense.
    defender_ara : callable ``(table) -> slice`` with ``theta(d, attacks, gen)``,
        ``attack(d, theta_idx, gen)`` and ``decision(attacks, theta_idx, gen)``,
        ``table`` the attack forecast ``p(a | d)``.
    """

    attacker: object = None
    defender: object = None
    defender_ara: object = None

    def require(self, *names):
        missing = [n for n in names if getattr(self, n) is None]
        if missing:
            raise GameError("missing full conditional(s): " + ", ".join(missing))


def _union_thetas(model, D, A):
    vals = set()
    for d in D.values():
        for a in A.values():
            th, _ = model.enumerate(d, a)
            vals.update(np.asarray(th).tolist())
    return np.array(sorted(vals))


def _log_table(u, model, x_values, pairs, thetas, own):
    """``log u(own, theta) + log p(theta | d, a)`` for each (d, a) in ``pairs``; -inf off support."""
    out = np.full((len(pairs), len(thetas)), -np.inf)
    logu = np.full((len(pairs), len(thetas)), -np.inf)
    for r, (d, a) in enumerate(pairs):
        on = model.support_at(d, a).contains(thetas)
        if not on.any():
            continue
        t = thetas[on]
        p = np.asarray(model.prob(d, a, t), dtype=float)
        uv = np.asarray(u(own(d, a), t), dtype=float)
        with np.errstate(divide="ignore"):
            out[r, on] = np.log(uv) + np.log(p)
            logu[r, on] = np.log(uv)
    return out, logu


def enumeration_conditionals(game) -> FullConditionals:
    """Exact conditionals for finite games with exact outcome evaluators."""
    D, A = game.defense_space, game.attack_space
    if not (D.is_discrete and A.is_discrete):
        raise GameError("enumeration conditionals need finite decision spaces; supply them explicitly")
    if not game.p_D.exact:
        raise GameError("enumeration conditionals need an exact defender outcome evaluator")
    th_D = _union_thetas(game.p_D, D, A)
    d_vals, a_vals = D.values(), A.values()
    full, full_u = _log_table(game.u_D, game.p_D, d_vals, [(d, a) for d in d_vals for a in a_vals],
                              th_D, lambda d, a: d)
    full = full.reshape(D.size, A.size, -1)
    full_u = full_u.reshape(D.size, A.size, -1)

    def attacker(u_A, p_A, d):
        if not p_A.exact:
            raise GameError("enumeration conditionals need an exact attacker outcome evaluator")
        th = _union_thetas(p_A, type(D).discrete([d]), A)
        lw, lu = _log_table(u_A, p_A, a_vals, [(d, a) for a in a_vals], th, lambda d, a: a)
        return EnumerationSlice(lw, th, lu)

    def defender(a_star):
        idx = np.arange(D.size)
        return EnumerationSlice(full[idx, a_star], th_D, full_u[idx, a_star])

    def defender_ara(table):
        with np.errstate(divide="ignore"):
            lw = full + np.log(np.asarray(table, dtype=float))[:, :, None]
        return _AraDefenderSlice(lw, th_D, full_u)

    return FullConditionals(attacker, defender, defender_ara)


# ---------------------------------------------------------------- samplers

def _attacker_mode(sl, n_attacks, M, K, sched: AnnealSchedule, rs: RandomSource, codes):
    gen = rs.generator
    a = int(gen.integers(n_attacks))
    draws = np.empty(M, dtype=np.int64)
    for j in range(M):
        H = sched(j + 1)
        rs.count(H + 1)
        th = sl.theta(a, gen, H)
        a = sl.decision(th, gen)
        draws[j] = a
    return estimate_mode_discrete(draws[K:], codes).value


def _defender_trace(states, H, utility, thetas, attacks, R):
    return ChainTrace(np.asarray(states), np.ones(len(states), dtype=bool), np.asarray(H),
                      np.asarray(utility), np.asarray(thetas, dtype=float),
                      None if attacks is None else np.asarray(attacks, dtype=float), burn_in=R)


def _finish(game, trace, rs, rep, **extra) -> ApsSolution:
    D = game.defense_space
    m = estimate_mode_discrete(trace.kept(), D.codes)
    vals, counts = np.unique(trace.kept(), return_counts=True)
    hist = {D.value(int(v)): c / counts.sum() for v, c in zip(vals, counts)}
    return ApsSolution(m.value, D.value(m.value), m.share, hist, trace, seed=rs.seed, draws=rs.draws,
                       validation=rep, **extra)


def _prepare(game, conditionals, N, M, K, R, H_inner, H_outer, validation_probes, rs):
    rs = as_source(rs)
    D, A = game.defense_space, game.attack_space
    if not (D.is_discrete and A.is_discrete):
        raise GameError("the Gibbs solvers loop over finite decision spaces")
    if N < 1 or M < 1:
        raise GameError("N and M must be >= 1")
    R = N // 10 if R is None else R
    if not 0 <= R < N or not 0 <= K < M:
        raise GameError("need 0 <= K < M and 0 <= R < N")
    conditionals = enumeration_conditionals(game) if conditionals is None else conditionals
    rep = _check_valid(game, validation_probes, rs)
    return rs, conditionals, R, _as_schedule(H_inner).resolve(M), _as_schedule(H_outer).resolve(N), rep


def solve_complete_gibbs(game: CompleteInfoGame, conditionals: FullConditionals | None = None,
                         N: int = 2_000, M: int = 500, K: int = 0, rs=None, *, R: int | None = None,
                         H_inner=1, H_outer=1, validation_probes: int = 1_000) -> ApsSolution:
    """Two-stage Gibbs APS for the subgame-perfect defense.

    For every defense the attacker sweep alternates outcome copies and
    attack ``M`` times (mode of draws after ``K``); the defender sweep
    then alternates outcome copies and defense ``N`` times (mode after
    ``R``, default ``N // 10``). ``conditionals=None`` builds them by
    enumeration.
    """
    rs, cond, R, s_in, s_out, rep = _prepare(game, conditionals, N, M, K, R, H_inner, H_outer,
                                             validation_probes, rs)
    cond.require("attacker", "defender")
    D, A = game.defense_space, game.attack_space
    a_star = np.empty(D.size, dtype=np.int64)
    for i, d in enumerate(D.values()):
        sub = rs.spawn(i)
        a_star[i] = _attacker_mode(cond.attacker(game.u_A, game.p_A, d), A.size, M, K, s_in, sub, A.codes)
        rs.count(sub.draws)
    sl = cond.defender(a_star)
    gen = rs.generator
    d = int(gen.integers(D.size))
    states, Hs, us, ths = [], [], [], []
    for i in range(1, N + 1):
        H = s_out(i)
        rs.count(H + 1)
        th = sl.theta(d, gen, H)
        d = sl.decision(th, gen)
        states.append(d), Hs.append(H), ths.append(sl.thetas[th[0]])
        us.append(float(np.exp(np.mean(sl.logu[d, th]))) if sl.logu is not None else np.nan)
    trace = _defender_trace(states, Hs, us, ths, None, R)
    br = {D.value(i): A.value(int(a)) for i, a in enumerate(a_star)}
    return _finish(game, trace, rs, rep, best_responses=br)


def solve_ara_gibbs(game: AraGame, conditionals: FullConditionals | None = None,
                    N: int = 2_000, M: int = 500, J: int = 200, rs=None, *, K: int = 0,
                    R: int | None = None, H_inner=1, H_outer=1,
                    validation_probes: int = 1_000) -> ApsSolution:
    """Gibbs APS for the ARA defense.

    For every defense, ``J`` attacker models are drawn and each is solved
    by an ``M``-sweep attacker Gibbs chain; the modes form the forecast
    ``p(a | d)``. The defender sweep cycles defense, outcome copies and
    attacks ``N`` times. ``meta`` of the result counts attacker sweeps.
    """
    if J < 1:
        raise GameError("J must be >= 1")
    rs, cond, R, s_in, s_out, rep = _prepare(game, conditionals, N, M, K, R, H_inner, H_outer,
                                             validation_probes, rs)
    cond.require("attacker", "defender_ara")
    D, A = game.defense_space, game.attack_space
    table = np.zeros((D.size, A.size))
    for i, d in enumerate(D.values()):
        sub = rs.spawn(i)
        for _ in range(J):
            u_A, p_A = game.attacker_model.draw(sub)
            a = _attacker_mode(cond.attacker(u_A, p_A, d), A.size, M, K, s_in, sub, A.codes)
            table[i, a] += 1
        rs.count(sub.draws)
    table /= J
    sl = cond.defender_ara(table)
    gen = rs.generator
    d = int(gen.integers(D.size))
    H = s_out(0)
    at = gen.choice(A.size, size=H, p=table[d])
    th = sl.theta(d, at, gen)
    states, Hs, us, ths, ats = [], [], [], [], []
    for i in range(1, N + 1):
        Hi = s_out(i)
        if Hi > H:
            rs.count(2 * (Hi - H))
            extra = gen.choice(A.size, size=Hi - H, p=table[d])
            at = np.concatenate([at, extra])
            th = np.concatenate([th, sl.theta(d, extra, gen)])
            H = Hi
        rs.count(2 * H + 1)
        d = sl.decision(at, th, gen)
        th = sl.theta(d, at, gen)
        at = sl.attack(d, th, gen)
        states.append(d), Hs.append(H), ths.append(sl.thetas[th[0]]), ats.append(A.value(int(at[0])))
        us.append(float(np.exp(np.mean(sl.logu[d, at, th]))))
    trace = _defender_trace(states, Hs, us, ths, ats, R)
    return _finish(game, trace, rs, rep, attack_tables=table, meta={"attacker_sweeps": D.size * J * M})


def attack_distribution_gibbs(game: AraGame, d, J: int, M: int = 500, K: int = 0, rs=None, *,
                              H_inner=1, conditionals: FullConditionals | None = None) -> np.ndarray:
    """Forecast ``p(a | d)`` at one defense value from ``J`` attacker Gibbs chains."""
    rs = as_source(rs)
    if J < 1 or M < 1 or not 0 <= K < M:
        raise GameError("need J >= 1, M >= 1 and 0 <= K < M")
    A = game.attack_space
    cond = enumeration_conditionals(game) if conditionals is None else conditionals
    cond.require("attacker")
    sched = _as_schedule(H_inner).resolve(M)
    counts = np.zeros(A.size)
    for _ in range(J):
        u_A, p_A = game.attacker_model.draw(rs)
        counts[_attacker_mode(cond.attacker(u_A, p_A, d), A.size, M, K, sched, rs, A.codes)] += 1
    return counts / J
