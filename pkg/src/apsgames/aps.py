"""Metropolis-Hastings augmented probability simulation (APS).

The attacker's augmented law is ``pi_A(a, theta | d) ~ u_A(a, theta) p_A(theta | d, a)``
and the defender's is ``pi_D(d, theta | a*(d)) ~ u_D(d, theta) p_D(theta | d, a*(d))``
(complete information) or ``pi_D(d, a, theta) ~ u_D p_D(theta | d, a) p_D(a | d)``
(ARA). The mode of each decision marginal is the optimal decision.

With power ``H`` every state carries ``H`` outcome copies and the decision
marginal becomes proportional to the ``H``-th power of the expected utility;
``H`` may follow an increasing integer ladder (annealing).

Draw accounting (``RandomSource.draws``) counts one unit per proposal, per
outcome copy and per attacker-model component, and nothing for chain
initialisation or acceptance uniforms.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .diagnostics import estimate_mode_continuous, estimate_mode_discrete
from .game import AraGame, CompleteInfoGame, DecisionSpace, GameError, validate_game
from .proposals import CircularNeighbor, default_kernel
from .rng import RandomSource, as_source

__all__ = [
    "PositivityError",
    "AnnealSchedule",
    "anneal_schedule",
    "ApsConfig",
    "ChainTrace",
    "ApsSolution",
    "mh_acceptance",
    "inner_aps_attack",
    "sample_attack",
    "solve_complete_aps",
    "attack_distribution_aps",
    "solve_ara_aps",
]


class PositivityError(GameError):
    """A utility evaluated to a non-positive (or non-finite) value."""


@dataclass(frozen=True)
class AnnealSchedule:
    """Integer power ladder ``H(i) = min(H_max, H0 + step * floor(i / tau))``.

    A fixed power is the ladder with ``H0 == H_max``. ``tau=None`` means
    one tenth of the chain length, resolved by :meth:`resolve`.
    """

    H0: int = 1
    tau: int | None = None
    H_max: int = 1
    step: int = 1

    def __post_init__(self):
        if self.H0 < 1 or self.H_max < self.H0:
            raise GameError("need 1 <= H0 <= H_max")
        if self.tau is not None and self.tau < 1:
            raise GameError("tau must be >= 1")
        if self.step < 1:
            raise GameError("step must be >= 1")

    @classmethod
    def fixed(cls, H: int = 1) -> "AnnealSchedule":
        return cls(H0=H, tau=1, H_max=H)

    @classmethod
    def ladder(cls, H_max: int, H0: int = 1, tau: int | None = None, step: int = 1) -> "AnnealSchedule":
        return cls(H0=H0, tau=tau, H_max=H_max, step=step)

    @property
    def is_fixed(self) -> bool:
        return self.H0 == self.H_max

    def resolve(self, length: int) -> "AnnealSchedule":
        if self.tau is not None:
            return self
        return AnnealSchedule(self.H0, max(1, length // 10), self.H_max, self.step)

    def __call__(self, i: int) -> int:
        if self.is_fixed:
            return self.H0
        tau = self.tau if self.tau is not None else 1
        return min(self.H_max, self.H0 + self.step * (i // tau))


def anneal_schedule(i: int, schedule: AnnealSchedule) -> int:
    return schedule(i)


def _as_schedule(h) -> AnnealSchedule:
    return h if isinstance(h, AnnealSchedule) else AnnealSchedule.fixed(int(h))


@dataclass(frozen=True)
class ApsConfig:
    """Chain lengths, burn-ins, kernels and powers.

    ``K``/``R`` default to a tenth of ``M``/``N``. ``H_inner``/``H_outer``
    accept an int (fixed power) or an :class:`AnnealSchedule`. ``J`` turns
    on the tabulated attack forecast for ARA on discrete defense spaces.
    """

    N: int = 2_000
    M: int = 500
    K: int | None = None
    R: int | None = None
    g_D: object = None
    g_A: object = None
    H_inner: int | AnnealSchedule = 1
    H_outer: int | AnnealSchedule = 1
    memoize: bool = True
    memo_resolution: float = 1e-3
    J: int | None = None
    start: object = None
    mode_grid: float | None = None
    validation_probes: int = 1_000
    keep_inner_traces: bool = False

    def __post_init__(self):
        object.__setattr__(self, "H_inner", _as_schedule(self.H_inner).resolve(self.M))
        object.__setattr__(self, "H_outer", _as_schedule(self.H_outer).resolve(self.N))
        if self.K is None:
            object.__setattr__(self, "K", self.M // 10)
        if self.R is None:
            object.__setattr__(self, "R", self.N // 10)
        if self.N < 1 or self.M < 1:
            raise GameError("N and M must be >= 1")
        if not 0 <= self.K < self.M:
            raise GameError("need 0 <= K < M")
        if not 0 <= self.R < self.N:
            raise GameError("need 0 <= R < N")
        if self.J is not None and self.J < 1:
            raise GameError("J must be >= 1")


@dataclass
class ChainTrace:
    """Per-iteration record of one chain (iterations 1..length).

    ``utility`` is the geometric mean of the current copies' utilities;
    ``theta`` holds the first outcome copy when outcomes are scalars.
    """

    states: np.ndarray
    accepted: np.ndarray
    H: np.ndarray
    utility: np.ndarray
    theta: np.ndarray | None = None
    attacks: np.ndarray | None = None
    burn_in: int = 0

    @property
    def acceptance_rate(self) -> float:
        return float(self.accepted.mean()) if len(self.accepted) else 0.0

    def __len__(self):
        return len(self.accepted)

    def kept(self) -> np.ndarray:
        return self.states[self.burn_in:]


@dataclass
class ApsSolution:
    optimal_state: object
    optimal_decision: object
    share: float
    histogram: dict
    trace: ChainTrace
    best_responses: dict = field(default_factory=dict)
    attack_tables: np.ndarray | None = None
    inner_acceptance: list = field(default_factory=list)
    inner_traces: list = field(default_factory=list)
    seed: int = 0
    draws: int = 0
    validation: object = None
    meta: dict = field(default_factory=dict)


def mh_acceptance(u, current, proposed, H: int | None = None) -> float:
    """``min(1, prod_t u(proposed, theta~_t) / u(current, theta_t))``.

    ``current`` and ``proposed`` are ``(decision, thetas)`` pairs with
    ``len(thetas) == H``.
    """
    (x, th), (y, th_new) = current, proposed
    th, th_new = np.asarray(th), np.asarray(th_new)
    if H is not None and (len(th) != H or len(th_new) != H):
        raise GameError("theta lists must have H entries")
    uc, up = u(x, th), u(y, th_new)
    if np.any(~np.isfinite(uc)) or np.any(uc <= 0) or np.any(~np.isfinite(up)) or np.any(up <= 0):
        raise PositivityError("non-positive utility in acceptance ratio")
    log_ratio = float(np.sum(np.log(up)) - np.sum(np.log(uc)))
    return math.exp(min(0.0, log_ratio))


class _Draws:
    """Buffered iid outcome copies and their log-utilities, keyed by decision pair.

    Refilling in chunks keeps the per-iteration cost of small chains low;
    the draws remain iid from the requested conditional. Only consumed
    copies are accounted on the random source.
    """

    def __init__(self, model, utility, rs: RandomSource, who: str):
        self.model, self.u, self.rs, self.who = model, utility, rs, who
        self.buf = {}

    def _fresh(self, d, a, decision, n):
        th = np.asarray(self.model.sampler(d, a, self.rs.generator, n))
        u = self.u(decision, th)
        if np.any(~np.isfinite(u)) or np.any(u <= 0):
            raise PositivityError(f"non-positive {self.who} utility at d={d!r}, a={a!r}")
        return th, np.log(u)

    def take(self, key, d, a, decision, n: int):
        self.rs.count(n)
        if key is None:
            return self._fresh(d, a, decision, n)
        entry = self.buf.get(key)
        if entry is None or len(entry[1]) - entry[2] < n:
            chunk = max(n, 64 if entry is None else min(2 * entry[3], 65_536))
            th, lu = self._fresh(d, a, decision, chunk)
            if entry is not None and entry[2] < len(entry[1]):
                th = np.concatenate([entry[0][entry[2]:], th])
                lu = np.concatenate([entry[1][entry[2]:], lu])
            entry = [th, lu, 0, chunk]
            self.buf[key] = entry
        p = entry[2]
        entry[2] = p + n
        return entry[0][p:p + n], entry[1][p:p + n]


def _key(space: DecisionSpace, state, resolution: float):
    if space.is_discrete:
        return state
    return tuple(np.rint(np.atleast_1d(state) / resolution).astype(np.int64).tolist())


def _mode(space: DecisionSpace, samples, grid):
    if space.is_discrete:
        m = estimate_mode_discrete(samples, space.codes)
        return m.value, m.share
    m = estimate_mode_continuous(np.asarray(samples), grid=grid)
    return np.atleast_1d(m.value), m.share


def _histogram(space: DecisionSpace, samples, grid) -> dict:
    s = np.asarray(samples)
    if space.is_discrete:
        vals, counts = np.unique(s, return_counts=True)
        return {space.value(int(v)): c / s.size for v, c in zip(vals, counts)}
    h = grid if grid is not None else 1e-2
    x = s[:, 0] if s.ndim == 2 else s
    k, counts = np.unique(np.rint(x / h).astype(np.int64), return_counts=True)
    return {round(float(v * h), 12): c / x.size for v, c in zip(k, counts)}


def _theta0(th):
    return th[0] if np.ndim(th[0]) == 0 else np.nan


# ---------------------------------------------------------------- inner chain

def _inner_chain(u_A, p_A, space: DecisionSpace, d, cfg: ApsConfig, rs: RandomSource,
                 kernel=None, record: bool = False):
    """Run the attacker chain at defense value ``d``; return (mode state, trace or None, acc rate)."""
    kernel = kernel or cfg.g_A or default_kernel(space)
    if space.is_discrete:
        return _inner_chain_discrete(u_A, p_A, space, d, cfg, rs, kernel, record)
    sched = cfg.H_inner
    draws = _Draws(p_A, u_A, rs, "attacker")
    gen = rs.generator
    discrete = space.is_discrete

    def take(state, n):
        key = state if discrete else None
        return draws.take(key, d, space.value(state), space.value(state), n)

    a = space.random_state(gen)
    H = sched(0)
    th, lu = take(a, H)
    s = float(lu.sum())
    M = cfg.M
    states = np.empty(M, dtype=np.int64) if discrete else np.empty((M, space.dim))
    acc = np.zeros(M, dtype=bool)
    if record:
        Hs, us, ths = np.empty(M, dtype=np.int64), np.empty(M), np.empty(M)
    for i in range(1, M + 1):
        Hi = sched(i)
        if Hi > H:
            th2, lu2 = take(a, Hi - H)
            th, lu = np.concatenate([th, th2]), np.concatenate([lu, lu2])
            s, H = float(lu.sum()), Hi
        cand = kernel.propose(a, rs)
        if cand is not None:
            th_c, lu_c = take(cand, H)
            s_c = float(lu_c.sum())
            if s_c >= s or gen.random() < math.exp(s_c - s):
                a, th, lu, s = cand, th_c, lu_c, s_c
                acc[i - 1] = True
        states[i - 1] = a
        if record:
            Hs[i - 1], us[i - 1], ths[i - 1] = H, math.exp(s / H), _theta0(th)
    mode, _ = _mode(space, states[cfg.K:], cfg.mode_grid)
    trace = None
    if record:
        trace = ChainTrace(states, acc, Hs, us, ths, burn_in=cfg.K)
    return mode, trace, float(acc.mean())


class _SumBuffer:
    """Unread iid copies at one discrete state, with cumulative log-utility sums."""

    __slots__ = ("th", "cs", "pos", "chunk")

    def __init__(self):
        self.th, self.cs, self.pos, self.chunk = np.empty(0), np.zeros(1), 0, 32


def _inner_chain_discrete(u_A, p_A, space: DecisionSpace, d, cfg: ApsConfig, rs: RandomSource,
                          kernel, record: bool):
    """Lean version of the attacker chain for finite attack spaces.

    Same target and accounting as the generic loop; proposals of the
    circular kernel and acceptance uniforms are drawn in blocks and the
    per-state copies are kept as running sums, so an iteration costs a
    handful of scalar operations plus the copies it consumes.
    """
    gen = rs.generator
    n, M, sched = space.size, cfg.M, cfg.H_inner
    bufs = [_SumBuffer() for _ in range(n)]
    values = space.values()
    used = 0

    def take(a, k):
        b = bufs[a]
        if len(b.cs) - 1 - b.pos < k:
            m = max(k, b.chunk)
            b.chunk = min(2 * b.chunk, 65_536)
            th = np.asarray(p_A.sampler(d, values[a], gen, m))
            u = u_A(values[a], th)
            if np.any(~np.isfinite(u)) or np.any(u <= 0):
                raise PositivityError(f"non-positive attacker utility at d={d!r}, a={values[a]!r}")
            rest = b.cs[b.pos:] - b.cs[b.pos]
            b.cs = np.concatenate([rest, rest[-1] + np.cumsum(np.log(u))])
            b.th = np.concatenate([b.th[b.pos:], th if th.ndim == 1 else np.full(m, np.nan)])
            b.pos = 0
        p = b.pos
        b.pos = p + k
        return float(b.cs[p + k] - b.cs[p]), b.th[p]

    a = space.random_state(gen)
    H = sched(0)
    s, th0 = take(a, H)
    used += H
    circular = isinstance(kernel, CircularNeighbor)
    if circular:
        rs.count(M)
        steps = kernel.offsets(gen, M).tolist() if n > 1 else None
    log_u = np.log(gen.random(M)).tolist()
    states = [0] * M
    acc = [False] * M
    if record:
        Hs, us, ths = [0] * M, [0.0] * M, [0.0] * M
    fixed = sched.is_fixed
    for i in range(M):
        if not fixed:
            Hi = sched(i + 1)
            if Hi > H:
                s2, _ = take(a, Hi - H)
                used += Hi - H
                s += s2
                H = Hi
        if circular:
            cand = None if steps is None else (a + steps[i]) % n
        else:
            cand = kernel.propose(a, rs)
        if cand is not None:
            s_c, th_c = take(cand, H)
            used += H
            if s_c - s >= log_u[i]:
                a, s, th0 = cand, s_c, th_c
                acc[i] = True
        states[i] = a
        if record:
            Hs[i], us[i], ths[i] = H, math.exp(s / H), th0 if np.ndim(th0) == 0 else np.nan
    rs.count(used)
    states = np.array(states, dtype=np.int64)
    acc = np.array(acc)
    mode, _ = _mode(space, states[cfg.K:], cfg.mode_grid)
    trace = None
    if record:
        trace = ChainTrace(states, acc, np.array(Hs), np.array(us), np.array(ths, dtype=float),
                           burn_in=cfg.K)
    return mode, trace, float(acc.mean())


def inner_aps_attack(game: CompleteInfoGame, d, cfg: ApsConfig = ApsConfig(),
                     rs: RandomSource | int | None = None):
    """Attacker best response at defense value ``d`` by inner APS.

    Returns ``(attack value, ChainTrace)``.
    """
    rs = as_source(rs)
    mode, trace, _ = _inner_chain(game.u_A, game.p_A, game.attack_space, d, cfg, rs, record=True)
    return game.attack_space.value(mode), trace


def sample_attack(game: AraGame, d, cfg: ApsConfig, rs: RandomSource, record: bool = False):
    """One draw from the attack forecast p_D(a | d): a random attacker's APS mode (state)."""
    u_A, p_A = game.attacker_model.draw(rs)
    return _inner_chain(u_A, p_A, game.attack_space, d, cfg, rs, record=record)


# ---------------------------------------------------------------- outer chains

def _check_valid(game, probes: int, rs: RandomSource):
    if probes <= 0:
        return None
    rep = validate_game(game, probes, rs.spawn(2**31 - 1))
    if not rep.ok:
        raise PositivityError("game failed validation: " + "; ".join(rep.violations))
    return rep


class _OuterChain:
    """Shared defender-chain loop; subclasses supply copies of (attack, outcome)."""

    def __init__(self, game, cfg: ApsConfig, rs: RandomSource):
        self.game, self.cfg, self.rs = game, cfg, rs
        self.D = game.defense_space
        self.kernel = cfg.g_D or default_kernel(self.D)
        self.draws = _Draws(game.p_D, game.u_D, rs, "defender")

    def copies(self, state, n):
        """Return (attack states, thetas, log-utilities) for ``n`` fresh copies at ``state``."""
        raise NotImplementedError

    def run(self):
        cfg, gen, D = self.cfg, self.rs.generator, self.D
        sched = cfg.H_outer
        d = D.state_of(cfg.start) if cfg.start is not None else D.random_state(gen)
        if not D.contains(d):
            raise GameError("start outside the defense space")
        H = sched(0)
        at, th, lu = self.copies(d, H)
        s = float(lu.sum())
        N = cfg.N
        states = np.empty(N, dtype=np.int64) if D.is_discrete else np.empty((N, D.dim))
        acc = np.zeros(N, dtype=bool)
        Hs, us = np.empty(N, dtype=np.int64), np.empty(N)
        ths, ats = np.empty(N), np.empty(N)
        for i in range(1, N + 1):
            Hi = sched(i)
            if Hi > H:
                at2, th2, lu2 = self.copies(d, Hi - H)
                at, th, lu = np.concatenate([at, at2]), np.concatenate([th, th2]), np.concatenate([lu, lu2])
                s, H = float(lu.sum()), Hi
            cand = self.kernel.propose(d, self.rs)
            if cand is not None:
                at_c, th_c, lu_c = self.copies(cand, H)
                s_c = float(lu_c.sum())
                if s_c >= s or gen.random() < math.exp(s_c - s):
                    d, at, th, lu, s = cand, at_c, th_c, lu_c, s_c
                    acc[i - 1] = True
            states[i - 1] = d
            Hs[i - 1], us[i - 1], ths[i - 1] = H, math.exp(s / H), _theta0(th)
            ats[i - 1] = at[0] if np.ndim(at[0]) == 0 else np.nan
        trace = ChainTrace(states, acc, Hs, us, ths, ats, burn_in=cfg.R)
        mode, share = _mode(D, states[cfg.R:], cfg.mode_grid)
        return mode, share, trace


class _CompleteOuter(_OuterChain):
    def __init__(self, game, cfg, rs):
        super().__init__(game, cfg, rs)
        self.A = game.attack_space
        self.memo = {}
        self.inner_acc, self.inner_traces = [], []

    def best_response(self, state):
        key = _key(self.D, state, self.cfg.memo_resolution)
        if self.cfg.memoize and key in self.memo:
            return self.memo[key]
        g = self.game
        a, trace, rate = _inner_chain(g.u_A, g.p_A, self.A, self.D.value(state), self.cfg, self.rs,
                                      record=self.cfg.keep_inner_traces)
        self.inner_acc.append(rate)
        if trace is not None:
            self.inner_traces.append(trace)
        if self.cfg.memoize:
            self.memo[key] = a
        return a

    def copies(self, state, n):
        a = self.best_response(state)
        dv = self.D.value(state)
        key = (state, a) if self.D.is_discrete and self.A.is_discrete else None
        th, lu = self.draws.take(key, dv, self.A.value(a), dv, n)
        return np.full(n, a if self.A.is_discrete else np.nan), th, lu


def solve_complete_aps(game: CompleteInfoGame, cfg: ApsConfig = ApsConfig(),
                       rs: RandomSource | int | None = None) -> ApsSolution:
    """Nested MH APS for the subgame-perfect defense."""
    rs = as_source(rs)
    rep = _check_valid(game, cfg.validation_probes, rs)
    chain = _CompleteOuter(game, cfg, rs)
    mode, share, trace = chain.run()
    D, A = game.defense_space, game.attack_space
    br = {}
    for key, a in chain.memo.items():
        dv = D.value(key) if D.is_discrete else tuple(np.asarray(key) * cfg.memo_resolution)
        br[dv] = A.value(a)
    return ApsSolution(mode, D.value(mode), share, _histogram(D, trace.kept(), cfg.mode_grid), trace,
                       best_responses=br, inner_acceptance=chain.inner_acc,
                       inner_traces=chain.inner_traces, seed=rs.seed, draws=rs.draws, validation=rep)


def _aps_table(game: AraGame, d_state, J, cfg, sub) -> np.ndarray:
    A = game.attack_space
    counts = np.zeros(A.size)
    dv = game.defense_space.value(d_state)
    for _ in range(J):
        a, _, _ = sample_attack(game, dv, cfg, sub)
        counts[a] += 1
    return counts / J


def attack_distribution_aps(game: AraGame, d, J: int, cfg: ApsConfig = ApsConfig(),
                            rs: RandomSource | int | None = None) -> np.ndarray:
    """Frequency table of ``J`` sample_attack draws at defense value ``d``."""
    rs = as_source(rs)
    A = game.attack_space
    if not A.is_discrete:
        raise GameError("attack forecast tables need a discrete attack space")
    counts = np.zeros(A.size)
    for _ in range(J):
        a, _, _ = sample_attack(game, d, cfg, rs)
        counts[a] += 1
    return counts / J


class _AraOuter(_OuterChain):
    def __init__(self, game, cfg, rs, tables=None):
        super().__init__(game, cfg, rs)
        self.A = game.attack_space
        self.tables = tables
        self.inner_acc = []

    def attacks(self, state, n):
        if self.tables is not None:
            self.rs.count(n)
            return self.rs.generator.choice(self.A.size, size=n, p=self.tables[state])
        dv = self.D.value(state)
        out = []
        for _ in range(n):
            a, _, rate = sample_attack(self.game, dv, self.cfg, self.rs)
            self.inner_acc.append(rate)
            out.append(a)
        return np.array(out) if self.A.is_discrete else np.array(out, dtype=object)

    def copies(self, state, n):
        at = self.attacks(state, n)
        dv = self.D.value(state)
        if not self.A.is_discrete:
            th, lu = [], []
            for a in at:
                t, l_ = self.draws.take(None, dv, self.A.value(a), dv, 1)
                th.append(t[0]), lu.append(l_[0])
            return np.full(n, np.nan), np.array(th), np.array(lu)
        if n == 1:
            a = int(at[0])
            key = (state, a) if self.D.is_discrete else None
            th, lu = self.draws.take(key, dv, self.A.value(a), dv, 1)
            return at, th, lu
        order = np.argsort(at, kind="stable")
        at = at[order]
        ths, lus = [], []
        for a in np.unique(at):
            k = int(np.sum(at == a))
            key = (state, int(a)) if self.D.is_discrete else None
            t, l_ = self.draws.take(key, dv, self.A.value(int(a)), dv, k)
            ths.append(t), lus.append(l_)
        return at, np.concatenate(ths), np.concatenate(lus)


def solve_ara_aps(game: AraGame, cfg: ApsConfig = ApsConfig(),
                  rs: RandomSource | int | None = None) -> ApsSolution:
    """MH APS for the ARA defense.

    Without ``cfg.J`` every candidate defense triggers a fresh
    sample_attack. With ``cfg.J`` (discrete spaces) the forecast
    p_D(a | d) is first tabulated per defense from ``J`` sample_attack
    calls on substream ``d`` and the chain draws attacks from the table.
    """
    rs = as_source(rs)
    rep = _check_valid(game, cfg.validation_probes, rs)
    D, A = game.defense_space, game.attack_space
    tables = None
    if cfg.J is not None:
        if not (D.is_discrete and A.is_discrete):
            raise GameError("the tabulated forecast needs discrete spaces")
        tables = np.empty((D.size, A.size))
        for i in range(D.size):
            sub = rs.spawn(i)
            tables[i] = _aps_table(game, i, cfg.J, cfg, sub)
            rs.count(sub.draws)
    chain = _AraOuter(game, cfg, rs, tables)
    mode, share, trace = chain.run()
    return ApsSolution(mode, D.value(mode), share, _histogram(D, trace.kept(), cfg.mode_grid), trace,
                       attack_tables=tables, inner_acceptance=chain.inner_acc,
                       seed=rs.seed, draws=rs.draws, validation=rep)
