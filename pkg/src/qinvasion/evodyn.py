"""Strategy populations on a network under synchronous stochastic imitation.

Every generation each agent plays the entangled game once with each
neighbor, sums its payoffs, then picks one neighbor uniformly at random and
copies that neighbor's strategy with probability

    (F_j - F_i) / (alpha * max(k_i, k_j))     if F_j > F_i, else 0.

All agents revise from the same snapshot. Random draws come from per-node
counter-based streams keyed by (seed, generation, node), so results do not
depend on the order in which nodes are visited.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field, replace

import numpy as np

from qinvasion import _kernels
from qinvasion.errors import ConfigError, DomainError
from qinvasion.games import make_payoffs
from qinvasion.netgen import Network, NetworkSpec, build_network, top_k_degree_nodes
from qinvasion.quantum import HALF_PI, C, D, H, Q, PairPayoffTable, Strategy, as_strategy, build_pair_table
from qinvasion.seeding import MASK64, numpy_rng

log = logging.getLogger(__name__)

CASE_STRATEGIES = {1: (C, D, H), 2: (C, D, H, Q)}
CASE_FRACTIONS = {1: (0.49, 0.50, 0.01), 2: (0.49, 0.49, 0.01, 0.01)}

# purposes for numpy_rng sub-streams of one run seed
_NETWORK_STREAM = 1
_INIT_STREAM = 2


@dataclass(frozen=True)
class CaseSpec:
    case: int = 1
    fractions: tuple[float, ...] | None = None
    hub_override: tuple[int, str] | None = None

    @property
    def strategies(self) -> tuple[Strategy, ...]:
        return CASE_STRATEGIES[self.case]

    @property
    def initial_fractions(self) -> tuple[float, ...]:
        return self.fractions if self.fractions is not None else CASE_FRACTIONS[self.case]

    @property
    def invader(self) -> Strategy:
        """The quantum strategy whose spread a case is about."""
        return Q if self.case == 2 else H

    def validate(self) -> "CaseSpec":
        if self.case not in CASE_STRATEGIES:
            raise ConfigError(f"case must be 1 or 2, got {self.case!r}")
        fr = self.initial_fractions
        names = "".join(str(s) for s in self.strategies)
        if len(fr) != len(self.strategies):
            raise ConfigError(f"fractions must give {len(self.strategies)} values ({names}) for case "
                              f"{self.case}, got {len(fr)}")
        if any(not 0.0 <= f <= 1.0 for f in fr):
            raise ConfigError(f"fractions must each lie in [0, 1], got {fr}")
        if abs(sum(fr) - 1.0) > 1e-9:
            raise ConfigError(f"fractions must sum to 1, got {sum(fr)!r}")
        if self.hub_override is not None:
            rank, strategy = self.hub_override
            if rank not in (1, 2, 3):
                raise ConfigError(f"hub_override rank must be 1, 2 or 3, got {rank!r}")
            try:
                s = as_strategy(strategy)
            except DomainError as exc:
                raise ConfigError(f"hub_override strategy: {exc}") from None
            if s not in self.strategies:
                raise ConfigError(f"hub_override strategy {s} is not in case {self.case} ({names})")
        return self


@dataclass(frozen=True)
class RunConfig:
    network: NetworkSpec = field(default_factory=NetworkSpec)
    game: str = "PD"
    param: float = 1.5
    case: CaseSpec = field(default_factory=CaseSpec)
    omega: float = HALF_PI
    max_generations: int = 10_000
    measure_window: int = 1000
    freeze_window: int = 500
    seed: int = 0

    def validate(self) -> "RunConfig":
        self.network.validate()
        make_payoffs(self.game, self.param)
        self.case.validate()
        if not 0.0 <= self.omega <= HALF_PI:
            raise DomainError(f"omega must lie in [0, pi/2], got {self.omega!r}")
        if self.max_generations < 1:
            raise ConfigError(f"max_generations must be >= 1, got {self.max_generations!r}")
        if not 1 <= self.measure_window <= self.max_generations:
            raise ConfigError(f"measure_window must lie in [1, max_generations], got {self.measure_window!r}")
        if self.freeze_window < 1:
            raise ConfigError(f"freeze_window must be >= 1, got {self.freeze_window!r}")
        return self

    def with_param(self, param: float, seed: int) -> "RunConfig":
        return replace(self, param=param, seed=seed)


@dataclass
class Population:
    """Strategy indices with a write buffer for synchronous updates."""

    current: np.ndarray
    next: np.ndarray
    generation: int = 0
    last_changed: int = 0

    @classmethod
    def from_indices(cls, strat) -> "Population":
        cur = np.asarray(strat, dtype=np.int64).copy()
        return cls(cur, np.empty_like(cur))

    def swap(self) -> None:
        self.current, self.next = self.next, self.current
        self.generation += 1

    def counts(self, n_strategies: int) -> np.ndarray:
        return np.bincount(self.current, minlength=n_strategies)


@dataclass(frozen=True)
class RunResult:
    strategies: tuple[Strategy, ...]
    mean_fractions: tuple[float, ...]
    converged: bool
    generations: int
    final_strategies: np.ndarray | None = None
    series: np.ndarray | None = None  # strategy counts per generation, row 0 = initial state

    def fraction(self, s: Strategy | str) -> float:
        return self.mean_fractions[self.strategies.index(as_strategy(s))]


def apportion(fractions, n: int) -> list[int]:
    """Largest-remainder rounding of fractions * n to integers summing to n."""
    raw = [f * n for f in fractions]
    counts = [int(np.floor(x)) for x in raw]
    short = n - sum(counts)
    # ties go to the earlier strategy
    by_remainder = sorted(range(len(raw)), key=lambda i: (-(raw[i] - counts[i]), i))
    for i in by_remainder[:short]:
        counts[i] += 1
    return counts


def init_population(net: Network, cs: CaseSpec, rng: np.random.Generator) -> Population:
    cs.validate()
    counts = apportion(cs.initial_fractions, net.n)
    strat = np.empty(net.n, dtype=np.int64)
    perm = rng.permutation(net.n)
    start = 0
    for s, c in enumerate(counts):
        strat[perm[start:start + c]] = s
        start += c
    if cs.hub_override is not None:
        rank, strategy = cs.hub_override
        hub = top_k_degree_nodes(net, rank)[rank - 1]
        strat[hub] = cs.strategies.index(as_strategy(strategy))
    return Population.from_indices(strat)


def accumulate_payoffs(pop: Population, net: Network, table: PairPayoffTable) -> np.ndarray:
    """Total payoff of every node, each acting as row player against all neighbors."""
    out = np.empty(net.n)
    _kernels.accumulate(net.indptr, net.indices, pop.current, np.ascontiguousarray(table.row), out)
    return out


def update_step(pop: Population, payoff: np.ndarray, net: Network, alpha: float, seed: int,
                order=None) -> Population:
    """One synchronous imitation step; ``order`` only permutes node visiting order."""
    if not alpha > 0:
        raise ConfigError(f"alpha must be positive, got {alpha!r}")
    order = np.arange(net.n) if order is None else np.asarray(order, dtype=np.int64)
    changed, clamped = _kernels.imitate(net.indptr, net.indices, pop.current, np.asarray(payoff, float),
                                        float(alpha), np.uint64(seed & MASK64), pop.generation,
                                        order, pop.next)
    assert clamped == 0, "imitation probability exceeded 1"
    pop.last_changed = int(changed)
    pop.swap()
    return pop


def run(config: RunConfig, keep_trace: bool = False, network: Network | None = None) -> RunResult:
    """Execute one realization: build network and population, evolve, measure."""
    config.validate()
    seed = config.seed & MASK64
    payoffs = make_payoffs(config.game, config.param)
    strategies = config.case.strategies
    table = build_pair_table(strategies, payoffs, config.omega)
    if network is None:
        network = build_network(config.network, numpy_rng(seed, _NETWORK_STREAM))
    pop = init_population(network, config.case, numpy_rng(seed, _INIT_STREAM))
    initial = pop.counts(len(strategies))

    counts = np.zeros((config.max_generations, len(strategies)), dtype=np.int64)
    strat = pop.current.copy()
    gens, converged, clamped = _kernels.evolve(
        network.indptr, network.indices, strat, np.ascontiguousarray(table.row), payoffs.alpha,
        np.uint64(seed), 0, config.max_generations, config.freeze_window, counts)
    assert clamped == 0, "imitation probability exceeded 1"
    counts = counts[:gens]

    if converged:
        mean = counts[-1] / network.n
    else:
        window = counts[-config.measure_window:]
        mean = window.sum(axis=0) / (len(window) * network.n)
    log.debug("run seed=%d %s=%s: %d generations, converged=%s", config.seed, config.game,
              config.param, gens, converged)
    return RunResult(
        strategies=strategies,
        mean_fractions=tuple(float(x) for x in mean),
        converged=bool(converged),
        generations=int(gens),
        final_strategies=strat if keep_trace else None,
        series=np.vstack([initial, counts]) if keep_trace else None,
    )
