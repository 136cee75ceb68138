"""Parameter sweeps over many seeded realizations, and the catalog of experiments."""

from __future__ import annotations

import csv
import io
import logging
import os
import statistics
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
from typing import Iterable

import numpy as np

from qinvasion.errors import ConfigError
from qinvasion.evodyn import CaseSpec, RunConfig, run
from qinvasion.games import SWEEP_VARIABLE, default_grid, make_payoffs
from qinvasion.netgen import NetworkSpec
from qinvasion.quantum import Strategy, as_strategy
from qinvasion.seeding import derive_seed

log = logging.getLogger(__name__)

CSV_COLUMNS = ("scenario", "network", "game", "param", "strategy",
               "mean_fraction", "stddev", "runs", "converged_share")


@dataclass(frozen=True)
class ScenarioConfig:
    name: str
    template: RunConfig
    grid: tuple[float, ...]
    runs: int = 100
    base_seed: int = 0

    @property
    def variable(self) -> str:
        return SWEEP_VARIABLE[self.template.game.upper()]

    def validate(self) -> "ScenarioConfig":
        if self.runs < 1:
            raise ConfigError(f"runs must be >= 1, got {self.runs!r}")
        if not self.grid:
            raise ConfigError("grid must contain at least one value")
        for value in self.grid:
            make_payoffs(self.template.game, value)
        replace(self.template, param=self.grid[0]).validate()
        return self

    def seeds(self) -> list[list[int]]:
        seeds = [[derive_seed(self.base_seed, g, k) for k in range(self.runs)]
                 for g in range(len(self.grid))]
        flat = [s for row in seeds for s in row]
        if len(set(flat)) != len(flat):
            raise ConfigError(f"seed collision in scenario {self.name!r}")
        return seeds


@dataclass(frozen=True)
class SweepResult:
    scenario: str
    network: str
    game: str
    grid: tuple[float, ...]
    strategies: tuple[Strategy, ...]
    mean: np.ndarray  # (grid point, strategy)
    std: np.ndarray
    converged_share: np.ndarray
    runs: int
    fractions: np.ndarray | None = field(default=None, repr=False)  # (grid point, run, strategy)

    def column(self, s: Strategy | str, stat: str = "mean") -> np.ndarray:
        k = self.strategies.index(as_strategy(s))
        return getattr(self, stat)[:, k]

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(CSV_COLUMNS)
        for g, value in enumerate(self.grid):
            for k, s in enumerate(self.strategies):
                w.writerow((self.scenario, self.network, self.game, _fmt(value), str(s),
                            _fmt(self.mean[g, k]), _fmt(self.std[g, k]), self.runs,
                            _fmt(self.converged_share[g])))
        return buf.getvalue()

    def write_csv(self, path: str | os.PathLike) -> None:
        with open(path, "w", newline="") as fh:
            fh.write(self.to_csv())


def _fmt(x: float) -> str:
    return format(float(x), ".17g")


def read_sweep_csv(text: str) -> list[dict]:
    rows = list(csv.DictReader(io.StringIO(text)))
    for row in rows:
        for key in ("param", "mean_fraction", "stddev", "converged_share"):
            row[key] = float(row[key])
        row["runs"] = int(row["runs"])
    return rows


def _run_task(task: tuple[RunConfig, float, int]) -> tuple[tuple[float, ...], bool]:
    template, value, seed = task
    result = run(template.with_param(value, seed))
    return result.mean_fractions, result.converged


def run_ensemble(sc: ScenarioConfig, workers: int = 1, progress=None) -> SweepResult:
    """Run every (grid point, run index) realization and aggregate per grid point.

    Each realization gets its own seed derived from (base seed, grid index,
    run index) and its own network, so the result does not depend on
    ``workers``.
    """
    sc.validate()
    seeds = sc.seeds()
    tasks = [(sc.template, value, seeds[g][k])
             for g, value in enumerate(sc.grid) for k in range(sc.runs)]
    index = [(g, k) for g in range(len(sc.grid)) for k in range(sc.runs)]
    n_strat = len(sc.template.case.strategies)
    fractions = np.empty((len(sc.grid), sc.runs, n_strat))
    converged = np.zeros((len(sc.grid), sc.runs), dtype=bool)

    if workers <= 1:
        outputs: Iterable = map(_run_task, tasks)
        pool = None
    else:
        pool = ProcessPoolExecutor(max_workers=workers)
        outputs = pool.map(_run_task, tasks, chunksize=max(1, len(tasks) // (8 * workers)))
    try:
        for (g, k), out in zip(index, _labelled(outputs, sc, index)):
            fractions[g, k], converged[g, k] = out
            if progress is not None and k == sc.runs - 1:
                progress(g)
    finally:
        if pool is not None:
            pool.shutdown(cancel_futures=True)

    mean = fractions.mean(axis=1)
    std = fractions.std(axis=1)
    log.info("scenario %s: %d runs over %d grid points", sc.name, sc.runs, len(sc.grid))
    return SweepResult(
        scenario=sc.name,
        network=sc.template.network.kind,
        game=sc.template.game.upper(),
        grid=tuple(sc.grid),
        strategies=sc.template.case.strategies,
        mean=mean,
        std=std,
        converged_share=converged.mean(axis=1),
        runs=sc.runs,
        fractions=fractions,
    )


def _labelled(outputs, sc, index):
    it = iter(outputs)
    for g, k in index:
        try:
            yield next(it)
        except StopIteration:
            return
        except Exception as exc:
            raise RuntimeError(f"scenario {sc.name!r}: run failed at grid point "
                               f"{sc.grid[g]} (index {g}), run {k}: {exc}") from exc


@dataclass(frozen=True)
class VarianceReport:
    grid: tuple[float, ...]
    ratios: tuple[float | str, ...]  # "degenerate" where the denominator stddev is zero
    median: float | None


DEGENERATE = "degenerate"


def variance_comparison(a: SweepResult, b: SweepResult,
                        strategy: Strategy | str | None = None) -> VarianceReport:
    """Per-grid-point ratio of across-run stddevs of one strategy's fraction, a over b."""
    if tuple(a.grid) != tuple(b.grid):
        raise ConfigError("variance comparison needs identical grids")
    if strategy is None:
        strategy = "Q" if any(s.name == "Q" for s in a.strategies) else "H"
    sa, sb = a.column(strategy, "std"), b.column(strategy, "std")
    ratios: list[float | str] = []
    for x, y in zip(sa, sb):
        ratios.append(DEGENERATE if y == 0 else float(x / y))
    numeric = [r for r in ratios if r != DEGENERATE]
    median = statistics.median(numeric) if numeric else None
    return VarianceReport(tuple(a.grid), tuple(ratios), median)


# -- catalog ---------------------------------------------------------------

FULL_SCALE = dict(side=50, max_generations=10_000, runs=100)
DESK_SCALE = dict(side=20, max_generations=2000, runs=20)

_NETS = ("RL", "NW", "SF")
_GAMES = ("PD", "SD", "SH")


def _template(net: str, game: str, case: CaseSpec, scale: dict) -> RunConfig:
    return RunConfig(
        network=NetworkSpec(kind=net, side=scale["side"], p_nw=0.5, m0=3, m=2),
        game=game,
        param=default_grid(game)[0],
        case=case,
        max_generations=scale["max_generations"],
    )


def scenario_catalog(desk_scale: bool = False) -> dict[str, ScenarioConfig]:
    """Every named experiment, keyed by name, at full or desk scale."""
    scale = DESK_SCALE if desk_scale else FULL_SCALE
    catalog: dict[str, ScenarioConfig] = {}

    def add(name: str, net: str, game: str, case: CaseSpec) -> None:
        catalog[name] = ScenarioConfig(
            name=name,
            template=_template(net, game, case, scale),
            grid=default_grid(game),
            runs=scale["runs"],
            base_seed=derive_seed(*name.encode()),
        )

    for c in (1, 2):
        for game in _GAMES:
            for net in _NETS:
                add(f"case{c}-{game.lower()}-{net.lower()}", net, game, CaseSpec(c))
    for c, invader in ((1, "H"), (2, "Q")):
        for rank in (1, 2, 3):
            for game in _GAMES:
                add(f"case{c}-sf-hub{rank}-{game.lower()}", "SF", game,
                    CaseSpec(c, hub_override=(rank, invader)))
    raised = [(1, 25, (0.25, 0.50, 0.25))]
    raised += [(2, pct, (0.49 - pct / 100 + 0.01, 0.49, 0.01, pct / 100)) for pct in (10, 20, 25)]
    for c, pct, fractions in raised:
        fractions = tuple(round(f, 10) for f in fractions)
        invader = "Q" if c == 2 else "H"
        for game in _GAMES:
            for net in _NETS:
                hub = (1, invader) if net == "SF" else None
                add(f"case{c}-frac{pct}-{game.lower()}-{net.lower()}", net, game,
                    CaseSpec(c, fractions=fractions, hub_override=hub))
    return catalog
