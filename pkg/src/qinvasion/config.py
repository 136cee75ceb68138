"""YAML experiment files.

A file describes one run (``game.param``) and, optionally, a sweep over
``grid`` with ``runs`` realizations per value. Unknown keys are rejected and
every value is checked before anything executes. See configs/example.yaml.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from pathlib import Path

import yaml

from qinvasion.ensemble import ScenarioConfig
from qinvasion.errors import ConfigError, DomainError
from qinvasion.evodyn import CaseSpec, RunConfig
from qinvasion.games import default_grid, make_payoffs
from qinvasion.netgen import NetworkSpec
from qinvasion.quantum import HALF_PI

_TOP = {"name", "network", "game", "case", "fractions", "hub_override", "omega",
        "max_generations", "measure_window", "freeze_window", "runs", "seed", "grid", "output"}
_NETWORK = {"kind", "side", "p_nw", "m0", "m", "n"}
_GAME = {"kind", "param"}
_HUB = {"rank", "strategy"}


@dataclass(frozen=True)
class ConfigFile:
    name: str
    run: RunConfig
    grid: tuple[float, ...]
    runs: int
    output: str | None

    def scenario(self, base_seed: int | None = None) -> ScenarioConfig:
        seed = self.run.seed if base_seed is None else base_seed
        return ScenarioConfig(self.name, self.run, self.grid, self.runs, seed)


def _mapping(value, where: str) -> dict:
    if not isinstance(value, dict):
        raise ConfigError(f"{where} must be a mapping")
    return value


def _reject_unknown(d: dict, allowed: set[str], where: str) -> None:
    extra = sorted(set(d) - allowed)
    if extra:
        raise ConfigError(f"unknown key(s) in {where}: {', '.join(map(str, extra))}")


def _int(value, where: str) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise ConfigError(f"{where} must be an integer, got {value!r}")
    return value


def _float(value, where: str) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)) or not math.isfinite(value):
        raise ConfigError(f"{where} must be a finite number, got {value!r}")
    return float(value)


def parse_config(doc) -> ConfigFile:
    doc = _mapping(doc, "config")
    _reject_unknown(doc, _TOP, "config")

    net = _mapping(doc.get("network", {}), "network")
    _reject_unknown(net, _NETWORK, "network")
    spec = NetworkSpec(
        kind=str(net.get("kind", "RL")).upper(),
        side=_int(net.get("side", 50), "network.side"),
        p_nw=_float(net.get("p_nw", 0.5), "network.p_nw"),
        m0=_int(net.get("m0", 3), "network.m0"),
        m=_int(net.get("m", 2), "network.m"),
        n=None if net.get("n") is None else _int(net["n"], "network.n"),
    )

    game = _mapping(doc.get("game", {}), "game")
    _reject_unknown(game, _GAME, "game")
    kind = str(game.get("kind", "PD")).upper()
    grid_raw = doc.get("grid")
    if grid_raw is None:
        grid = default_grid(kind)
    elif isinstance(grid_raw, list) and grid_raw:
        grid = tuple(_float(v, "grid") for v in grid_raw)
    else:
        raise ConfigError("grid must be a non-empty list of numbers")
    param = _float(game.get("param", grid[0]), "game.param")

    fractions = doc.get("fractions")
    if fractions is not None:
        if not isinstance(fractions, list):
            raise ConfigError("fractions must be a list of numbers")
        fractions = tuple(_float(f, "fractions") for f in fractions)
    hub = doc.get("hub_override")
    if hub is not None:
        hub = _mapping(hub, "hub_override")
        _reject_unknown(hub, _HUB, "hub_override")
        if "rank" not in hub or "strategy" not in hub:
            raise ConfigError("hub_override needs both rank and strategy")
        hub = (_int(hub["rank"], "hub_override.rank"), str(hub["strategy"]))
    case = CaseSpec(_int(doc.get("case", 1), "case"), fractions, hub)

    run = RunConfig(
        network=spec,
        game=kind,
        param=param,
        case=case,
        omega=_float(doc.get("omega", HALF_PI), "omega"),
        max_generations=_int(doc.get("max_generations", 10_000), "max_generations"),
        measure_window=_int(doc.get("measure_window", 1000), "measure_window"),
        freeze_window=_int(doc.get("freeze_window", 500), "freeze_window"),
        seed=_int(doc.get("seed", 0), "seed"),
    )
    runs = _int(doc.get("runs", 100), "runs")
    if runs < 1:
        raise ConfigError(f"runs must be >= 1, got {runs}")
    try:
        run.validate()
        for value in grid:
            make_payoffs(kind, value)
    except DomainError as exc:
        raise ConfigError(str(exc)) from None
    if run.seed < 0:
        raise ConfigError(f"seed must be non-negative, got {run.seed}")
    output = doc.get("output")
    return ConfigFile(str(doc.get("name", "custom")), run, grid, runs,
                      None if output is None else str(output))


def load_config(path: str | Path) -> ConfigFile:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc.strerror}") from None
    try:
        doc = yaml.safe_load(text)
    except yaml.YAMLError as exc:
        raise ConfigError(f"cannot parse config {path}: {exc}") from None
    return parse_config(doc if doc is not None else {})
