import math

import numpy as np
import pytest

from qinvasion import ensemble
from qinvasion.ensemble import (
    CSV_COLUMNS,
    DEGENERATE,
    ScenarioConfig,
    SweepResult,
    read_sweep_csv,
    run_ensemble,
    scenario_catalog,
    variance_comparison,
)
from qinvasion.errors import ConfigError
from qinvasion.evodyn import CaseSpec, RunConfig, run
from qinvasion.netgen import NetworkSpec
from qinvasion.quantum import C, D, H, Q


def tiny_scenario(**kw):
    template = RunConfig(network=NetworkSpec("NW", side=8), game="SD", param=0.3, case=CaseSpec(2),
                         max_generations=150, measure_window=50, freeze_window=30)
    base = dict(name="tiny", template=template, grid=(0.2, 0.5, 0.9), runs=4, base_seed=11)
    base.update(kw)
    return ScenarioConfig(**base)


def test_singleton_ensemble_equals_run():
    sc = tiny_scenario(grid=(0.4,), runs=1)
    res = run_ensemble(sc)
    single = run(sc.template.with_param(0.4, sc.seeds()[0][0]))
    np.testing.assert_array_equal(res.mean[0], single.mean_fractions)
    np.testing.assert_array_equal(res.std[0], 0.0)
    assert res.converged_share[0] == float(single.converged)


def test_reproducible_across_worker_counts():
    sc = tiny_scenario()
    a = run_ensemble(sc, workers=1).to_csv()
    b = run_ensemble(sc, workers=1).to_csv()
    c = run_ensemble(sc, workers=3).to_csv()
    assert a == b == c


def test_seeds_distinct_and_collision_detected(monkeypatch):
    sc = tiny_scenario(runs=50)
    flat = [s for row in sc.seeds() for s in row]
    assert len(set(flat)) == len(flat)
    monkeypatch.setattr(ensemble, "derive_seed", lambda *parts: 42)
    with pytest.raises(ConfigError, match="collision"):
        sc.seeds()


def test_aggregation_matches_two_pass_reference():
    res = run_ensemble(tiny_scenario(runs=6))
    for g in range(len(res.grid)):
        for k in range(len(res.strategies)):
            xs = [float(x) for x in res.fractions[g, :, k]]
            mean = sum(xs) / len(xs)
            var = sum((x - mean) ** 2 for x in xs) / len(xs)
            assert abs(res.mean[g, k] - mean) < 1e-12
            assert abs(res.std[g, k] - math.sqrt(var)) < 1e-12
        assert abs(res.mean[g].sum() - 1) < 1e-9


def test_run_failure_names_grid_point(monkeypatch):
    real = ensemble.run

    def flaky(cfg, **kw):
        if cfg.param == 0.5:
            raise RuntimeError("boom")
        return real(cfg, **kw)

    monkeypatch.setattr(ensemble, "run", flaky)
    with pytest.raises(RuntimeError, match=r"grid point 0.5 \(index 1\), run 0"):
        run_ensemble(tiny_scenario())


def test_invalid_grid_rejected():
    with pytest.raises(Exception, match="r must"):
        run_ensemble(tiny_scenario(grid=(0.5, 1.5)))
    with pytest.raises(ConfigError):
        run_ensemble(tiny_scenario(runs=0))


def test_csv_round_trip():
    res = run_ensemble(tiny_scenario())
    text = res.to_csv()
    assert text.splitlines()[0] == ",".join(CSV_COLUMNS)
    rows = read_sweep_csv(text)
    assert len(rows) == len(res.grid) * len(res.strategies)
    for row in rows:
        g = res.grid.index(row["param"])
        k = [str(s) for s in res.strategies].index(row["strategy"])
        assert row["mean_fraction"] == res.mean[g, k]
        assert row["stddev"] == res.std[g, k]
        assert row["runs"] == 4
        assert row["scenario"] == "tiny" and row["network"] == "NW" and row["game"] == "SD"


def _result(std_q, grid=(1.0, 2.0, 3.0)):
    g = len(grid)
    mean = np.tile([0.25, 0.25, 0.25, 0.25], (g, 1))
    std = np.zeros((g, 4))
    std[:, 3] = std_q
    return SweepResult("x", "SF", "PD", grid, (C, D, H, Q), mean, std, np.zeros(g), 10)


def test_variance_comparison():
    a = _result([0.1, 0.2, 0.3])
    rep = variance_comparison(a, a)
    assert rep.ratios == (1.0, 1.0, 1.0) and rep.median == 1.0
    rep = variance_comparison(_result([0.05, 0.0, 0.3]), _result([0.1, 0.2, 0.0]))
    assert rep.ratios == (0.5, 0.0, DEGENERATE)
    assert rep.median == 0.25
    with pytest.raises(ConfigError):
        variance_comparison(a, _result([0.1, 0.2], grid=(1.0, 2.0)))


def test_catalog_contents():
    cat = scenario_catalog()
    assert len(cat) == 18 + 18 + 36
    sc = cat["case1-pd-rl"]
    t = sc.template
    assert (t.network.kind, t.network.side, t.game, t.case.case) == ("RL", 50, "PD", 1)
    assert sc.runs == 100 and t.max_generations == 10_000 and t.measure_window == 1000
    assert t.freeze_window == 500 and sc.grid[0] == 1.05 and sc.grid[-1] == 2.0

    sc = cat["case2-sf-hub1-sd"]
    assert sc.template.network.kind == "SF" and sc.template.game == "SD"
    assert sc.template.case.hub_override == (1, "Q")
    assert sc.template.network.m0 == 3 and sc.template.network.m == 2

    sc = cat["case1-frac25-sh-sf"]
    assert sc.template.case.initial_fractions == (0.25, 0.5, 0.25)
    assert sc.template.case.hub_override == (1, "H")
    assert cat["case2-frac10-pd-rl"].template.case.initial_fractions == (0.4, 0.49, 0.01, 0.1)
    assert cat["case2-frac20-pd-nw"].template.case.initial_fractions == (0.3, 0.49, 0.01, 0.2)
    assert cat["case2-frac25-pd-nw"].template.case.hub_override is None
    assert cat["case2-pd-nw"].template.network.p_nw == 0.5

    seeds = {s.base_seed for s in cat.values()}
    assert len(seeds) == len(cat)
    for s in cat.values():
        s.validate()


def test_desk_preset():
    sc = scenario_catalog(desk_scale=True)["case1-sd-sf"]
    assert sc.template.network.side == 20 and sc.template.network.nodes == 400
    assert sc.template.max_generations == 2000 and sc.runs == 20
    assert sc.base_seed == scenario_catalog()["case1-sd-sf"].base_seed
