import csv
import json

import pytest

from rankmod.errors import ConfigError
from rankmod.presets import get_preset
from rankmod.sim import SimConfig, simulate, simulate_preset


def test_deterministic_json():
    a = simulate_preset("q3z2r1-example", headroom=10, trials=20, seed=9).to_json()
    b = simulate_preset("q3z2r1-example", headroom=10, trials=20, seed=9).to_json()
    assert a == b
    c = simulate_preset("q3z2r1-example", headroom=10, trials=20, seed=10).to_json()
    assert json.loads(c)["writes"] != json.loads(a)["writes"]


def test_workers_do_not_change_results():
    a = simulate_preset("q3z2r1-example", headroom=6, trials=8, seed=1).to_json()
    b = simulate_preset("q3z2r1-example", headroom=6, trials=8, seed=1, workers=2).to_json()
    assert a == b


def test_ten_writes_guaranteed():
    rep = simulate_preset("q3z2r1-example", headroom=10, trials=100, seed=0)
    assert min(rep.writes) >= 10
    assert rep.max_cost <= 1
    d = rep.to_dict()
    assert d["schema"] == 1 and d["encode_failures"] == 0


@pytest.mark.parametrize("name,headroom", [("q3z2r1-table", 5), ("q4zw6r1-checksum", 4),
                                           ("q3zw2r1-hash", 4), ("q3z2-uncoded", 6)])
def test_lifetime_lower_bound(name, headroom):
    # each write lifts the top rank by at most r, so headroom/r writes always fit
    rep = simulate_preset(name, headroom=headroom, trials=10, seed=2)
    r = rep.r
    assert rep.max_cost <= r
    assert min(rep.writes) >= headroom // r


def test_coded_outlives_uncoded():
    coded = simulate_preset("q3z2r1-example", headroom=10, trials=1000, seed=3)
    uncoded = simulate_preset("q3z2-uncoded", headroom=10, trials=1000, seed=3)
    assert sum(uncoded.writes) / 1000 < sum(coded.writes) / 1000


def test_ceiling_at_first_write():
    rep = simulate(SimConfig(get_preset("q3z2r1-example"), max_level=2, trials=30, seed=4))
    for t in rep.trials:
        assert t.first_top == 2
        assert all(c == 0 for c in t.costs)


@pytest.mark.parametrize("kw", [{"max_level": 1.5}, {}, {"max_level": 5, "headroom": 2},
                                {"headroom": -1}, {"headroom": 3, "trials": 0}])
def test_config_errors(kw):
    with pytest.raises(ConfigError):
        SimConfig(get_preset("q3z2r1-example"), **kw)


def test_costs_csv(tmp_path):
    rep = simulate_preset("q3z2r1-example", headroom=3, trials=4, seed=5)
    path = tmp_path / "costs.csv"
    rep.write_costs_csv(path)
    rows = list(csv.DictReader(path.open()))
    assert len(rows) == sum(rep.writes)
    assert {r["trial"] for r in rows} <= {"1", "2", "3", "4"}
    hist = rep.cost_histogram
    assert sum(hist.values()) == len(rows)
