import json
import os

import pytest

import rtsec

DATA = os.environ.get("RTSEC_DATA", os.path.join(os.path.dirname(__file__), "..", "..", "data"))


def tripwire():
    return rtsec.load_taskset(os.path.join(DATA, "tripwire_example.json"))


def test_response_times_match_hand_values():
    ts = rtsec.TaskSet([rtsec.RtTask("a", 2, 4), rtsec.RtTask("b", 2, 8)], [])
    ok, w = rtsec.response_times(ts)
    assert ok
    assert w == [2.0, 4.0]


def test_co_optimize_bundled_example():
    ts = tripwire()
    sol = rtsec.co_optimize(ts)
    assert sol.schedulable
    assert len(sol.periods) == len(ts.sec_tasks)
    for p, s in zip(sol.periods, ts.sec_tasks):
        assert s.t_des - 1e-9 <= p <= s.t_max + 1e-9
    assert 0 < sol.server.capacity <= sol.server.period
    doc = json.loads(rtsec.solution_json(ts, sol))
    assert doc["schedulable"] is True

    trace = rtsec.simulate(ts, sol.server, sol.periods, horizon=20000.0)
    assert trace["rt_misses"] == 0
    assert trace["sec_misses"] == 0


def test_oracle_bandwidth_is_at_least_gp():
    ts = tripwire()
    sol = rtsec.co_optimize(ts)
    best = rtsec.exhaustive_search(ts, sol.periods, p_max=600.0, granularity=1.0)
    assert best is not None
    assert best.utilization >= sol.server.utilization - 0.01


def test_generate_is_deterministic():
    a = rtsec.generate(rtsec.derive_seed(5, 0))
    b = rtsec.generate(rtsec.derive_seed(5, 0))
    assert a.to_json() == b.to_json()
    assert 0.31 < a.rt_utilization() <= 0.4 + 1e-12


def test_invalid_input_raises():
    with pytest.raises(rtsec.InputError):
        rtsec.parse_taskset('{"rt_tasks":[{"name":"a","wcet":-1,"period":4}],"sec_tasks":[]}')
    with pytest.raises(ValueError):
        rtsec.TaskSet([rtsec.RtTask("a", 5, 4)], [])


def test_cli_in_process():
    code, out, _ = rtsec.run_cli(["analyze", os.path.join(DATA, "tripwire_example.json")])
    assert code == 0
    assert "verdict: schedulable" in out
    code, _, _ = rtsec.run_cli(["analyze", "/nonexistent.json"])
    assert code == 2
