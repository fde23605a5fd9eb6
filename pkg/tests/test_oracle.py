"""Exact solver: soundness, witnesses, bounds, and dominance over heuristics."""

from __future__ import annotations

import dataclasses

import numpy as np
import pytest

from sagin_sfc.oracle import (
    DEFAULT_STATE_BUDGET,
    InstanceTooLarge,
    ORACLE_MAX_COMPUTE_NODES,
    ORACLE_MAX_SFCS,
    ORACLE_MAX_SLOTS,
    check_tiny,
    solve_exact,
)
from sagin_sfc.env import SaginEnv
from sagin_sfc.scenario import build_instance, contention_instance
from sagin_sfc.validator import check_schedule, objective_value
from sagin_sfc.workload import SfcRequest

from helpers import G0, G1, corridor_instance, run_random_episode, tiny_run_config


def _corridor(deadline=10):
    return corridor_instance(delta_bits=1e8, sigmas=(4e8,), deadline=deadline)


def test_corridor_optimum_with_clean_witness():
    inst = _corridor()
    optimum, witness = solve_exact(inst)
    assert optimum == 1
    assert check_schedule(witness, inst) == []
    assert objective_value(witness, inst) == 1


def test_solver_is_deterministic():
    a = solve_exact(_corridor())
    b = solve_exact(_corridor())
    assert a[0] == b[0]
    assert a[1].to_jsonl() == b[1].to_jsonl()


def test_tightening_deadlines_never_helps():
    # the corridor needs five slots door to door: wire, process, store, wire
    optima = [solve_exact(_corridor(deadline=d))[0] for d in (3, 4, 5, 6)]
    assert optima == [0, 0, 1, 1]
    assert sorted(optima) == optima  # anti-monotone in the tightening direction


def test_oracle_staggers_contending_chains():
    # two chains whose VNFs cannot share the UAV (6e8 + 6e8 > 8e8): the
    # optimum schedules them back to back and still beats both deadlines
    reqs = [
        SfcRequest(k=1, sigmas_bits=[6e8], delta_bits=1e8, origin=G0, dest=G1,
                   deadline_slots=12),
        SfcRequest(k=2, sigmas_bits=[6e8], delta_bits=1e8, origin=G0, dest=G1,
                   deadline_slots=12),
    ]
    inst = corridor_instance(requests=reqs)
    optimum, witness = solve_exact(inst)
    assert optimum == 2
    assert check_schedule(witness, inst) == []


def test_structural_bounds_enforced():
    base = _corridor()
    too_many = dataclasses.replace(
        base,
        requests=[dataclasses.replace(base.requests[0], k=i + 1) for i in range(4)],
    )
    with pytest.raises(InstanceTooLarge, match="chain"):
        check_tiny(too_many)

    long = corridor_instance(slot_count=21)
    with pytest.raises(InstanceTooLarge, match="slot"):
        check_tiny(long)
    check_tiny(long, step_cap=20)  # a step cap brings it back inside

    cfg = tiny_run_config(np.random.default_rng(0))
    cfg.scenario.uav_count = 5
    cfg.scenario.satellite_count = 0
    cfg.scenario.satellite_orbits = []
    wide = build_instance(cfg, 0)
    with pytest.raises(InstanceTooLarge, match="compute nodes"):
        check_tiny(wide)

    assert (ORACLE_MAX_SFCS, ORACLE_MAX_COMPUTE_NODES, ORACLE_MAX_SLOTS) == (3, 4, 20)


def test_state_budget_exhaustion_raises():
    with pytest.raises(InstanceTooLarge, match="state budget"):
        solve_exact(contention_instance(), state_budget=50)
    assert DEFAULT_STATE_BUDGET == 2_000_000


def test_no_random_policy_beats_the_oracle():
    for seed in range(10):
        cfg = tiny_run_config(np.random.default_rng(seed))
        inst = build_instance(cfg, seed)
        optimum, witness = solve_exact(inst)
        assert check_schedule(witness, inst) == []
        assert objective_value(witness, inst) == optimum
        env = SaginEnv(inst)
        for trial in range(3):
            achieved = run_random_episode(env, np.random.default_rng(seed * 31 + trial))
            assert achieved <= optimum
