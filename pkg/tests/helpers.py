"""Shared builders for the test suite.

Two families of fixtures-by-function live here: a three-node corridor
(ground -> UAV -> ground) whose every rate and duration can be read off the
instance for exact step-level assertions, and randomized tiny instances
small enough for the exhaustive solver.
"""

from __future__ import annotations

import numpy as np

from sagin_sfc.channel import LinkRateTable, RadioConstants
from sagin_sfc.config import RunConfig
from sagin_sfc.scenario import _instance_from_parts
from sagin_sfc.topology import NodeKind, NodeSpec, build_rteg
from sagin_sfc.workload import SfcRequest

G0, U1, G1 = 0, 1, 2


def corridor_instance(
    delta_bits: float = 2e8,
    sigmas=(4e8,),
    deadline: int = 10,
    slot_count: int = 12,
    uav_storage_bits: float = 8e9,
    e_max_uav_j: float = 8e4,
    requests: list | None = None,
):
    """One hovering UAV between two ground stations, everything else stock."""
    cfg = RunConfig()
    cfg.scenario.slot_count = slot_count
    cfg.scenario.uav_count = 1
    cfg.scenario.satellite_count = 0
    cfg.scenario.satellite_orbits = []
    cfg.radio.n0_dbm_per_hz = -160.0
    cfg.energy.e_max_uav_j = e_max_uav_j
    sc = cfg.scenario
    nodes = [
        NodeSpec(node_id=G0, kind=NodeKind.GROUND),
        NodeSpec(
            node_id=U1,
            kind=NodeKind.UAV,
            compute_capacity_bits=sc.uav_compute_capacity_bits,
            compute_rate_bps=sc.uav_compute_rate_bps,
            storage_bits=uav_storage_bits,
            energy_budget_j=e_max_uav_j,
            mass_kg=sc.uav_mass_kg,
            rotor_radius_m=sc.uav_rotor_radius_m,
            rotor_count=sc.uav_rotor_count,
            max_speed_mps=sc.uav_max_speed_mps,
            max_power_w=sc.uav_max_power_w,
        ),
        NodeSpec(node_id=G1, kind=NodeKind.GROUND),
    ]
    positions = np.zeros((3, slot_count, 3))
    positions[G0, :] = [0.0, 0.0, 0.0]
    positions[U1, :] = [100.0, 0.0, 100.0]
    positions[G1, :] = [200.0, 0.0, 0.0]
    rteg = build_rteg(nodes, positions, slot_count, sc.slot_seconds, sc.range_limits)
    rates = LinkRateTable(rteg, RadioConstants.from_config(cfg.radio))
    if requests is None:
        requests = [
            SfcRequest(k=1, sigmas_bits=list(sigmas), delta_bits=delta_bits,
                       origin=G0, dest=G1, deadline_slots=deadline)
        ]
    return _instance_from_parts(rteg, rates, requests, cfg)


CORRIDOR_PLAN = {1: [(G0, 0), (U1, 1), (G1, 1)]}


def tiny_run_config(rng: np.random.Generator) -> RunConfig:
    """Random instance inside the exhaustive solver's comfort zone.

    Two ground stations plus at most two aerial/orbital nodes (four nodes
    total).  The joint-action branching grows as (nodes per chain)^chains,
    so more chains buy fewer compute nodes and a shorter horizon.
    """
    cfg = RunConfig()
    chains = int(rng.integers(1, 4))
    if chains == 3:
        uavs, sats = 1, 0
        cfg.scenario.slot_count = int(rng.integers(6, 9))
    else:
        uavs = int(rng.integers(1, 3))
        sats = int(rng.integers(0, 2)) if uavs == 1 else 0
        cfg.scenario.slot_count = int(rng.integers(6, 10))
    cfg.scenario.uav_count = uavs
    cfg.scenario.satellite_count = sats
    cfg.scenario.satellite_orbits = cfg.scenario.satellite_orbits[:sats]
    cfg.radio.n0_dbm_per_hz = -160.0
    w = cfg.workload
    w.count = chains
    w.vnf_min, w.vnf_max = 1, 2
    w.data_min_bits, w.data_max_bits = 5e7, 1.2e8
    w.sigma_min_bits, w.sigma_max_bits = 1e8, 4e8
    w.deadline_min_slots = 5
    w.deadline_max_slots = min(8, cfg.scenario.slot_count)
    return cfg


def random_policy_actions(env, rng: np.random.Generator) -> dict:
    actions = {}
    for k in env.active_sfcs():
        valid = np.flatnonzero(env.action_mask(k))
        actions[k] = int(valid[rng.integers(valid.size)])
    return actions


def run_random_episode(env, rng: np.random.Generator) -> int:
    env.reset()
    while not env.episode_over:
        env.step(random_policy_actions(env, rng))
    return env.objective()
