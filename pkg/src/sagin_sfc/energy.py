"""Energy accounting for UAVs and satellites.

UAVs pay hover plus movement power every slot and transmit energy per bit
sent; satellites pay a fixed operational cost per slot plus transmit and
receive energy. Compute energy is charged per processed bit on both. The
ledger tracks cumulative spend per node against its budget.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field


def uav_hover_power_w(
    mass_kg: float,
    rotor_radius_m: float,
    rotor_count: int,
    gravity: float = 9.8,
    air_density: float = 1.225,
) -> float:
    """Induced hover power: sqrt(g^3 / (2 pi rho)) * sqrt(m^3 / (r^2 n))."""
    if mass_kg <= 0 or rotor_radius_m <= 0 or rotor_count <= 0:
        raise ValueError("mass, rotor radius and rotor count must be positive")
    theta = math.sqrt(gravity**3 / (2.0 * math.pi * air_density))
    return theta * math.sqrt(mass_kg**3 / (rotor_radius_m**2 * rotor_count))


def uav_move_power_w(speed_mps: float, max_speed_mps: float, max_power_w: float, hover_w: float) -> float:
    """Movement power scales linearly with speed; clamped at zero headroom."""
    if speed_mps < 0 or max_speed_mps <= 0:
        raise ValueError("speeds must be non-negative, max speed positive")
    return (speed_mps / max_speed_mps) * max(max_power_w - hover_w, 0.0)


def uav_slot_energy_j(
    speed_mps: float,
    max_speed_mps: float,
    max_power_w: float,
    hover_w: float,
    displacement_m: float,
    tau_s: float,
) -> float:
    """Propulsion energy for one slot: movement over the displacement plus hover."""
    hover_term = hover_w * tau_s
    if displacement_m <= 0.0 or speed_mps <= 0.0:
        return hover_term
    move_w = uav_move_power_w(speed_mps, max_speed_mps, max_power_w, hover_w)
    return move_w * displacement_m / speed_mps + hover_term


def transfer_energy_j(p_w: float, delta_bits: float, rate_bps: float) -> float:
    """Radio energy for moving delta bits at a given rate: P * delta / r."""
    if rate_bps <= 0:
        raise ValueError("rate must be positive")
    return p_w * delta_bits / rate_bps


def compute_energy_j(sigma_bits: float, e_c_j_per_bit: float) -> float:
    return sigma_bits * e_c_j_per_bit


@dataclass
class EnergyLedger:
    """Cumulative per-node energy spend with itemized entries."""

    budgets: dict  # node_id -> budget J
    spent: dict = field(default_factory=dict)
    entries: dict = field(default_factory=dict)  # node_id -> list[(slot, label, joules)]

    def charge(self, node_id: int, slot: int, label: str, joules: float) -> None:
        if joules < 0:
            raise ValueError("energy charges are non-negative")
        self.spent[node_id] = self.spent.get(node_id, 0.0) + joules
        self.entries.setdefault(node_id, []).append((slot, label, joules))

    def spent_j(self, node_id: int) -> float:
        return self.spent.get(node_id, 0.0)

    def headroom_j(self, node_id: int) -> float:
        return self.budgets.get(node_id, math.inf) - self.spent_j(node_id)

    def feasible(self, node_id: int) -> bool:
        return self.spent_j(node_id) <= self.budgets.get(node_id, math.inf) + 1e-9

    def total_by_label(self, node_id: int, label: str) -> float:
        return sum(j for _, lab, j in self.entries.get(node_id, []) if lab == label)
