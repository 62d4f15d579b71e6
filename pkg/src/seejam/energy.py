"""Propulsion, antenna-actuation and transmit energy models."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ValidationError


@dataclass(frozen=True)
class RotorcraftPowerParams:
    """Rotary-wing propulsion model parameters (blade/induced/parasite)."""

    p0: float  # blade profile power in hover, W
    p1: float  # induced power in hover, W
    u_tip_sq: float  # squared rotor tip speed, m^2/s^2
    v0: float  # mean rotor induced velocity in hover, m/s
    r_drag: float  # fuselage drag ratio
    rho: float  # air density, kg/m^3
    s: float  # rotor solidity
    a: float  # rotor disc area, m^2

    def __post_init__(self):
        for name in ("p0", "p1", "u_tip_sq", "v0", "r_drag", "rho", "s", "a"):
            if getattr(self, name) <= 0:
                raise ValidationError(f"power parameter {name} must be positive")


@dataclass(frozen=True)
class MAPowerParams:
    """Movable-antenna actuation power/timing parameters."""

    p_base: float  # W
    zeta: float  # W/rad, elevation rotation cost
    xi: float  # W/rad, azimuth rotation cost
    omega_el_max: float = np.pi / 4  # rad/s
    omega_az_max: float = np.pi / 4  # rad/s

    def __post_init__(self):
        for name in ("p_base", "zeta", "xi", "omega_el_max", "omega_az_max"):
            if getattr(self, name) <= 0:
                raise ValidationError(f"MA parameter {name} must be positive")


@dataclass(frozen=True)
class EnergyBreakdown:
    e_prop: np.ndarray  # J per slot
    e_ma: np.ndarray
    e_com: np.ndarray

    @property
    def total_prop(self):
        return float(np.sum(self.e_prop))

    @property
    def total_ma(self):
        return float(np.sum(self.e_ma))

    @property
    def total_com(self):
        return float(np.sum(self.e_com))

    @property
    def total(self):
        return self.total_prop + self.total_ma + self.total_com

    @property
    def per_slot_total(self):
        return self.e_prop + self.e_ma + self.e_com


def propulsion_power(v, p: RotorcraftPowerParams):
    """Rotary-wing propulsion power at level speed v (m/s)."""
    v = float(v)
    if v < 0:
        raise ValidationError("speed must be non-negative")
    blade = p.p0 * (1.0 + 3.0 * v**2 / p.u_tip_sq)
    induced = p.p1 * np.sqrt(np.sqrt(1.0 + v**4 / (4.0 * p.v0**4)) - v**2 / (2.0 * p.v0**2))
    parasite = 0.5 * p.r_drag * p.rho * p.s * p.a * v**3
    return float(blade + induced + parasite)


def induced_energy_aux(delta, dt, v0):
    """Tight value of the induced-power slack: chi such that P1*chi equals the
    induced term's energy for a slot displacement ``delta``."""
    inner = np.sqrt(dt**4 + delta**4 / (4.0 * v0**4)) - delta**2 / (2.0 * v0**2)
    return float(np.sqrt(max(inner, 0.0)))


def rotation_deltas(prev_phi, next_phi):
    """Absolute angular differences (elevation, azimuth) between two slots."""
    return abs(next_phi[0] - prev_phi[0]), abs(next_phi[1] - prev_phi[1])


def ma_power_and_time(prev_phi, next_phi, p: MAPowerParams, dt):
    """Actuation power draw and rotation time for one slot transition.

    ``prev_phi``/``next_phi`` are (phi_x, phi_z) pairs. The rotation time is
    set by the slower axis and capped at the slot duration.
    """
    d_el, d_az = rotation_deltas(prev_phi, next_phi)
    power = p.p_base + p.zeta * d_el + p.xi * d_az
    t = max(d_el / p.omega_el_max, d_az / p.omega_az_max)
    return float(power), float(min(t, dt))


def reachable_angle_box(prev_phi, next_phi, p: MAPowerParams, dt, lo=-np.pi / 2, hi=np.pi / 2):
    """Per-axis feasible interval for a slot's angles given its neighbors.

    Keeps rotations completable within one slot on both adjacent transitions;
    ``next_phi`` may be None for the last slot.
    """
    los = [lo, lo]
    his = [hi, hi]
    for axis, omega in ((0, p.omega_el_max), (1, p.omega_az_max)):
        reach = omega * dt
        los[axis] = max(los[axis], prev_phi[axis] - reach)
        his[axis] = min(his[axis], prev_phi[axis] + reach)
        if next_phi is not None:
            los[axis] = max(los[axis], next_phi[axis] - reach)
            his[axis] = min(his[axis], next_phi[axis] + reach)
    return (los[0], his[0], los[1], his[1])


def total_energy(trajectory, angles, beams, power, ma_power, p_j, dt, include_ma_power=True):
    """Per-slot energy breakdown for a full solution.

    ``trajectory`` is (N+1, 3); ``angles`` (N, 2) with an implicit (0, 0)
    launch attitude before slot 1; ``beams`` (N, N_MA) complex.
    """
    traj = np.asarray(trajectory, dtype=float)
    angles = np.asarray(angles, dtype=float)
    beams = np.asarray(beams)
    n = angles.shape[0]
    speeds = np.linalg.norm(np.diff(traj, axis=0), axis=1) / dt
    e_prop = np.array([propulsion_power(v, power) * dt for v in speeds])
    e_ma = np.zeros(n)
    if include_ma_power:
        prev = (0.0, 0.0)
        for i in range(n):
            pw, t = ma_power_and_time(prev, angles[i], ma_power, dt)
            e_ma[i] = pw * t if t > 0 else 0.0
            prev = tuple(angles[i])
    e_com = p_j * np.sum(np.abs(beams) ** 2, axis=1) * dt
    return EnergyBreakdown(e_prop, e_ma, e_com)
