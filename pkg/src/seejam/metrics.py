"""SINR, secrecy rates and the secrecy-energy-efficiency objective.

``SeeEvaluator`` precomputes the static link quantities; ``Evaluation``
caches per-slot rate/energy contributions so single-slot angle or beam
trials cost O(1) slots instead of a full re-evaluation. Both evaluation
modes for the eavesdropper bound are supported:

* ``paper``  - pure path-gain bounds on both eve links (no array factors);
* ``rigorous`` - BS array factor upper bound (N_B) on the eve's signal and a
  grid lower bound on the jamming beam gain over the uncertainty disc, which
  dominates the brute-force worst-case rate on the same grid.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import kernels
from .channel import (
    BS_ORIENTATION,
    channel,
    directions_to,
    eve_grid,
    min_eve_beam_gain,
    rotated_elements,
    worst_case_eve_gains,
)
from .energy import total_energy
from .errors import DegenerateGeometryError, ValidationError
from .geometry import PHI_MAX, PHI_MIN, Orientation, wavenumber

MODES = ("paper", "rigorous")


@dataclass
class SolutionState:
    """Trajectory waypoints, panel angles and jamming beams for all slots."""

    trajectory: np.ndarray  # (N+1, 3), [0] = q_i, [N] = q_f
    angles: np.ndarray  # (N, 2) = (phi_x, phi_z) per slot
    beams: np.ndarray  # (N, N_MA) complex, ||w|| <= 1

    def copy(self):
        return SolutionState(self.trajectory.copy(), self.angles.copy(), self.beams.copy())

    def orientation(self, n):
        return Orientation(float(self.angles[n, 0]), float(self.angles[n, 1]))


def validate_state(state: SolutionState, sc, tol=1e-9):
    """Raise if the state violates endpoint, speed, angle-box or beam-norm limits."""
    traj = state.trajectory
    if traj.shape != (sc.n_step + 1, 3):
        raise ValidationError(f"trajectory shape {traj.shape} != {(sc.n_step + 1, 3)}")
    if np.linalg.norm(traj[0] - sc.q_i) > tol or np.linalg.norm(traj[-1] - sc.q_f) > tol:
        raise ValidationError("trajectory endpoints do not match q_i / q_f")
    steps = np.linalg.norm(np.diff(traj, axis=0), axis=1)
    cap = sc.v_max * sc.dt + tol
    if np.any(steps > cap):
        raise ValidationError(f"slot displacement {steps.max():.6f} exceeds v_max*dt")
    if np.any(state.angles < PHI_MIN - tol) or np.any(state.angles > PHI_MAX + tol):
        raise ValidationError("panel angles outside [-pi/2, pi/2]")
    norms = np.linalg.norm(state.beams, axis=1)
    if np.any(norms > 1.0 + tol):
        raise ValidationError(f"beam norm {norms.max():.6f} exceeds 1")


def mrt_beam(h):
    """Maximum-ratio beamformer w = h / ||h||."""
    h = np.asarray(h)
    nrm = float(np.linalg.norm(h))
    if nrm <= 0:
        raise DegenerateGeometryError("cannot take MRT of a zero channel")
    return h / nrm


def sinr(p_sig, h_sig, w_sig, p_int, h_int, w_int, sigma2):
    """gamma = P_s |h_s^H w_s|^2 / (P_i |h_i^H w_i|^2 + sigma2)."""
    num = p_sig * np.abs(np.vdot(h_sig, w_sig)) ** 2
    den = p_int * np.abs(np.vdot(h_int, w_int)) ** 2 + sigma2
    return float(num / den)


@dataclass(frozen=True)
class SEEReport:
    sum_secrecy: float  # bit/s/Hz summed over slots
    total_energy: float  # J
    see: float  # bit/Hz/J
    per_slot: np.ndarray  # columns: r_sec, r_u, r_e_bound, e_prop, e_ma, e_com


class SeeEvaluator:
    """Caches static link quantities and evaluates states incrementally."""

    def __init__(self, sc, mode="paper", include_ma_power=True):
        if mode not in MODES:
            raise ValidationError(f"unknown bound mode {mode!r}")
        self.sc = sc
        self.mode = mode
        self.include_ma_power = include_ma_power
        self.k = wavenumber(sc.f_hz)
        self.ma_geom = sc.ma_geometry
        # BS transmits MRT toward the (static) legitimate user.
        h_bu = channel(sc.q_b, sc.q_u, BS_ORIENTATION, sc.bs_geometry, sc.alpha_bu, sc.f_hz)
        self.w_b = mrt_beam(h_bu.gain)
        self.s_u = sc.p_b * np.abs(np.vdot(h_bu.gain, self.w_b)) ** 2
        # BS->eve worst-case path gain is position-independent.
        self.h_be, _ = worst_case_eve_gains(sc.q_i, sc)
        self.s_e = sc.p_b * self.h_be * (sc.n_b if mode == "rigorous" else 1.0)

    # --- per-slot pieces -------------------------------------------------

    def user_jam_power(self, q, phi, w):
        o = Orientation(float(phi[0]), float(phi[1]))
        h_ju = channel(q, self.sc.q_u, o, self.ma_geom, self.sc.alpha_ju, self.sc.f_hz)
        return self.sc.p_j * np.abs(np.vdot(h_ju.gain, w)) ** 2

    def eve_jam_power(self, q, phi, w):
        """Lower bound on the jamming power at the worst-case eve position."""
        _, h_je = worst_case_eve_gains(q, self.sc)
        if self.mode == "paper":
            return self.sc.p_j * h_je
        o = Orientation(float(phi[0]), float(phi[1]))
        gmin = min_eve_beam_gain(q, o, w, self.sc)
        return self.sc.p_j * h_je * gmin

    def eve_steering_matrix(self, q, phi):
        """exp(j phases) over the disc grid; reusable across beam trials."""
        o = Orientation(float(phi[0]), float(phi[1]))
        pts = eve_grid(self.sc, self.sc.gain_grid_res)
        dirs = directions_to(pts, q)
        phases = self.k * (dirs @ rotated_elements(self.ma_geom, o))
        return np.exp(1j * phases)

    def slot_rate(self, q, phi, w, eve_matrix=None):
        """(r_sec, r_u, r_e_bound) for one slot."""
        j_u = self.user_jam_power(q, phi, w)
        r_u = np.log2(1.0 + self.s_u / (self.sc.sigma2_u + j_u))
        if eve_matrix is not None and self.mode == "rigorous":
            _, h_je = worst_case_eve_gains(q, self.sc)
            gmin = float(np.min(np.abs(eve_matrix @ np.conj(w)) ** 2))
            j_e = self.sc.p_j * h_je * gmin
        else:
            j_e = self.eve_jam_power(q, phi, w)
        r_e = np.log2(1.0 + self.s_e / (self.sc.sigma2_e + j_e))
        r_bar = float(r_u - r_e)
        return max(0.0, r_bar), float(r_u), float(r_e)

    def unclipped_slot_rate(self, q, phi, w):
        _, r_u, r_e = self.slot_rate(q, phi, w)
        return r_u - r_e

    # --- full and incremental evaluation ---------------------------------

    def evaluate(self, state: SolutionState):
        sc = self.sc
        n = sc.n_step
        r_sec = np.zeros(n)
        r_u = np.zeros(n)
        r_e = np.zeros(n)
        for i in range(n):
            r_sec[i], r_u[i], r_e[i] = self.slot_rate(
                state.trajectory[i + 1], state.angles[i], state.beams[i]
            )
        energy = total_energy(
            state.trajectory, state.angles, state.beams, sc.power, sc.ma_power,
            sc.p_j, sc.dt, self.include_ma_power,
        )
        return Evaluation(self, state, r_sec, r_u, r_e, energy)

    def see(self, state: SolutionState):
        return self.evaluate(state).see


class Evaluation:
    """A state plus its cached per-slot contributions."""

    def __init__(self, ev: SeeEvaluator, state, r_sec, r_u, r_e, energy):
        self.ev = ev
        self.state = state
        self.r_sec = r_sec
        self.r_u = r_u
        self.r_e = r_e
        self.energy = energy

    @property
    def sum_secrecy(self):
        return float(np.sum(self.r_sec))

    @property
    def total_energy(self):
        return self.energy.total

    @property
    def see(self):
        return self.sum_secrecy * self.ev.sc.dt / self.total_energy

    def report(self) -> SEEReport:
        per_slot = np.column_stack(
            [self.r_sec, self.r_u, self.r_e,
             self.energy.e_prop, self.energy.e_ma, self.energy.e_com]
        )
        return SEEReport(self.sum_secrecy, self.total_energy, self.see, per_slot)

    # --- O(1)-slot trials -------------------------------------------------

    def _ma_energy_around(self, n, angles):
        """MA energies of transitions into slots n and n+1 for given angles."""
        from .energy import ma_power_and_time

        sc = self.ev.sc
        if not self.ev.include_ma_power:
            return 0.0, 0.0
        prev = angles[n - 1] if n > 0 else np.zeros(2)
        pw, t = ma_power_and_time(prev, angles[n], sc.ma_power, sc.dt)
        e_n = pw * t
        if n + 1 < angles.shape[0]:
            pw, t = ma_power_and_time(angles[n], angles[n + 1], sc.ma_power, sc.dt)
            e_next = pw * t
        else:
            e_next = 0.0
        return e_n, e_next

    def trial_angle(self, n, phi):
        """SEE if slot n's angles were replaced by ``phi``; state untouched."""
        sc = self.ev.sc
        r_sec, _, _ = self.ev.slot_rate(self.state.trajectory[n + 1], phi, self.state.beams[n])
        angles = self.state.angles.copy()
        angles[n] = phi
        e_n, e_next = self._ma_energy_around(n, angles)
        num = self.sum_secrecy - self.r_sec[n] + r_sec
        den = self.total_energy - self.energy.e_ma[n] + e_n
        if n + 1 < sc.n_step:
            den += e_next - self.energy.e_ma[n + 1]
        return num * sc.dt / den

    def apply_angle(self, n, phi):
        """Commit an angle replacement, updating the caches in place."""
        sc = self.ev.sc
        self.state.angles[n] = phi
        r_sec, r_u, r_e = self.ev.slot_rate(
            self.state.trajectory[n + 1], phi, self.state.beams[n]
        )
        self.r_sec[n], self.r_u[n], self.r_e[n] = r_sec, r_u, r_e
        e_n, e_next = self._ma_energy_around(n, self.state.angles)
        self.energy.e_ma[n] = e_n
        if n + 1 < sc.n_step:
            self.energy.e_ma[n + 1] = e_next

    def trial_waypoint(self, m, q):
        """SEE if waypoint m (1..N-1) moved to ``q``; state untouched.

        Touches slot m's rate and the propulsion energy of the two
        adjacent transitions only.
        """
        from .energy import propulsion_power

        sc = self.ev.sc
        traj = self.state.trajectory
        r_sec, _, _ = self.ev.slot_rate(q, self.state.angles[m - 1], self.state.beams[m - 1])
        v_in = float(np.linalg.norm(q - traj[m - 1])) / sc.dt
        v_out = float(np.linalg.norm(traj[m + 1] - q)) / sc.dt
        e_in = propulsion_power(v_in, sc.power) * sc.dt
        e_out = propulsion_power(v_out, sc.power) * sc.dt
        num = self.sum_secrecy - self.r_sec[m - 1] + r_sec
        den = (self.total_energy - self.energy.e_prop[m - 1] - self.energy.e_prop[m]
               + e_in + e_out)
        return num * sc.dt / den

    def apply_waypoint(self, m, q):
        from .energy import propulsion_power

        sc = self.ev.sc
        self.state.trajectory[m] = q
        traj = self.state.trajectory
        r_sec, r_u, r_e = self.ev.slot_rate(
            q, self.state.angles[m - 1], self.state.beams[m - 1]
        )
        self.r_sec[m - 1], self.r_u[m - 1], self.r_e[m - 1] = r_sec, r_u, r_e
        v_in = float(np.linalg.norm(q - traj[m - 1])) / sc.dt
        v_out = float(np.linalg.norm(traj[m + 1] - q)) / sc.dt
        self.energy.e_prop[m - 1] = propulsion_power(v_in, sc.power) * sc.dt
        self.energy.e_prop[m] = propulsion_power(v_out, sc.power) * sc.dt

    def trial_beam(self, n, w, eve_matrix=None):
        sc = self.ev.sc
        r_sec, _, _ = self.ev.slot_rate(
            self.state.trajectory[n + 1], self.state.angles[n], w, eve_matrix
        )
        e_com = sc.p_j * float(np.linalg.norm(w)) ** 2 * sc.dt
        num = self.sum_secrecy - self.r_sec[n] + r_sec
        den = self.total_energy - self.energy.e_com[n] + e_com
        return num * sc.dt / den

    def apply_beam(self, n, w, eve_matrix=None):
        sc = self.ev.sc
        self.state.beams[n] = w
        r_sec, r_u, r_e = self.ev.slot_rate(
            self.state.trajectory[n + 1], self.state.angles[n], w, eve_matrix
        )
        self.r_sec[n], self.r_u[n], self.r_e[n] = r_sec, r_u, r_e
        self.energy.e_com[n] = sc.p_j * float(np.linalg.norm(w)) ** 2 * sc.dt


def secrecy_rate_slot(state, n, sc, mode="paper", clipped=True):
    """Secrecy rate of slot n (0-based); set clipped=False for the raw gap."""
    ev = SeeEvaluator(sc, mode)
    r_sec, r_u, r_e = ev.slot_rate(state.trajectory[n + 1], state.angles[n], state.beams[n])
    return r_sec if clipped else r_u - r_e


def see_objective(state, sc, mode="paper", include_ma_power=True) -> SEEReport:
    """Full secrecy-energy-efficiency report for a state."""
    ev = SeeEvaluator(sc, mode, include_ma_power)
    return ev.evaluate(state).report()
