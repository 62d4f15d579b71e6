"""Alternating optimization driver tying the three blocks together.

One outer round runs trajectory -> panel angles -> beams. The trajectory
block works on all waypoints at once (its surrogate separates per slot, so
there is nothing gained by nesting it in a per-slot loop); angles and beams
are updated slot-by-slot against the cached evaluation. Every block is
guarded to never decrease the true objective, so the outer sequence of SEE
values is non-decreasing and converges.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .angleopt import AngleConfig, optimize_angles
from .beamopt import BeamConfig, optimize_beams
from .channel import BS_ORIENTATION
from .geometry import local_direction, steering_vector
from .metrics import SeeEvaluator, SolutionState, validate_state
from .trajopt import TrajConfig, optimize_trajectory


@dataclass
class AOConfig:
    mode: str = "paper"
    eps_th: float = 1e-4  # absolute SEE improvement threshold, bit/Hz/J
    max_outer: int = 50
    seed: int = 0
    include_ma_power: bool = True
    optimize_traj: bool = True
    optimize_angle: bool = True
    optimize_beam: bool = True
    traj: TrajConfig = field(default_factory=TrajConfig)
    angle: AngleConfig = field(default_factory=AngleConfig)
    beam: BeamConfig = field(default_factory=BeamConfig)


@dataclass
class ConvergenceTrace:
    see: list = field(default_factory=list)  # SEE after each outer round
    block_see: list = field(default_factory=list)  # (traj, angle, beam) per round
    traj_lambdas: list = field(default_factory=list)  # Dinkelbach traces
    beam_lambdas: list = field(default_factory=list)  # one per slot invocation
    traj_residuals: list = field(default_factory=list)  # final N - lambda*D values
    beam_residuals: list = field(default_factory=list)


@dataclass
class AOResult:
    state: SolutionState
    see: float
    trace: ConvergenceTrace
    converged: bool
    n_outer: int
    mode: str


def initial_state(sc) -> SolutionState:
    """Straight-line flight, level panel, unit-power beams at the eve center."""
    t = np.linspace(0.0, 1.0, sc.n_step + 1)[:, None]
    traj = sc.q_i[None, :] * (1.0 - t) + sc.q_f[None, :] * t
    angles = np.zeros((sc.n_step, 2))
    beams = np.zeros((sc.n_step, sc.n_ma), dtype=complex)
    for n in range(sc.n_step):
        u = local_direction(traj[n + 1], sc.q_e_est, BS_ORIENTATION)
        beams[n] = steering_vector(sc.ma_geometry, u, sc.f_hz)
        beams[n] /= np.linalg.norm(beams[n])
    state = SolutionState(traj, angles, beams)
    validate_state(state, sc)
    return state


def run(sc, cfg: AOConfig | None = None, start: SolutionState | None = None) -> AOResult:
    """Alternating optimization until the relative SEE gain drops below eps_th."""
    cfg = cfg or AOConfig()
    cfg.beam.seed = cfg.seed
    evaluator = SeeEvaluator(sc, cfg.mode, cfg.include_ma_power)
    state = start.copy() if start is not None else initial_state(sc)
    validate_state(state, sc)
    trace = ConvergenceTrace()
    see = evaluator.see(state)
    converged = False
    outer = 0
    for outer in range(1, cfg.max_outer + 1):
        see_prev = see
        block = []
        if cfg.optimize_traj:
            state, diag = optimize_trajectory(state, sc, evaluator, cfg.traj)
            trace.traj_lambdas.extend(diag.lambda_sequences)
            trace.traj_residuals.extend(diag.residuals)
            see = evaluator.see(state)
        block.append(see)
        if cfg.optimize_angle:
            state, see = optimize_angles(state, sc, evaluator, cfg.angle)
        block.append(see)
        if cfg.optimize_beam:
            state, see = optimize_beams(state, sc, evaluator, cfg.beam,
                                        lambda_log=trace.beam_lambdas,
                                        residual_log=trace.beam_residuals)
        block.append(see)
        trace.see.append(see)
        trace.block_see.append(tuple(block))
        if see - see_prev < cfg.eps_th:
            converged = True
            break
    validate_state(state, sc)
    return AOResult(state, see, trace, converged, outer, cfg.mode)
