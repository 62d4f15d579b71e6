"""Panel-orientation block: per-slot projected gradient ascent on the SEE.

Angles are optimized one slot at a time against the cached evaluation, so a
trial move only re-prices that slot's rate and the two adjacent actuation
energies. Each slot's feasible box is the global angle range intersected
with what the actuators can reach from both neighboring slots within one
slot duration; the sweep therefore preserves reachability of the whole
schedule. Every accepted move increases the full objective, so the block is
monotone by construction.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .energy import reachable_angle_box
from .geometry import PHI_MAX, PHI_MIN, boresight_angles_toward
from .metrics import Evaluation, SeeEvaluator, SolutionState


@dataclass
class AngleConfig:
    max_iters: int = 50  # PGD steps per slot
    step_init: float = 0.1  # rad
    shrink: float = 0.5
    max_backtracks: int = 20
    fd_eps: float = 1e-5  # rad
    sweeps: int = 1  # passes over the slots per AO round


def slot_angle_box(evaluation: Evaluation, n):
    """Feasible (lo_x, hi_x, lo_z, hi_z) for slot n given its neighbors."""
    sc = evaluation.ev.sc
    angles = evaluation.state.angles
    prev = angles[n - 1] if n > 0 else np.zeros(2)
    nxt = angles[n + 1] if n + 1 < angles.shape[0] else None
    return reachable_angle_box(prev, nxt, sc.ma_power, sc.dt, PHI_MIN, PHI_MAX)


def _clip_to_box(phi, box):
    return np.array([
        min(max(phi[0], box[0]), box[1]),
        min(max(phi[1], box[2]), box[3]),
    ])


def _fd_gradient(fun, phi, box, eps):
    """Central differences, falling back to one-sided at the box faces."""
    grad = np.zeros(2)
    bounds = ((box[0], box[1]), (box[2], box[3]))
    for c in range(2):
        lo, hi = bounds[c]
        up = min(phi[c] + eps, hi)
        dn = max(phi[c] - eps, lo)
        if up <= dn:
            grad[c] = 0.0
            continue
        p_up, p_dn = phi.copy(), phi.copy()
        p_up[c], p_dn[c] = up, dn
        grad[c] = (fun(p_up) - fun(p_dn)) / (up - dn)
    return grad


def optimize_slot_angles(evaluation: Evaluation, n, cfg: AngleConfig):
    """PGD on slot n's angles; commits only SEE-improving moves.

    The gain pattern is multi-lobed in the tilt angles, so plain ascent from
    the incumbent can sit on a minor lobe; a few structured candidates
    (level panel, boresight at the estimated eavesdropper) seed the search
    before the gradient refinement.
    """
    sc = evaluation.ev.sc
    box = slot_angle_box(evaluation, n)
    phi = _clip_to_box(evaluation.state.angles[n].copy(), box)
    best = evaluation.trial_angle(n, phi)
    moved = False
    eve_bore, _ = boresight_angles_toward(evaluation.state.trajectory[n + 1], sc.q_e_est)
    for cand in (np.zeros(2), eve_bore.as_array()):
        cand = _clip_to_box(cand, box)
        val = evaluation.trial_angle(n, cand)
        if val > best + 1e-15:
            phi, best, moved = cand, val, True
    for _ in range(cfg.max_iters):
        grad = _fd_gradient(lambda p: evaluation.trial_angle(n, p), phi, box, cfg.fd_eps)
        if float(np.linalg.norm(grad)) < 1e-12:
            break
        alpha = cfg.step_init
        improved = False
        for _ in range(cfg.max_backtracks):
            cand = _clip_to_box(phi + alpha * grad, box)
            val = evaluation.trial_angle(n, cand)
            if val > best + 1e-15:
                phi, best, improved, moved = cand, val, True, True
                break
            alpha *= cfg.shrink
        if not improved:
            break
    if moved:
        evaluation.apply_angle(n, phi)
    return best, moved


def optimize_angles(state: SolutionState, sc, evaluator: SeeEvaluator,
                    cfg: AngleConfig | None = None):
    """Sweep the slots; returns (state, final_see). SEE never decreases."""
    cfg = cfg or AngleConfig()
    evaluation = evaluator.evaluate(state.copy())
    see = evaluation.see
    for _ in range(cfg.sweeps):
        any_moved = False
        for n in range(sc.n_step):
            _, moved = optimize_slot_angles(evaluation, n, cfg)
            any_moved = any_moved or moved
        if not any_moved:
            break
    new_see = evaluation.see
    if new_see >= see - 1e-12:
        return evaluation.state, new_see
    return state, see
