"""Trajectory block: SCA surrogate + Dinkelbach over the waypoints.

With beams and panel angles frozen, each slot's unclipped secrecy rate is a
function of that slot's waypoint only. The surrogate numerator is a provable
concave global lower bound that is exact at the reference trajectory:

* user side: the rate pair ``f(J) = log2(s2+S+J) - log2(s2+J)`` is convex
  and decreasing in the jamming power J, so a tangent in J composed with a
  convex upper bound on ``J(q)`` (path gain x beam gain, expanded with
  region-valid gradient/curvature/Lipschitz constants) minorizes it;
* eve side: the analogous pair is increasing and concave in the eve jamming
  power, so composing with a concave lower bound on it minorizes the term;
* outside a trust region around the reference the constants no longer hold,
  so the per-slot bound is capped by a steeply decreasing concave "outer"
  branch that stays below the global range of the rate.

The denominator is the exact propulsion energy (the induced-power slack is
kept at its tight value) plus the frozen actuation and transmit energies.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .channel import beta0, min_eve_beam_gain
from .errors import SolverError, ValidationError
from .geometry import wavenumber
from .metrics import SeeEvaluator, SolutionState
from .energy import induced_energy_aux

BIG_NEG = -1e9


@dataclass
class TrajConfig:
    sca_iters: int = 10
    dinkelbach_tol: float = 1e-6
    dinkelbach_max_iter: int = 30
    pgd_max_iter: int = 100
    armijo_kappa: float = 0.1
    armijo_shrink: float = 0.5
    step_init: float = 1.0
    max_backtracks: int = 40
    trust_radius: float | None = None  # default: v_max * dt
    fd_eps: float = 1e-3  # m, central differences on the surrogate
    pattern_passes: int = 4  # guarded pattern-search passes after the SCA step


@dataclass
class TrajDiagnostics:
    lambda_sequences: list = field(default_factory=list)
    residuals: list = field(default_factory=list)
    sca_see: list = field(default_factory=list)
    accepted: bool = True


def _rate_pair(j, sigma2, s):
    """log2(sigma2 + s + j) - log2(sigma2 + j); guards the domain edge."""
    if sigma2 + j <= 0:
        return BIG_NEG
    return float(np.log2(sigma2 + s + j) - np.log2(sigma2 + j))


def _rate_pair_deriv(j, sigma2, s):
    return (1.0 / (sigma2 + s + j) - 1.0 / (sigma2 + j)) / np.log(2.0)


class TrajSurrogate:
    """Concave numerator minorant + exact energy denominator, built at a
    reference trajectory with beams and angles frozen."""

    def __init__(self, state: SolutionState, sc, evaluator: SeeEvaluator, trust_radius):
        self.sc = sc
        self.mode = evaluator.mode
        self.n = sc.n_step
        self.ref = state.trajectory.copy()
        self.radius = float(trust_radius)
        reach = self.radius + 1e-6  # constants stay valid slightly past the cap
        b0 = beta0(sc.f_hz)
        k = wavenumber(sc.f_hz)
        geom = sc.ma_geometry
        p_max = geom.max_element_radius
        n_ma = geom.size

        s_u, s_e = evaluator.s_u, evaluator.s_e
        self.sigma_u, self.sigma_e = sc.sigma2_u, sc.sigma2_e
        self.s_u, self.s_e = s_u, s_e
        # Range of the per-slot unclipped rate, for the outer branch.
        self.rate_hi = float(np.log2(1.0 + s_u / sc.sigma2_u))
        self.rate_lo = -float(np.log2(1.0 + s_e / sc.sigma2_e))
        self.outer_slope = (self.rate_hi - self.rate_lo) / 1e-6

        n = self.n
        self.x_ref = self.ref[1:, :2].copy()  # slot n rate uses waypoint n
        h = float(self.ref[0, 2])

        def link_constants(target, alpha, eps_shift):
            """Per-slot path-gain value/gradient plus region bounds."""
            delta = self.x_ref - target[None, :2]
            vg = abs(h - target[2])
            dist = np.sqrt(np.sum(delta**2, axis=1) + vg**2)
            d_min = np.maximum(np.maximum(vg, dist - reach), 1e-3)
            de = dist + eps_shift
            de_min = d_min + eps_shift
            b_val = b0 * de ** (-alpha)
            grad = (-alpha * b0 * de ** (-alpha - 1) / dist)[:, None] * delta
            grad_abs = alpha * b0 * de_min ** (-alpha - 1)
            curv = alpha * b0 * ((alpha + 1) * de_min ** (-alpha - 2)
                                 + de_min ** (-alpha - 1) / d_min)
            return b_val, grad, grad_abs, curv, d_min

        # --- user-side jamming term ------------------------------------
        w_norms = np.sum(np.abs(state.beams) ** 2, axis=1)
        bu, gu, au, mu, du_min = link_constants(sc.q_u, sc.alpha_ju, 0.0)
        self.u_b, self.u_grad, self.u_grad_abs, self.u_curv = bu, gu, au, mu
        self.u_lip = 2.0 * n_ma * w_norms * k * p_max / du_min  # beam-gain Lipschitz
        self.u_gain = np.array([
            np.abs(np.vdot(self._steer(state, i, sc.q_u), state.beams[i])) ** 2
            for i in range(n)
        ])
        self.j_u_ref = sc.p_j * self.u_b * self.u_gain
        self.fu_ref = np.array([_rate_pair(j, sc.sigma2_u, s_u) for j in self.j_u_ref])
        self.fu_p = np.array([_rate_pair_deriv(j, sc.sigma2_u, s_u) for j in self.j_u_ref])

        # --- eve-side jamming term --------------------------------------
        be, ge, ae, me, de_min = link_constants(sc.q_e_est, sc.alpha_je, sc.epsilon)
        self.e_b, self.e_grad, self.e_grad_abs, self.e_curv = be, ge, ae, me
        if self.mode == "rigorous":
            # distance to any disc point >= dist-to-center - epsilon
            pt_min = np.maximum(np.maximum(abs(h - sc.q_e_est[2]),
                                           (de_min - sc.epsilon) - sc.epsilon), 1e-3)
            self.e_lip = 2.0 * n_ma * w_norms * k * p_max / pt_min
            self.e_gain = np.array([
                min_eve_beam_gain(self.ref[i + 1], state.orientation(i), state.beams[i], sc)
                for i in range(n)
            ])
        else:
            self.e_lip = np.zeros(n)
            self.e_gain = np.ones(n)
        self.j_e_ref = sc.p_j * self.e_b * self.e_gain
        self.he_ref = np.array([-_rate_pair(j, sc.sigma2_e, s_e) for j in self.j_e_ref])

        # Frozen denominator pieces.
        ev = evaluator.evaluate(state)
        self.frozen_energy = ev.energy.total_ma + ev.energy.total_com
        self.ref_rate_sum = float(np.sum(self.fu_ref + self.he_ref))

    def _steer(self, state, i, target):
        from .geometry import local_direction, steering_vector

        u = local_direction(self.ref[i + 1], target, state.orientation(i))
        return steering_vector(self.sc.ma_geometry, u, self.sc.f_hz)

    # --- evaluation -------------------------------------------------------

    def numerator(self, traj):
        """Concave lower bound on the summed unclipped secrecy rate."""
        sc = self.sc
        x = np.asarray(traj)[1:, :2]
        dxy = x - self.x_ref
        r = np.linalg.norm(dxy, axis=1)
        r2 = r * r

        j_bar = sc.p_j * (
            self.u_b * self.u_gain
            + self.u_b * self.u_lip * r
            + self.u_gain * (np.sum(self.u_grad * dxy, axis=1) + 0.5 * self.u_curv * r2)
            + (self.u_grad_abs * r + 0.5 * self.u_curv * r2) * self.u_lip * r
        )
        u_term = self.fu_ref + self.fu_p * (j_bar - self.j_u_ref)

        j_low = sc.p_j * (
            self.e_b * self.e_gain
            + self.e_gain * (np.sum(self.e_grad * dxy, axis=1) - 0.5 * self.e_curv * r2)
            - self.e_b * self.e_lip * r
            - (self.e_grad_abs * r + 0.5 * self.e_curv * r2) * self.e_lip * r
        )
        with np.errstate(divide="ignore", invalid="ignore"):
            e_term = np.where(
                self.sigma_e + j_low > 0,
                np.log2(np.maximum(self.sigma_e + j_low, 1e-300))
                - np.log2(self.sigma_e + self.s_e + np.maximum(j_low, -self.sigma_e)),
                BIG_NEG,
            )

        inner = u_term + e_term
        outer = self.rate_hi - self.outer_slope * np.maximum(0.0, r - self.radius)
        return float(np.sum(np.minimum(inner, outer)))

    def denominator(self, traj):
        """Exact UAV propulsion energy plus frozen actuation/transmit energy."""
        sc = self.sc
        p = sc.power
        v = np.linalg.norm(np.diff(np.asarray(traj), axis=0), axis=1) / sc.dt
        blade = p.p0 * (1.0 + 3.0 * v**2 / p.u_tip_sq)
        induced = p.p1 * np.sqrt(np.sqrt(1.0 + v**4 / (4.0 * p.v0**4))
                                 - v**2 / (2.0 * p.v0**2))
        parasite = 0.5 * p.r_drag * p.rho * p.s * p.a * v**3
        return float(np.sum(blade + induced + parasite) * sc.dt) + self.frozen_energy

    def ratio(self, traj):
        return self.numerator(traj) / self.denominator(traj)

    def aux_variables(self, traj):
        """Tight values of the log-distance / induced-power slack variables."""
        sc = self.sc
        traj = np.asarray(traj)
        d_ju = np.linalg.norm(traj[1:] - sc.q_u, axis=1)
        d_je = np.linalg.norm(traj[1:] - sc.q_e_est, axis=1)
        d_be = float(np.linalg.norm(sc.q_b - sc.q_e_est))
        deltas = np.linalg.norm(np.diff(traj, axis=0), axis=1)
        chi = np.array([induced_energy_aux(d, sc.dt, sc.power.v0) for d in deltas])
        return {
            "mu": sc.alpha_ju * np.log(d_ju),
            "nu": sc.alpha_be * np.log(d_be - sc.epsilon),
            "tau": sc.alpha_je * np.log(d_je + sc.epsilon),
            "chi": chi,
        }


def build_surrogate(state: SolutionState, sc, evaluator: SeeEvaluator,
                    trust_radius=None) -> TrajSurrogate:
    if trust_radius is None:
        trust_radius = sc.v_max * sc.dt
    steps = np.linalg.norm(np.diff(state.trajectory, axis=0), axis=1)
    if np.any(steps > sc.v_max * sc.dt + 1e-9):
        raise ValidationError("reference trajectory violates the speed cap")
    return TrajSurrogate(state, sc, evaluator, trust_radius)


# --- feasibility projection ------------------------------------------------

def project_feasible(traj, ref, sc, sweeps=50, tol=1e-9):
    """Project a trajectory onto endpoint + per-slot speed-ball constraints.

    Cyclic sweeps of alternating ball projections; falls back to shrinking
    toward the (feasible) reference along the segment if sweeps stall.
    """
    from .numerics import project_ball

    rad = sc.v_max * sc.dt
    q = np.asarray(traj, dtype=float).copy()
    q[0], q[-1] = sc.q_i, sc.q_f
    n = q.shape[0] - 1

    def violations(arr):
        steps = np.linalg.norm(np.diff(arr, axis=0), axis=1)
        return float(np.max(steps) - rad)

    for _ in range(sweeps):
        moved = 0.0
        for i in range(1, n):
            y = q[i]
            for _ in range(50):
                y1 = project_ball(y, q[i - 1], rad)
                y2 = project_ball(y1, q[i + 1], rad)
                if (np.linalg.norm(y2 - q[i - 1]) <= rad + tol
                        and np.linalg.norm(y2 - q[i + 1]) <= rad + tol):
                    y = y2
                    break
                y = y2
            moved = max(moved, float(np.linalg.norm(y - q[i])))
            q[i] = y
        if moved < tol and violations(q) <= tol:
            return q
    if violations(q) <= tol:
        return q
    # Convex feasible set: bisect toward the feasible reference.
    ref = np.asarray(ref, dtype=float)
    lo, hi = 0.0, 1.0
    for _ in range(60):
        mid = 0.5 * (lo + hi)
        if violations(ref + mid * (q - ref)) <= tol / 2:
            lo = mid
        else:
            hi = mid
    out = ref + lo * (q - ref)
    if violations(out) > tol:
        raise SolverError("trajectory projection failed to restore feasibility")
    return out


def inner_parametric_solve(sur: TrajSurrogate, lam, traj_start, sc, cfg: TrajConfig):
    """Projected gradient ascent on N(q) - lam * D(q); monotone by Armijo."""
    q = np.asarray(traj_start, dtype=float).copy()
    n_free = sc.n_step - 1
    if n_free <= 0:
        return q

    def obj(arr):
        return sur.numerator(arr) - lam * sur.denominator(arr)

    val = obj(q)
    step = cfg.step_init
    for _ in range(cfg.pgd_max_iter):
        grad = np.zeros((n_free, 2))
        for i in range(n_free):
            for c in range(2):
                q[i + 1, c] += cfg.fd_eps
                hi = obj(q)
                q[i + 1, c] -= 2 * cfg.fd_eps
                lo = obj(q)
                q[i + 1, c] += cfg.fd_eps
                grad[i, c] = (hi - lo) / (2 * cfg.fd_eps)
        gnorm = float(np.linalg.norm(grad))
        if gnorm < 1e-12:
            break
        alpha = step
        improved = False
        for _ in range(cfg.max_backtracks):
            cand = q.copy()
            cand[1:-1, :2] += alpha * grad
            cand = project_feasible(cand, q, sc)
            move = cand[1:-1, :2] - q[1:-1, :2]
            pred = float(np.sum(grad * move))
            cand_val = obj(cand)
            if pred > 0 and cand_val >= val + cfg.armijo_kappa * pred:
                q, val = cand, cand_val
                step = min(alpha * 2.0, 1e6)
                improved = True
                break
            alpha *= cfg.armijo_shrink
        if not improved:
            break
    return q


def dinkelbach_solve(sur: TrajSurrogate, traj_init, sc, cfg: TrajConfig):
    """Dinkelbach iterations on the surrogate fraction.

    Returns (trajectory, lambda_sequence, final_residual); the lambda
    sequence is nondecreasing because every inner solve starts from the
    incumbent and never decreases the parametric objective.
    """
    q = np.asarray(traj_init, dtype=float).copy()
    lam = sur.numerator(q) / sur.denominator(q)
    lambdas = [lam]
    residual = 0.0
    for _ in range(cfg.dinkelbach_max_iter):
        q_new = inner_parametric_solve(sur, lam, q, sc, cfg)
        num, den = sur.numerator(q_new), sur.denominator(q_new)
        residual = num - lam * den
        q = q_new
        lam_next = num / den
        lambdas.append(lam_next)
        if residual < cfg.dinkelbach_tol:
            lam = lam_next
            break
        lam = lam_next
    return q, lambdas, residual


_PATTERN_DIRS = np.array([
    [np.cos(t), np.sin(t)] for t in 2.0 * np.pi * np.arange(8) / 8.0
])


def pattern_refine(evaluation, sc, max_passes=4):
    """Greedy per-waypoint pattern search on the true objective.

    The local surrogate bound is honest about how fast the array pattern can
    swing with position, which makes its ascent steps tiny; this guarded
    coarse-to-fine search supplies the long-range moves. Every accepted move
    strictly improves the evaluated SEE, so monotonicity is preserved.
    """
    rad = sc.v_max * sc.dt
    steps = [rad * f for f in (1.0, 0.5, 0.25, 0.1, 0.04, 0.01)]
    improved_any = False
    for _ in range(max_passes):
        improved = False
        for m in range(1, sc.n_step):
            traj = evaluation.state.trajectory
            base = evaluation.see
            best_q, best = None, base
            for s in steps:
                for d in _PATTERN_DIRS:
                    q = traj[m].copy()
                    q[:2] += s * d
                    if (np.linalg.norm(q - traj[m - 1]) > rad
                            or np.linalg.norm(traj[m + 1] - q) > rad):
                        continue
                    val = evaluation.trial_waypoint(m, q)
                    if val > best + 1e-15:
                        best_q, best = q, val
                if best_q is not None:
                    break
            if best_q is not None:
                evaluation.apply_waypoint(m, best_q)
                improved = improved_any = True
        if not improved:
            break
    return improved_any


def optimize_trajectory(state: SolutionState, sc, evaluator: SeeEvaluator,
                        cfg: TrajConfig | None = None):
    """SCA outer loop; returns (state, diagnostics) with SEE non-decreasing."""
    cfg = cfg or TrajConfig()
    diag = TrajDiagnostics()
    current = state.copy()
    see = evaluator.see(current)
    for _ in range(cfg.sca_iters):
        try:
            sur = build_surrogate(current, sc, evaluator, cfg.trust_radius)
            q_new, lambdas, residual = dinkelbach_solve(sur, current.trajectory, sc, cfg)
        except SolverError:
            diag.accepted = False
            break
        diag.lambda_sequences.append(lambdas)
        diag.residuals.append(residual)
        candidate = current.copy()
        candidate.trajectory = q_new
        cand_see = evaluator.see(candidate)
        moved = float(np.max(np.linalg.norm(q_new - current.trajectory, axis=1)))
        if cand_see >= see - 1e-12:
            current, see = candidate, max(see, cand_see)
        diag.sca_see.append(see)
        if moved < 1e-6:
            break
    evaluation = evaluator.evaluate(current)
    if pattern_refine(evaluation, sc, max_passes=cfg.pattern_passes):
        refined = evaluation.see
        if refined >= see - 1e-12:
            current, see = evaluation.state, refined
    return current, diag
