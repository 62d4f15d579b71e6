"""Jamming-beamformer block: per-slot SDR + Dinkelbach + randomization.

Each slot's beam enters the objective through two rank-one quadratic forms
(jamming power toward the user and toward the eavesdropper region), so the
relaxed problem optimizes the covariance W = w w^H over the PSD trace-<=1
set. The secrecy-rate surrogate keeps the concave log terms and linearizes
the convex ones at the reference covariance, giving a global concave lower
bound that is tight at the reference. The fractional objective (remaining
secrecy sum over remaining energy, both affine in W) is handled with
Dinkelbach iterations, each solved by projected gradient ascent. A rank-one
beam is then recovered by Gaussian randomization and committed only if the
true evaluated objective does not decrease.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .channel import channel, worst_case_eve_gains
from .geometry import local_direction, steering_vector
from .metrics import Evaluation, SeeEvaluator, SolutionState
from .numerics import eig_hermitian, project_psd_trace, sample_complex_gaussian, stream_rng

LN2 = float(np.log(2.0))


@dataclass
class BeamConfig:
    sca_iters: int = 4
    dinkelbach_tol: float = 1e-6
    dinkelbach_max_iter: int = 15
    pgd_max_iter: int = 40
    armijo_kappa: float = 0.1
    shrink: float = 0.5
    step_init: float = 1.0
    max_backtracks: int = 30
    n_random: int = 100
    seed: int = 0


class BeamSubproblem:
    """Frozen-slot data: channels, rate surrogate and fractional objective."""

    def __init__(self, evaluation: Evaluation, n):
        ev = evaluation.ev
        sc = ev.sc
        self.sc = sc
        self.n = n
        q = evaluation.state.trajectory[n + 1]
        phi = evaluation.state.angles[n]
        o = evaluation.state.orientation(n)

        h_ju = channel(q, sc.q_u, o, sc.ma_geometry, sc.alpha_ju, sc.f_hz).gain
        self.h_u = np.outer(h_ju, np.conj(h_ju))
        _, h_je = worst_case_eve_gains(q, sc)
        g_e = steering_vector(sc.ma_geometry, local_direction(q, sc.q_e_est, o), sc.f_hz)
        self.h_e = h_je * np.outer(g_e, np.conj(g_e))
        self.s_u, self.s_e = ev.s_u, ev.s_e
        self.sigma_u, self.sigma_e = sc.sigma2_u, sc.sigma2_e
        self.p_j, self.dt = sc.p_j, sc.dt

        # Rest-of-flight numerator/denominator (everything but this slot).
        self.omega1 = (evaluation.sum_secrecy - evaluation.r_sec[n]) * sc.dt
        self.omega2 = evaluation.total_energy - evaluation.energy.e_com[n]

    def _traces(self, w_cov):
        ju = self.p_j * float(np.real(np.trace(self.h_u @ w_cov)))
        je = self.p_j * float(np.real(np.trace(self.h_e @ w_cov)))
        return max(ju, 0.0), max(je, 0.0)

    def rate(self, w_cov):
        """Relaxed slot secrecy rate (may be negative; no clipping here)."""
        ju, je = self._traces(w_cov)
        return float(
            np.log2(self.sigma_u + self.s_u + ju) - np.log2(self.sigma_u + ju)
            + np.log2(self.sigma_e + je) - np.log2(self.sigma_e + self.s_e + je)
        )

    def rate_lower_bound(self, w_cov, w_ref):
        """Concave global lower bound on rate(), tight at ``w_ref``."""
        ju, je = self._traces(w_cov)
        ju0, je0 = self._traces(w_ref)
        return float(
            np.log2(self.sigma_u + self.s_u + ju)
            - np.log2(self.sigma_u + ju0) - (ju - ju0) / (LN2 * (self.sigma_u + ju0))
            + np.log2(self.sigma_e + je)
            - np.log2(self.sigma_e + self.s_e + je0)
            - (je - je0) / (LN2 * (self.sigma_e + self.s_e + je0))
        )

    def rate_lower_bound_grad(self, w_cov, w_ref):
        ju, je = self._traces(w_cov)
        ju0, je0 = self._traces(w_ref)
        cu = self.p_j / LN2 * (1.0 / (self.sigma_u + self.s_u + ju)
                               - 1.0 / (self.sigma_u + ju0))
        ce = self.p_j / LN2 * (1.0 / (self.sigma_e + je)
                               - 1.0 / (self.sigma_e + self.s_e + je0))
        return cu * self.h_u + ce * self.h_e

    def fractional(self, w_cov):
        """(remaining secrecy + surrogate slot rate) / (remaining + slot energy)."""
        num = self.omega1 + self.rate(w_cov) * self.dt
        den = self.omega2 + self.p_j * float(np.real(np.trace(w_cov))) * self.dt
        return num / den


def _parametric_ascent(sub: BeamSubproblem, w_ref, w_start, lam, cfg: BeamConfig):
    """PGD on omega1 + lb(W)*dt - lam*(omega2 + P_J tr(W) dt) over the PSD set."""

    def obj(w_cov):
        num = sub.omega1 + sub.rate_lower_bound(w_cov, w_ref) * sub.dt
        den = sub.omega2 + sub.p_j * float(np.real(np.trace(w_cov))) * sub.dt
        return num - lam * den

    w = w_start.copy()
    val = obj(w)
    step = cfg.step_init
    for _ in range(cfg.pgd_max_iter):
        grad = (sub.rate_lower_bound_grad(w, w_ref) * sub.dt
                - lam * sub.p_j * sub.dt * np.eye(w.shape[0]))
        gnorm = float(np.linalg.norm(grad))
        if gnorm < 1e-14:
            break
        alpha = step
        improved = False
        for _ in range(cfg.max_backtracks):
            cand = project_psd_trace(w + alpha * grad, 1.0)
            pred = float(np.real(np.trace(np.conj(grad).T @ (cand - w))))
            cand_val = obj(cand)
            if pred > 0 and cand_val >= val + cfg.armijo_kappa * pred:
                w, val = cand, cand_val
                step = min(alpha * 2.0, 1e3)
                improved = True
                break
            alpha *= cfg.shrink
        if not improved:
            break
    return w


def solve_slot_sdr(sub: BeamSubproblem, w_init, cfg: BeamConfig):
    """SCA + Dinkelbach on the relaxed covariance.

    Returns (W, lambda_seq, final_residual); the lambda sequence is
    nondecreasing because each inner ascent starts from the incumbent.
    """
    w_cov = np.outer(w_init, np.conj(w_init))
    lambdas = []
    residual = 0.0
    for _ in range(cfg.sca_iters):
        w_ref = w_cov.copy()
        lam = sub.fractional(w_cov)
        for _ in range(cfg.dinkelbach_max_iter):
            w_new = _parametric_ascent(sub, w_ref, w_cov, lam, cfg)
            num = sub.omega1 + sub.rate_lower_bound(w_new, w_ref) * sub.dt
            den = sub.omega2 + sub.p_j * float(np.real(np.trace(w_new))) * sub.dt
            residual = num - lam * den
            w_cov = w_new
            lam = num / den
            lambdas.append(lam)
            if residual < cfg.dinkelbach_tol:
                break
    return w_cov, lambdas, residual


def gaussian_randomization(sub: BeamSubproblem, w_cov, incumbent, evaluation: Evaluation,
                           cfg: BeamConfig, eve_matrix=None):
    """Rank-one recovery; returns the best beam by the true evaluated SEE."""
    eig = eig_hermitian(w_cov)
    vals = np.clip(eig.eigenvalues, 0.0, None)
    scale = eig.eigenvectors * np.sqrt(vals)[None, :]
    rng = stream_rng(cfg.seed, sub.n)
    power = min(float(np.sum(vals)), 1.0)

    power_levels = (1.0, 0.75, 0.5, 0.25)
    candidates = [incumbent]
    if vals[0] > 0:
        lead = eig.eigenvectors[:, 0]
        candidates.extend(np.sqrt(power * lvl) * lead for lvl in power_levels)
        # subarray variants: zeroing outer elements widens the main lobe,
        # which can raise the worst-case gain over the uncertainty region
        geom = sub.sc.ma_geometry
        for keep in (2, 1):
            if keep >= geom.n_x and keep >= geom.n_y:
                continue
            mask = ((geom.element_positions[:, 0] < keep * geom.spacing - 1e-12)
                    & (geom.element_positions[:, 1] < keep * geom.spacing - 1e-12))
            wide = lead * mask
            nrm = float(np.linalg.norm(wide))
            if nrm > 0:
                candidates.extend(np.sqrt(power * lvl) / nrm * wide
                                  for lvl in power_levels)
    inc_nrm = float(np.linalg.norm(incumbent))
    if inc_nrm > 0:
        candidates.extend(incumbent * np.sqrt(lvl) for lvl in power_levels[1:])
    for _ in range(cfg.n_random):
        z = sample_complex_gaussian(w_cov.shape[0], rng)
        w = scale @ z
        nrm = float(np.linalg.norm(w))
        if nrm > 0:
            candidates.append(w * (np.sqrt(power) / nrm))

    best_w, best_see = incumbent, evaluation.trial_beam(sub.n, incumbent, eve_matrix)
    for w in candidates[1:]:
        see = evaluation.trial_beam(sub.n, w, eve_matrix)
        if see > best_see:
            best_w, best_see = w, see
    return best_w, best_see


def optimize_beams(state: SolutionState, sc, evaluator: SeeEvaluator,
                   cfg: BeamConfig | None = None, lambda_log=None, residual_log=None):
    """Per-slot beam update; returns (state, final_see). SEE never decreases.

    ``lambda_log`` / ``residual_log``, if given, collect one Dinkelbach
    lambda sequence / final residual per slot invocation.
    """
    cfg = cfg or BeamConfig()
    evaluation = evaluator.evaluate(state.copy())
    see = evaluation.see
    for n in range(sc.n_step):
        sub = BeamSubproblem(evaluation, n)
        eve_matrix = None
        if evaluator.mode == "rigorous":
            eve_matrix = evaluator.eve_steering_matrix(
                evaluation.state.trajectory[n + 1], evaluation.state.angles[n]
            )
        w_cov, lambdas, residual = solve_slot_sdr(sub, evaluation.state.beams[n], cfg)
        if lambda_log is not None:
            lambda_log.append(lambdas)
        if residual_log is not None:
            residual_log.append(residual)
        best_w, best_see = gaussian_randomization(
            sub, w_cov, evaluation.state.beams[n], evaluation, cfg, eve_matrix
        )
        if best_see > evaluation.see + 1e-15:
            evaluation.apply_beam(n, best_w, eve_matrix)
    new_see = evaluation.see
    if new_see >= see - 1e-12:
        return evaluation.state, new_see
    return state, see
