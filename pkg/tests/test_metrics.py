import numpy as np
import pytest

from seejam.driver import initial_state
from seejam.errors import DegenerateGeometryError, ValidationError
from seejam.metrics import (
    SeeEvaluator,
    mrt_beam,
    secrecy_rate_slot,
    see_objective,
    sinr,
    validate_state,
)

from conftest import random_feasible_state


def test_sinr_formula():
    h = np.array([1.0 + 0j, 1.0j])
    w = h / np.sqrt(2)
    got = sinr(4.0, h, w, 0.0, h, np.zeros(2), 2.0)
    assert got == pytest.approx(4.0 * 2.0 / 2.0)


def test_mrt_beam_unit_norm_and_alignment():
    h = np.array([3.0, 4.0j])
    w = mrt_beam(h)
    assert np.linalg.norm(w) == pytest.approx(1.0)
    assert np.abs(np.vdot(h, w)) == pytest.approx(np.linalg.norm(h))
    with pytest.raises(DegenerateGeometryError):
        mrt_beam(np.zeros(3))


def test_secrecy_rate_clipping(tiny):
    # with a huge eve-side bound the unclipped gap can go negative
    state = initial_state(tiny)
    clipped = secrecy_rate_slot(state, 0, tiny, mode="rigorous")
    raw = secrecy_rate_slot(state, 0, tiny, mode="rigorous", clipped=False)
    assert clipped >= 0.0
    assert clipped >= raw


def test_see_report_consistency(tiny):
    state = initial_state(tiny)
    rep = see_objective(state, tiny, mode="rigorous")
    assert rep.per_slot.shape == (tiny.n_step, 6)
    assert rep.sum_secrecy == pytest.approx(float(np.sum(rep.per_slot[:, 0])))
    assert rep.total_energy == pytest.approx(float(np.sum(rep.per_slot[:, 3:])))
    assert rep.see == pytest.approx(rep.sum_secrecy * tiny.dt / rep.total_energy)
    assert rep.see >= 0


def test_modes_differ(tiny):
    # with jamming off the rigorous eve bound (BS array-factor boost) is
    # strictly weaker for the defender than the paper bound
    state = initial_state(tiny)
    state.beams[:] = 0.0
    paper = see_objective(state, tiny, mode="paper")
    rig = see_objective(state, tiny, mode="rigorous")
    assert np.all(rig.per_slot[:, 2] >= paper.per_slot[:, 2] - 1e-12)
    assert rig.per_slot[0, 2] > paper.per_slot[0, 2]


def test_unknown_mode_rejected(tiny):
    with pytest.raises(ValidationError):
        SeeEvaluator(tiny, mode="optimistic")


def test_validate_state_catches_violations(tiny):
    state = initial_state(tiny)
    validate_state(state, tiny)

    bad = state.copy()
    bad.trajectory[0] += 1.0
    with pytest.raises(ValidationError, match="endpoint"):
        validate_state(bad, tiny)

    bad = state.copy()
    bad.trajectory[1] += np.array([100.0, 0, 0])
    with pytest.raises(ValidationError):
        validate_state(bad, tiny)

    bad = state.copy()
    bad.angles[0, 0] = 2.0
    with pytest.raises(ValidationError, match="angle"):
        validate_state(bad, tiny)

    bad = state.copy()
    bad.beams[0] *= 3.0
    with pytest.raises(ValidationError, match="beam"):
        validate_state(bad, tiny)


@pytest.mark.parametrize("mode", ["paper", "rigorous"])
def test_incremental_angle_trial_matches_full(tiny, mode):
    ev = SeeEvaluator(tiny, mode)
    rng = np.random.default_rng(7)
    state = random_feasible_state(tiny, rng)
    evaluation = ev.evaluate(state.copy())
    for n in (0, tiny.n_step // 2, tiny.n_step - 1):
        phi = state.angles[n] + rng.uniform(-0.2, 0.2, size=2)
        phi = np.clip(phi, -np.pi / 2, np.pi / 2)
        trial = evaluation.trial_angle(n, phi)
        full_state = evaluation.state.copy()
        full_state.angles[n] = phi
        assert trial == pytest.approx(ev.see(full_state), rel=1e-12)
        # applying must agree with the trial and keep the caches consistent
        evaluation.apply_angle(n, phi)
        assert evaluation.see == pytest.approx(trial, rel=1e-12)
        assert evaluation.see == pytest.approx(ev.see(evaluation.state), rel=1e-12)


@pytest.mark.parametrize("mode", ["paper", "rigorous"])
def test_incremental_beam_trial_matches_full(tiny, mode):
    ev = SeeEvaluator(tiny, mode)
    rng = np.random.default_rng(8)
    state = random_feasible_state(tiny, rng)
    evaluation = ev.evaluate(state.copy())
    for n in (0, tiny.n_step - 1):
        w = rng.normal(size=tiny.n_ma) + 1j * rng.normal(size=tiny.n_ma)
        w /= np.linalg.norm(w) * 1.2
        trial = evaluation.trial_beam(n, w)
        full_state = evaluation.state.copy()
        full_state.beams[n] = w
        assert trial == pytest.approx(ev.see(full_state), rel=1e-12)
        evaluation.apply_beam(n, w)
        assert evaluation.see == pytest.approx(ev.see(evaluation.state), rel=1e-12)


def test_beam_trial_with_cached_eve_matrix(tiny):
    ev = SeeEvaluator(tiny, "rigorous")
    rng = np.random.default_rng(9)
    state = random_feasible_state(tiny, rng)
    evaluation = ev.evaluate(state.copy())
    n = 2
    mat = ev.eve_steering_matrix(state.trajectory[n + 1], state.angles[n])
    w = rng.normal(size=tiny.n_ma) + 1j * rng.normal(size=tiny.n_ma)
    w /= np.linalg.norm(w)
    assert evaluation.trial_beam(n, w, mat) == pytest.approx(
        evaluation.trial_beam(n, w), rel=1e-12
    )


@pytest.mark.parametrize("mode", ["paper", "rigorous"])
def test_incremental_waypoint_trial_matches_full(tiny, mode):
    ev = SeeEvaluator(tiny, mode)
    rng = np.random.default_rng(10)
    state = random_feasible_state(tiny, rng)
    evaluation = ev.evaluate(state.copy())
    rad = tiny.v_max * tiny.dt
    for m in (1, tiny.n_step - 1):
        traj = evaluation.state.trajectory
        q = traj[m].copy()
        q[:2] += rng.uniform(-0.2 * rad, 0.2 * rad, size=2)
        if (np.linalg.norm(q - traj[m - 1]) > rad
                or np.linalg.norm(traj[m + 1] - q) > rad):
            continue
        trial = evaluation.trial_waypoint(m, q)
        full_state = evaluation.state.copy()
        full_state.trajectory[m] = q
        assert trial == pytest.approx(ev.see(full_state), rel=1e-12)
        evaluation.apply_waypoint(m, q)
        assert evaluation.see == pytest.approx(ev.see(evaluation.state), rel=1e-12)


def test_trial_does_not_mutate(tiny):
    ev = SeeEvaluator(tiny, "paper")
    state = initial_state(tiny)
    evaluation = ev.evaluate(state.copy())
    before = evaluation.see
    snap = evaluation.state.copy()
    evaluation.trial_angle(0, np.array([0.3, -0.3]))
    evaluation.trial_beam(0, np.zeros(tiny.n_ma, dtype=complex))
    evaluation.trial_waypoint(1, evaluation.state.trajectory[1] + [0.1, 0.1, 0.0])
    assert evaluation.see == before
    assert np.array_equal(evaluation.state.trajectory, snap.trajectory)
    assert np.array_equal(evaluation.state.angles, snap.angles)
    assert np.array_equal(evaluation.state.beams, snap.beams)
