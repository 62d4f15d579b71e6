import json
import os

import numpy as np
import pytest

from seejam.scenario import load_scenario, scenario_from_dict

REPO_ROOT = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))
TABLE1 = os.path.join(REPO_ROOT, "scenarios", "table1.json")


def table1_doc():
    with open(TABLE1) as fh:
        return json.load(fh)


@pytest.fixture(scope="session")
def table1():
    return load_scenario(TABLE1)


@pytest.fixture(scope="session")
def tiny():
    """Scaled-down instance for fast optimizer tests: 6 slots, coarse grid."""
    doc = table1_doc()
    doc.update(n_step=6, t_flight=6.0, q_i=[-20.0, 0.0, 50.0], q_f=[40.0, 0.0, 50.0],
               gain_grid_res=12)
    return scenario_from_dict(doc)


def random_feasible_state(sc, rng):
    """A random state satisfying endpoint, speed, angle and beam constraints."""
    from seejam.driver import initial_state

    state = initial_state(sc)
    rad = sc.v_max * sc.dt
    n = sc.n_step
    for m in range(1, n):
        lim = 0.3 * rad
        state.trajectory[m, :2] += rng.uniform(-lim, lim, size=2)
    # repair any speed violations by pulling toward the straight line
    from seejam.trajopt import project_feasible

    straight = initial_state(sc).trajectory
    state.trajectory = project_feasible(state.trajectory, straight, sc)
    omega_dt = min(sc.ma_power.omega_el_max, sc.ma_power.omega_az_max) * sc.dt
    step = rng.uniform(-omega_dt, omega_dt, size=(n, 2))
    state.angles = np.clip(np.cumsum(step, axis=0), -np.pi / 2, np.pi / 2)
    w = rng.normal(size=(n, sc.n_ma)) + 1j * rng.normal(size=(n, sc.n_ma))
    w /= np.linalg.norm(w, axis=1, keepdims=True)
    w *= rng.uniform(0.2, 1.0, size=(n, 1))
    state.beams = w
    return state
