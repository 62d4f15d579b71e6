"""Problem-instance definition, JSON loading and feasibility validation."""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, replace

import numpy as np

from .energy import MAPowerParams, RotorcraftPowerParams
from .errors import SchemaError
from .geometry import half_wavelength_array
from .errors import InfeasibleScenarioError

BOUND_MODES = ("paper", "rigorous")


def dbm_to_watt(dbm):
    return 10.0 ** ((dbm - 30.0) / 10.0)


@dataclass(frozen=True)
class Scenario:
    """Immutable problem instance (positions in m, powers in W, f in Hz)."""

    q_b: np.ndarray
    q_u: np.ndarray
    q_e_est: np.ndarray
    q_i: np.ndarray
    q_f: np.ndarray
    p_b: float
    p_j: float
    sigma2_u: float
    sigma2_e: float
    alpha_bu: float
    alpha_be: float
    alpha_ju: float
    alpha_je: float
    f_hz: float
    epsilon: float
    t_flight: float
    n_step: int
    v_max: float
    n_b: int
    ma_nx: int
    ma_ny: int
    power: RotorcraftPowerParams
    ma_power: MAPowerParams
    gain_grid_res: int = 64  # grid for worst-case beam-gain bounds (rigorous mode)

    @property
    def dt(self):
        return self.t_flight / self.n_step

    @property
    def n_ma(self):
        return self.ma_nx * self.ma_ny

    @property
    def h_j(self):
        return float(self.q_i[2])

    @property
    def ma_geometry(self):
        return half_wavelength_array(self.ma_nx, self.ma_ny, self.f_hz)

    @property
    def bs_geometry(self):
        # The BS is a fixed uniform linear array along global x at q_b.
        return half_wavelength_array(self.n_b, 1, self.f_hz)

    def findings(self):
        """Feasibility findings; empty list means valid."""
        out = []
        if self.epsilon < 0:
            out.append("epsilon must be non-negative")
        if self.n_step < 1:
            out.append("n_step must be >= 1")
        for name in ("p_b", "p_j", "sigma2_u", "sigma2_e", "f_hz", "t_flight", "v_max"):
            if getattr(self, name) <= 0:
                out.append(f"{name} must be positive")
        for name in ("q_b", "q_u", "q_e_est", "q_i", "q_f"):
            if not np.all(np.isfinite(getattr(self, name))):
                out.append(f"{name} has non-finite coordinates")
        if self.n_step >= 1 and self.v_max > 0:
            reach = self.v_max * self.dt * self.n_step
            need = float(np.linalg.norm(self.q_f - self.q_i))
            if reach + 1e-9 < need:
                out.append(
                    f"endpoints unreachable: v_max*T = {reach:.3f} m < ||q_f - q_i|| = {need:.3f} m"
                )
        if float(np.linalg.norm(self.q_b - self.q_e_est)) <= self.epsilon:
            out.append("BS lies inside the eavesdropper uncertainty region")
        if abs(self.q_i[2] - self.q_f[2]) > 1e-9:
            out.append("q_i and q_f must share the flight altitude")
        return out

    def check(self):
        problems = self.findings()
        if problems:
            raise InfeasibleScenarioError("; ".join(problems))
        return self


_REQUIRED_KEYS = [
    "q_b", "q_u", "q_e_est", "q_i", "q_f",
    "p_b", "p_j",
    "alpha_bu", "alpha_be", "alpha_ju", "alpha_je",
    "epsilon", "t_flight", "n_step", "v_max",
    "n_b", "ma_nx", "ma_ny",
    "p0", "p1", "u_tip_sq", "v0", "r_drag", "rho", "rotor_solidity", "rotor_disc_area",
    "p_base", "zeta", "xi",
]

_DEFAULTS = {
    "omega_el_max": math.pi / 4,
    "omega_az_max": math.pi / 4,
    "gain_grid_res": 64,
}


def _vec3(raw, key):
    try:
        v = np.asarray(raw, dtype=float)
    except (TypeError, ValueError):
        raise SchemaError(f"key '{key}' must be a 3-vector of numbers") from None
    if v.shape != (3,):
        raise SchemaError(f"key '{key}' must have exactly 3 components")
    if not np.all(np.isfinite(v)):
        raise SchemaError(f"key '{key}' has non-finite values")
    return v


def _num(raw, key):
    if not isinstance(raw, (int, float)) or isinstance(raw, bool) or not math.isfinite(raw):
        raise SchemaError(f"key '{key}' must be a finite number")
    return float(raw)


def scenario_from_dict(doc):
    """Build and validate a Scenario from a parsed JSON document.

    Frequency is given as ``f_hz`` or ``f_ghz``; noise as ``sigma2_{u,e}_w``
    or ``sigma2_{u,e}_dbm``. Angular velocity limits default to pi/4 rad/s.
    """
    if not isinstance(doc, dict):
        raise SchemaError("scenario document must be a JSON object")
    missing = [k for k in _REQUIRED_KEYS if k not in doc]
    if missing:
        raise SchemaError(f"missing required keys: {', '.join(missing)}")
    if "f_hz" in doc:
        f_hz = _num(doc["f_hz"], "f_hz")
    elif "f_ghz" in doc:
        f_hz = _num(doc["f_ghz"], "f_ghz") * 1e9
    else:
        raise SchemaError("missing required keys: f_hz (or f_ghz)")
    sigma = {}
    for node in ("u", "e"):
        if f"sigma2_{node}_w" in doc:
            sigma[node] = _num(doc[f"sigma2_{node}_w"], f"sigma2_{node}_w")
        elif f"sigma2_{node}_dbm" in doc:
            sigma[node] = dbm_to_watt(_num(doc[f"sigma2_{node}_dbm"], f"sigma2_{node}_dbm"))
        else:
            raise SchemaError(f"missing required keys: sigma2_{node}_w (or sigma2_{node}_dbm)")
    power = RotorcraftPowerParams(
        p0=_num(doc["p0"], "p0"),
        p1=_num(doc["p1"], "p1"),
        u_tip_sq=_num(doc["u_tip_sq"], "u_tip_sq"),
        v0=_num(doc["v0"], "v0"),
        r_drag=_num(doc["r_drag"], "r_drag"),
        rho=_num(doc["rho"], "rho"),
        s=_num(doc["rotor_solidity"], "rotor_solidity"),
        a=_num(doc["rotor_disc_area"], "rotor_disc_area"),
    )
    ma_power = MAPowerParams(
        p_base=_num(doc["p_base"], "p_base"),
        zeta=_num(doc["zeta"], "zeta"),
        xi=_num(doc["xi"], "xi"),
        omega_el_max=_num(doc.get("omega_el_max", _DEFAULTS["omega_el_max"]), "omega_el_max"),
        omega_az_max=_num(doc.get("omega_az_max", _DEFAULTS["omega_az_max"]), "omega_az_max"),
    )
    sc = Scenario(
        q_b=_vec3(doc["q_b"], "q_b"),
        q_u=_vec3(doc["q_u"], "q_u"),
        q_e_est=_vec3(doc["q_e_est"], "q_e_est"),
        q_i=_vec3(doc["q_i"], "q_i"),
        q_f=_vec3(doc["q_f"], "q_f"),
        p_b=_num(doc["p_b"], "p_b"),
        p_j=_num(doc["p_j"], "p_j"),
        sigma2_u=sigma["u"],
        sigma2_e=sigma["e"],
        alpha_bu=_num(doc["alpha_bu"], "alpha_bu"),
        alpha_be=_num(doc["alpha_be"], "alpha_be"),
        alpha_ju=_num(doc["alpha_ju"], "alpha_ju"),
        alpha_je=_num(doc["alpha_je"], "alpha_je"),
        f_hz=f_hz,
        epsilon=_num(doc["epsilon"], "epsilon"),
        t_flight=_num(doc["t_flight"], "t_flight"),
        n_step=int(_num(doc["n_step"], "n_step")),
        v_max=_num(doc["v_max"], "v_max"),
        n_b=int(_num(doc["n_b"], "n_b")),
        ma_nx=int(_num(doc["ma_nx"], "ma_nx")),
        ma_ny=int(_num(doc["ma_ny"], "ma_ny")),
        power=power,
        ma_power=ma_power,
        gain_grid_res=int(_num(doc.get("gain_grid_res", _DEFAULTS["gain_grid_res"]),
                               "gain_grid_res")),
    )
    problems = sc.findings()
    if problems:
        raise SchemaError("; ".join(problems))
    return sc


def load_scenario(path):
    """Load, unit-normalize and validate a scenario JSON file."""
    try:
        with open(path) as fh:
            doc = json.load(fh)
    except json.JSONDecodeError as exc:
        raise SchemaError(f"invalid JSON in {path}: {exc}") from exc
    return scenario_from_dict(doc)


def validate_file(path):
    """Schema + feasibility report for a scenario file without optimizing.

    Returns a list of findings; empty means valid.
    """
    try:
        load_scenario(path)
    except SchemaError as exc:
        return [str(exc)]
    except OSError as exc:
        return [f"cannot read {path}: {exc}"]
    return []


def with_overrides(sc: Scenario, **kwargs):
    return replace(sc, **kwargs)
