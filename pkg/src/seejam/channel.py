"""LoS channel construction and worst-case eavesdropper gain bounds."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import kernels
from .errors import InfeasibleScenarioError, ValidationError
from .geometry import (
    SPEED_OF_LIGHT,
    ArrayGeometry,
    Orientation,
    frame_matrix,
    local_direction,
    steering_vector,
    wavenumber,
)

BS_ORIENTATION = Orientation(0.0, 0.0)  # fixed downward frame for the BS array


def beta0(f_hz):
    """Path gain at 1 m reference distance."""
    return (SPEED_OF_LIGHT / (4.0 * np.pi * f_hz)) ** 2


def path_loss(d, alpha, f_hz):
    """Large-scale path gain beta0 * d^-alpha (linear)."""
    if d <= 0:
        raise ValidationError("distance must be positive")
    return beta0(f_hz) * d ** (-alpha)


@dataclass(frozen=True)
class ChannelVec:
    gain: np.ndarray  # sqrt(path_loss) * steering vector
    path_loss: float
    distance: float


def channel(tx_pos, rx_pos, o: Orientation, geom: ArrayGeometry, alpha, f_hz):
    """LoS channel vector h = sqrt(beta) * g for one link."""
    tx_pos = np.asarray(tx_pos, dtype=float)
    rx_pos = np.asarray(rx_pos, dtype=float)
    d = float(np.linalg.norm(rx_pos - tx_pos))
    beta = path_loss(d, alpha, f_hz)
    g = steering_vector(geom, local_direction(tx_pos, rx_pos, o), f_hz)
    return ChannelVec(np.sqrt(beta) * g, beta, d)


def worst_case_eve_gains(q_j, sc):
    """Path-gain bounds over the eavesdropper uncertainty disc.

    Returns (h_be, h_je): an upper bound on the BS->eve path gain and a
    lower bound on the UAV->eve path gain, from the triangle inequality on
    the nominal distances.
    """
    d_be = float(np.linalg.norm(sc.q_b - sc.q_e_est))
    if d_be <= sc.epsilon:
        raise InfeasibleScenarioError("BS inside the eavesdropper uncertainty region")
    d_je = float(np.linalg.norm(np.asarray(q_j, dtype=float) - sc.q_e_est))
    b0 = beta0(sc.f_hz)
    h_be = b0 * (d_be - sc.epsilon) ** (-sc.alpha_be)
    h_je = b0 * (d_je + sc.epsilon) ** (-sc.alpha_je)
    return h_be, h_je


def eve_grid(sc, resolution):
    """Polar sampling of the uncertainty disc (nested when doubled).

    Points are the disc center plus ``resolution`` radii x ``resolution``
    angles; doubling the resolution yields a superset of the points.
    """
    if resolution < 1:
        raise ValidationError("grid resolution must be >= 1")
    center = sc.q_e_est
    if sc.epsilon == 0.0:
        return center[None, :].copy()
    radii = sc.epsilon * np.arange(1, resolution + 1) / resolution
    angles = 2.0 * np.pi * np.arange(resolution) / resolution
    rr, aa = np.meshgrid(radii, angles, indexing="ij")
    pts = np.zeros((resolution * resolution + 1, 3))
    pts[0] = center
    pts[1:, 0] = center[0] + (rr * np.cos(aa)).ravel()
    pts[1:, 1] = center[1] + (rr * np.sin(aa)).ravel()
    pts[1:, 2] = center[2]
    return pts


def rotated_elements(geom: ArrayGeometry, o: Orientation):
    """Element positions mapped so that phases = k * d_global^T p_rot."""
    return frame_matrix(o).T @ geom.element_positions.T


def directions_to(points, origin):
    d = np.asarray(points, dtype=float) - np.asarray(origin, dtype=float)
    return d / np.linalg.norm(d, axis=1, keepdims=True)


def min_eve_beam_gain(q_j, o: Orientation, w, sc, resolution=None):
    """Lower bound min_i |g(u_i)^H w|^2 of the jamming beam gain over the disc."""
    res = sc.gain_grid_res if resolution is None else resolution
    pts = eve_grid(sc, res)
    dirs = directions_to(pts, q_j)
    return kernels.min_beam_gain(dirs, rotated_elements(sc.ma_geometry, o), w,
                                 wavenumber(sc.f_hz))


def eve_rate_oracle(q_j, o: Orientation, w_j, w_b, sc, grid_resolution):
    """Brute-force worst-case eavesdropper rate over the uncertainty disc.

    Evaluates the true SINR (exact channels, no bounds) on the polar grid and
    returns the maximum of log2(1 + gamma_e).
    """
    if grid_resolution < 8:
        raise ValidationError("grid_resolution must be >= 8")
    pts = eve_grid(sc, grid_resolution)
    q_j = np.asarray(q_j, dtype=float)
    k = wavenumber(sc.f_hz)
    b0 = beta0(sc.f_hz)

    d_b = np.linalg.norm(pts - sc.q_b, axis=1)
    gain_b = kernels.beam_gains(directions_to(pts, sc.q_b),
                                rotated_elements(sc.bs_geometry, BS_ORIENTATION), w_b, k)
    sig = sc.p_b * b0 * d_b ** (-sc.alpha_be) * gain_b

    d_j = np.linalg.norm(pts - q_j, axis=1)
    gain_j = kernels.beam_gains(directions_to(pts, q_j),
                                rotated_elements(sc.ma_geometry, o), w_j, k)
    interf = sc.p_j * b0 * d_j ** (-sc.alpha_je) * gain_j

    gamma = sig / (interf + sc.sigma2_e)
    return float(np.max(np.log2(1.0 + gamma)))
