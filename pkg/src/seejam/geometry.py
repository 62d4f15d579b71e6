"""Array geometry, rotations and steering vectors.

The movable-antenna panel hangs under the UAV; its local frame is related to
the global frame by ``U = R_Z(phi_z) R_Y(0) R_X(phi_x) F`` with
``F = diag(1, -1, -1)`` (downward-facing panel). A ground node at local
direction ``(0, 0, 1)`` sits at boresight.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import DegenerateGeometryError, ValidationError

SPEED_OF_LIGHT = 3.0e8  # m/s

PHI_MIN = -np.pi / 2
PHI_MAX = np.pi / 2

# Panel-flip matrix: local Z' points down, Y' inverted.
FLIP = np.diag([1.0, -1.0, -1.0])


@dataclass(frozen=True)
class Orientation:
    """Panel rotation angles about the local X' and Z' axes (phi_y == 0)."""

    phi_x: float = 0.0
    phi_z: float = 0.0

    def __post_init__(self):
        for name, val in (("phi_x", self.phi_x), ("phi_z", self.phi_z)):
            if not np.isfinite(val) or not (PHI_MIN - 1e-12 <= val <= PHI_MAX + 1e-12):
                raise ValidationError(f"{name}={val} outside [-pi/2, pi/2]")

    def as_array(self):
        return np.array([self.phi_x, self.phi_z])


@dataclass(frozen=True)
class ArrayGeometry:
    """Rectangular panel of n_x * n_y elements at fixed spacing.

    Element (a, b) (1-based) sits at ((a-1)*spacing, (b-1)*spacing, 0) in the
    local frame and occupies flat index (a-1)*n_y + (b-1).
    """

    n_x: int
    n_y: int
    spacing: float
    element_positions: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if self.n_x < 1 or self.n_y < 1 or self.spacing <= 0:
            raise ValidationError("array geometry requires n_x, n_y >= 1 and spacing > 0")
        a, b = np.meshgrid(np.arange(self.n_x), np.arange(self.n_y), indexing="ij")
        pos = np.stack(
            [a.ravel() * self.spacing, b.ravel() * self.spacing, np.zeros(self.n_x * self.n_y)],
            axis=1,
        )
        object.__setattr__(self, "element_positions", pos)

    @property
    def size(self):
        return self.n_x * self.n_y

    @property
    def max_element_radius(self):
        """Largest ||p_ab||, used in Lipschitz bounds for the gain pattern."""
        return float(np.max(np.linalg.norm(self.element_positions, axis=1)))


def half_wavelength_array(n_x, n_y, f_hz):
    return ArrayGeometry(n_x, n_y, SPEED_OF_LIGHT / f_hz / 2.0)


def rotation_matrix(axis, angle):
    """Right-handed rotation about a principal axis ('X', 'Y' or 'Z')."""
    c, s = np.cos(angle), np.sin(angle)
    if axis == "X":
        return np.array([[1, 0, 0], [0, c, -s], [0, s, c]], dtype=float)
    if axis == "Y":
        return np.array([[c, 0, s], [0, 1, 0], [-s, 0, c]], dtype=float)
    if axis == "Z":
        return np.array([[c, -s, 0], [s, c, 0], [0, 0, 1]], dtype=float)
    raise ValidationError(f"unknown axis {axis!r}")


def frame_matrix(o: Orientation):
    """Global -> local transform U = R_Z R_Y(0) R_X F."""
    return rotation_matrix("Z", o.phi_z) @ rotation_matrix("X", o.phi_x) @ FLIP


def local_direction(tx_pos, rx_pos, o: Orientation):
    """Unit direction from tx to rx expressed in the panel's local frame."""
    tx_pos = np.asarray(tx_pos, dtype=float)
    rx_pos = np.asarray(rx_pos, dtype=float)
    d = rx_pos - tx_pos
    dist = float(np.linalg.norm(d))
    if dist < 1e-12:
        raise DegenerateGeometryError("tx and rx positions coincide")
    return frame_matrix(o) @ (d / dist)


def wavenumber(f_hz):
    return 2.0 * np.pi * f_hz / SPEED_OF_LIGHT


def steering_vector(geom: ArrayGeometry, u_local, f_hz):
    """Array response: entry exp(j * 2 pi f / c * u^T p) per element."""
    u_local = np.asarray(u_local, dtype=float)
    nrm = float(np.linalg.norm(u_local))
    if abs(nrm - 1.0) > 1e-9:
        raise ValidationError(f"direction must be unit norm (got {nrm})")
    phases = wavenumber(f_hz) * (geom.element_positions @ u_local)
    return np.exp(1j * phases)


def clamp_orientation(phi_x, phi_z, box=None):
    """Componentwise projection onto the angle box (defaults to +-pi/2)."""
    lo_x, hi_x, lo_z, hi_z = box if box is not None else (PHI_MIN, PHI_MAX, PHI_MIN, PHI_MAX)
    return Orientation(float(np.clip(phi_x, lo_x, hi_x)), float(np.clip(phi_z, lo_z, hi_z)))


def boresight_angles_toward(tx_pos, target):
    """Orientation steering the panel boresight as close as possible to a target.

    With phi_y fixed at zero, the boresight's global direction is
    (0, -sin(phi_x), -cos(phi_x)) independent of phi_z, so the residual
    depends on phi_x alone and the box-constrained minimizer is closed form.
    Returns (orientation, residual_angle_radians).
    """
    tx_pos = np.asarray(tx_pos, dtype=float)
    target = np.asarray(target, dtype=float)
    d = target - tx_pos
    dist = float(np.linalg.norm(d))
    if dist < 1e-12:
        raise DegenerateGeometryError("target coincides with position")
    g = d / dist
    # cos(residual) = -g_y sin(phi_x) - g_z cos(phi_x), maximized at
    # phi_x = atan2(-g_y, -g_z) (clipped into the box).
    phi_x = float(np.clip(np.arctan2(-g[1], -g[2]), PHI_MIN, PHI_MAX))
    cos_res = -g[1] * np.sin(phi_x) - g[2] * np.cos(phi_x)
    residual = float(np.arccos(np.clip(cos_res, -1.0, 1.0)))
    return Orientation(phi_x, 0.0), residual
