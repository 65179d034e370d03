"""Figure-8 reference paths on the tether sphere.

The path is a lemniscate of Booth in spherical angles: azimuth about the
vertical axis measured from straight downstream, elevation from the
horizontal.  The inertial frame is x downstream, y cross-stream (port),
z up, winch at the origin.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class BasisParams:
    """Lemniscate shape vector b.

    b1 is the elevation amplitude; b1/b2 sets the azimuth width; b3 and b4
    are the mean azimuth and elevation.  All radians.
    """

    b1: float = 0.3
    b2: float = 0.2
    b3: float = 0.0
    b4: float = 0.5

    def __post_init__(self):
        if self.b2 == 0.0:
            raise ValueError("b2 must be nonzero")

    def as_array(self) -> np.ndarray:
        return np.array([self.b1, self.b2, self.b3, self.b4])

    @classmethod
    def from_array(cls, arr) -> "BasisParams":
        b1, b2, b3, b4 = (float(v) for v in arr)
        return cls(b1, b2, b3, b4)


def path_angles(b: BasisParams, p):
    """(azimuth, elevation) at path position p; p may be an array."""
    q = (b.b1 / b.b2) ** 2
    s, c = np.sin(p), np.cos(p)
    denom = 1.0 + q * c**2
    phi = q * s * c / denom + b.b3
    theta = b.b1 * s / denom + b.b4
    return phi, theta


def sphere_point(phi, theta, radius):
    """Inertial position for spherical angles at the given radius."""
    ct = np.cos(theta)
    return radius * np.stack(
        [ct * np.cos(phi), ct * np.sin(phi), np.sin(theta) * np.ones_like(ct)],
        axis=-1)


def path_point(b: BasisParams, p, radius) -> np.ndarray:
    phi, theta = path_angles(b, p)
    return sphere_point(phi, theta, radius)


def path_tangent(b: BasisParams, p: float, radius: float, dp: float = 1e-6) -> np.ndarray:
    """Unit tangent along increasing p (central difference)."""
    ahead = path_point(b, p + dp, radius)
    behind = path_point(b, p - dp, radius)
    diff = ahead - behind
    return diff / np.linalg.norm(diff)


# spool-in on the two azimuth-edge quarters of the lap, spool-out in the
# two center quarters; half-open intervals decide the boundaries
SPOOL_IN_SPANS = ((0.25 * math.pi, 0.75 * math.pi),
                  (1.25 * math.pi, 1.75 * math.pi))


def spool_phase(p: float) -> str:
    """"in" on the edge quarters of the path, "out" on the center quarters."""
    p = p % (2.0 * math.pi)
    for lo, hi in SPOOL_IN_SPANS:
        if lo <= p < hi:
            return "in"
    return "out"


def nearest_path_position(b: BasisParams, direction: np.ndarray,
                          p_guess: float, window: float = 0.6,
                          n_scan: int = 61) -> float:
    """Path position whose direction is closest to the kite's, searched in
    a forward window from the last known position (keeps p monotone)."""
    candidates = p_guess + np.linspace(0.0, window, n_scan)
    phi, theta = path_angles(b, candidates)
    pts = np.stack([np.cos(theta) * np.cos(phi),
                    np.cos(theta) * np.sin(phi),
                    np.sin(theta)], axis=-1)
    unit = direction / np.linalg.norm(direction)
    dots = pts @ unit
    return float(candidates[int(np.argmax(dots))])


def interior_angle(b: BasisParams, p: float, position: np.ndarray) -> float:
    """Angle between the kite's direction and the path point at p (rad);
    the cross-track error measure on the sphere."""
    unit = position / np.linalg.norm(position)
    phi, theta = path_angles(b, p)
    target = np.array([math.cos(theta) * math.cos(phi),
                       math.cos(theta) * math.sin(phi),
                       math.sin(theta)])
    return float(np.arccos(np.clip(unit @ target, -1.0, 1.0)))
