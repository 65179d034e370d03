"""Hierarchical flight controller and phase-switched winch controller.

The flight controller has four levels: a lookahead point on the path sets
a desired velocity angle on the local tangent plane; the velocity-angle
error maps (PI) to a desired tangent roll; the roll error maps (PI) to a
dimensionless moment command; and a fixed allocation turns that command
into aileron and rudder deflections.  The winch switches spooling speed
and elevator trim by path phase.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .paths import BasisParams, path_angles, spool_phase
from ..hydro import FlowEnv


def wrap_angle(a: float) -> float:
    return (a + math.pi) % (2.0 * math.pi) - math.pi


def tangent_basis(position: np.ndarray) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """(radial, east, north) unit vectors of the tangent plane at position."""
    radial = position / np.linalg.norm(position)
    east = np.cross(np.array([0.0, 0.0, 1.0]), radial)
    norm = np.linalg.norm(east)
    if norm < 1e-12:
        east = np.array([0.0, 1.0, 0.0])
    else:
        east = east / norm
    north = np.cross(radial, east)
    return radial, east, north


def velocity_angle(position: np.ndarray, velocity: np.ndarray) -> float:
    """Direction of motion on the sphere, measured from local east."""
    _, east, north = tangent_basis(position)
    return math.atan2(float(velocity @ north), float(velocity @ east))


@dataclass
class FlightGains:
    lookahead: float = 0.5           # rad of path position ahead
    velocity_kp: float = 1.2
    velocity_ki: float = 0.0
    roll_limit: float = 0.4          # rad
    roll_kp: float = 1.2
    roll_ki: float = 0.1
    moment_coeff_limit: float = 0.25
    aileron_gain: float = 1.5        # dCL per rad, must match the kite build
    aileron_limit: float = 0.25      # rad
    rudder_share: float = 0.3        # rudder deflection per aileron deflection
    rudder_limit: float = 0.4


@dataclass
class WinchParams:
    spool_ratio: float = 1.0 / 3.0
    elevator_out: float = -0.25      # nose-up trim: high lift while paying out
    elevator_in: float = 0.0         # de-powered for cheap reel-in


class FlightController:
    """Stateful PI cascade; one update per control step (zero-order hold)."""

    def __init__(self, gains: FlightGains, basis: BasisParams, dt: float):
        self.gains = gains
        self.basis = basis
        self.dt = dt
        self.reset()

    def reset(self):
        self._vel_int = 0.0
        self._roll_int = 0.0

    def update(self, position: np.ndarray, velocity: np.ndarray,
               body_y: np.ndarray, p_now: float) -> tuple[float, float, dict]:
        g = self.gains
        radial, east, north = tangent_basis(position)

        phi_t, theta_t = path_angles(self.basis, p_now + g.lookahead)
        target = np.linalg.norm(position) * np.array(
            [math.cos(theta_t) * math.cos(phi_t),
             math.cos(theta_t) * math.sin(phi_t),
             math.sin(theta_t)])
        chase = target - position
        chase_t = chase - (chase @ radial) * radial
        gamma_des = math.atan2(float(chase_t @ north), float(chase_t @ east))
        gamma = velocity_angle(position, velocity)
        vel_err = wrap_angle(gamma_des - gamma)

        # rolling the port wing outward tilts lift to starboard and turns
        # the track clockwise, so the roll command opposes the heading error
        roll_des = -(g.velocity_kp * vel_err + g.velocity_ki * self._vel_int)
        if abs(roll_des) < g.roll_limit:
            self._vel_int += vel_err * self.dt
        roll_des = float(np.clip(roll_des, -g.roll_limit, g.roll_limit))

        roll = math.asin(float(np.clip(body_y @ radial, -1.0, 1.0)))
        roll_err = roll_des - roll
        c_m = g.roll_kp * roll_err + g.roll_ki * self._roll_int
        if abs(c_m) < g.moment_coeff_limit:
            self._roll_int += roll_err * self.dt
        c_m = float(np.clip(c_m, -g.moment_coeff_limit, g.moment_coeff_limit))

        # antisymmetric ailerons at quarter-span levers: dCl = gain*delta/4
        aileron = float(np.clip(4.0 * c_m / g.aileron_gain,
                                -g.aileron_limit, g.aileron_limit))
        rudder = float(np.clip(g.rudder_share * aileron,
                               -g.rudder_limit, g.rudder_limit))
        diag = {"gamma": gamma, "gamma_des": gamma_des, "roll": roll,
                "roll_des": roll_des, "moment_coeff": c_m}
        return aileron, rudder, diag


def winch_command(p: float, params: WinchParams, flow: FlowEnv) -> tuple[float, float]:
    """(spool speed, elevator deflection) for the current path position."""
    if spool_phase(p) == "out":
        return params.spool_ratio * flow.speed, params.elevator_out
    return -params.spool_ratio * flow.speed, params.elevator_in
