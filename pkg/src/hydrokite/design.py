"""Kite assembly geometry: stabilizer and hull scaling, displaced volume,
and the ballast that closes neutral buoyancy.

The design vector only sizes the wing and hull; stabilizers and hull follow
the wing through a fixed scaling rule.  Displaced volume is what the closed
outer skin sweeps: foil outline area times span for each lifting surface
plus the hull cylinder.
"""

from __future__ import annotations

from dataclasses import dataclass
import math

from .hydro import WingPlanform
from .wingstruct import FourDigitFoil

FUSE_DIAMETER_RANGE = (0.4, 0.8)
FUSE_LENGTH_RANGE = (6.0, 10.0)
SPAN_RANGE = (7.0, 10.0)
ASPECT_RANGE = (4.0, 12.0)


@dataclass(frozen=True)
class ScalingRule:
    """How stabilizers and hull track the wing planform."""

    hstab_area_fraction: float = 0.25
    vstab_area_fraction: float = 0.15
    fuse_length_factor: float = 0.75    # L = factor * span, clamped to bounds
    fuse_diameter_factor: float = 0.07  # D = factor * span, clamped to bounds

    def fuselage(self, planform: WingPlanform) -> tuple[float, float]:
        """(D, L) for a wing, clamped into the hull design box."""
        d = min(max(self.fuse_diameter_factor * planform.span,
                    FUSE_DIAMETER_RANGE[0]), FUSE_DIAMETER_RANGE[1])
        length = min(max(self.fuse_length_factor * planform.span,
                         FUSE_LENGTH_RANGE[0]), FUSE_LENGTH_RANGE[1])
        return d, length

    def hstab(self, planform: WingPlanform) -> WingPlanform:
        return _stab_planform(planform, self.hstab_area_fraction)

    def vstab(self, planform: WingPlanform) -> WingPlanform:
        return _stab_planform(planform, self.vstab_area_fraction)


def _stab_planform(planform: WingPlanform, area_fraction: float) -> WingPlanform:
    # stabilizer keeps the wing's aspect ratio at a fraction of its area
    area = area_fraction * planform.area
    span = math.sqrt(planform.aspect_ratio * area)
    return WingPlanform(span=span, aspect_ratio=planform.aspect_ratio)


def foil_outline_area(foil: FourDigitFoil = FourDigitFoil()) -> float:
    """Enclosed area of the unit-chord section (camber does not change it)."""
    # closed-form integral of 2*y_t over [0, 1]
    bracket = (0.2969 * 2.0 / 3.0 - 0.1260 / 2.0 - 0.3516 / 3.0
               + 0.2843 / 4.0 - 0.1036 / 5.0)
    return 10.0 * foil.thickness * bracket


def surface_volume(planform: WingPlanform, foil: FourDigitFoil = FourDigitFoil()) -> float:
    """Displaced volume of one closed lifting surface."""
    return foil_outline_area(foil) * planform.chord**2 * planform.span


def hull_volume(diameter: float, length: float) -> float:
    return math.pi * (diameter / 2.0) ** 2 * length


def displaced_volume(
    planform: WingPlanform,
    fuse_diameter: float,
    fuse_length: float,
    rule: ScalingRule = ScalingRule(),
    foil: FourDigitFoil = FourDigitFoil(),
) -> float:
    """Total displaced volume: wing, both stabilizers, and hull."""
    return (surface_volume(planform, foil)
            + surface_volume(rule.hstab(planform), foil)
            + surface_volume(rule.vstab(planform), foil)
            + hull_volume(fuse_diameter, fuse_length))


def ballast_mass(structural_mass: float, volume: float, water_density: float = 1000.0) -> float:
    """Ballast that brings the kite to neutral buoyancy; zero when the
    structure already outweighs the displaced water."""
    return max(water_density * volume - structural_mass, 0.0)
