"""Wing box-section integration and minimum-mass sizing tests.

The section integrator is checked against an independent oracle that
rebuilds the same material layout (inward-offset shell bands plus
full-depth spar webs at fixed stations) on a dense uniform grid and
integrates with the trapezoid rule.
"""

import math

import numpy as np
import pytest

from hydrokite.errors import GeometryError, Infeasible
from hydrokite.hydro import FlowEnv, FoilCoeffs, WingPlanform
from hydrokite.wingstruct import (
    Material,
    WingStructureDesign,
    rated_wing_load,
    required_inertia,
    section_properties,
    swdt_optimize,
    wing_mass,
)

SPAR_STATIONS = {1: (0.25,), 2: (0.10, 0.40), 3: (0.15, 0.30, 0.60)}

# Frozen oracle values (uniform 20001-node trapezoid integration, unit chord),
# keyed by (n_spars, spar_width_pct, shell_pct): (area, inertia, y_neutral).
ORACLE_SECTIONS = {
    (2, 3.0, 5.0): (0.017475927233469808, 2.5700962198405223e-05, 0.014071140338068767),
    (1, 13.9, 0.78): (0.018031852037891035, 2.188230353841639e-05, 0.016629897453819584),
    (3, 10.0, 2.0): (0.035046802973926254, 3.624224399018556e-05, 0.015842510545266877),
}

MID_PLANFORM = WingPlanform(span=8.51, aspect_ratio=6.0)
MID_CATALOG_MASS = 628.7


def oracle_section(n_spars, spar_width_pct, shell_pct, n=20001):
    """Independent unit-chord section integration on a uniform grid."""
    x = np.linspace(0.0, 1.0, n)
    yt = 5 * 0.12 * (0.2969 * np.sqrt(x) - 0.1260 * x - 0.3516 * x**2
                     + 0.2843 * x**3 - 0.1036 * x**4)
    m, p = 0.02, 0.4
    yc = np.where(x < p,
                  m / p**2 * (2 * p * x - x**2),
                  m / (1 - p)**2 * ((1 - 2 * p) + 2 * p * x - x**2))
    yu, yl = yc + yt, yc - yt
    t_shell = shell_pct / 100.0 * np.max(yu - yl)
    # vertical band height = normal thickness stretched by the surface slope
    fu = np.sqrt(1 + np.gradient(yu, x)**2)
    fl = np.sqrt(1 + np.gradient(yl, x)**2)
    w = spar_width_pct / 100.0
    spar = np.zeros_like(x, dtype=bool)
    for st in SPAR_STATIONS[n_spars]:
        spar |= (x >= st - 0.5 * w) & (x <= st + 0.5 * w)
    band_u, band_l = t_shell * fu, t_shell * fl
    solid = spar | (band_u + band_l >= yu - yl)
    a1 = yl
    b1 = np.where(solid, yu, yl + band_l)
    a2 = np.where(solid, yu, yu - band_u)
    b2 = yu
    h = (b1 - a1) + (b2 - a2)
    m1 = 0.5 * ((b1**2 - a1**2) + (b2**2 - a2**2))
    m2 = ((b1**3 - a1**3) + (b2**3 - a2**3)) / 3.0
    area = np.trapezoid(h, x)
    first = np.trapezoid(m1, x)
    second = np.trapezoid(m2, x)
    y_bar = first / area
    return area, second - area * y_bar**2, y_bar


def test_section_matches_oracle_reference_designs():
    for cfg, (a_ref, i_ref, y_ref) in ORACLE_SECTIONS.items():
        props = section_properties(WingStructureDesign(*cfg), chord=1.0)
        assert props.area == pytest.approx(a_ref, rel=5e-3)
        assert props.inertia == pytest.approx(i_ref, rel=5e-3)
        assert props.y_neutral == pytest.approx(y_ref, rel=5e-3)


def test_section_matches_oracle_random_designs():
    rng = np.random.default_rng(20240817)
    for _ in range(20):
        n_sp = int(rng.integers(1, 4))
        sp = float(rng.uniform(0.0, 20.0))
        sh = float(rng.uniform(0.0, 10.0))
        a_ref, i_ref, _ = oracle_section(n_sp, sp, sh)
        props = section_properties(WingStructureDesign(n_sp, sp, sh), chord=1.0)
        assert props.area == pytest.approx(a_ref, rel=5e-3)
        assert props.inertia == pytest.approx(i_ref, rel=5e-3)


def test_section_scales_exactly_with_chord():
    design = WingStructureDesign(2, 8.0, 3.0)
    base = section_properties(design, chord=1.0)
    scaled = section_properties(design, chord=2.0)
    assert scaled.area == pytest.approx(4.0 * base.area, rel=1e-12)
    assert scaled.inertia == pytest.approx(16.0 * base.inertia, rel=1e-12)
    assert scaled.y_neutral == pytest.approx(2.0 * base.y_neutral, rel=1e-12)


def test_section_monotone_in_thicknesses():
    thin = section_properties(WingStructureDesign(2, 2.0, 1.0), chord=1.0)
    thicker_shell = section_properties(WingStructureDesign(2, 2.0, 4.0), chord=1.0)
    wider_spar = section_properties(WingStructureDesign(2, 12.0, 1.0), chord=1.0)
    assert thicker_shell.area > thin.area
    assert thicker_shell.inertia > thin.inertia
    assert wider_spar.area > thin.area
    assert wider_spar.inertia > thin.inertia


def test_shell_thicker_than_half_depth_rejected():
    with pytest.raises(GeometryError):
        section_properties(WingStructureDesign(1, 0.0, 60.0), chord=1.0)


def test_design_validation():
    with pytest.raises(ValueError):
        WingStructureDesign(4, 5.0, 5.0)
    with pytest.raises(ValueError):
        WingStructureDesign(2, -0.5, 5.0)
    with pytest.raises(ValueError):
        WingStructureDesign(2, 5.0, -1.0)


def test_required_inertia_hand_value():
    # F a^2 (3 s/2 - a) / (6 E d_max), a = s/4 = 2 m, d_max = 0.2 m
    assert required_inertia(8.0, 1e5) == pytest.approx(4.837929366231253e-05, rel=1e-12)


def test_required_inertia_zero_load():
    assert required_inertia(8.0, 0.0) == 0.0


def test_wing_mass_is_density_times_volume():
    design = WingStructureDesign(1, 13.9, 0.78)
    props = section_properties(design, chord=MID_PLANFORM.chord)
    mass = wing_mass(MID_PLANFORM, design)
    assert mass == pytest.approx(Material().density * MID_PLANFORM.span * props.area, rel=1e-12)


def test_wing_mass_catalog_thicknesses():
    # catalog thicknesses for the mid-size wing under this section model;
    # the published figure is 628.7 kg, kept here only as a sanity band
    design = WingStructureDesign(1, 13.9, 0.78)
    mass = wing_mass(MID_PLANFORM, design)
    assert mass == pytest.approx(832.7894431206829, rel=1e-6)
    assert 0.5 < mass / MID_CATALOG_MASS < 1.5


def test_rated_wing_load_mid_size():
    load = rated_wing_load(MID_PLANFORM, FlowEnv(), FoilCoeffs())
    assert load == pytest.approx(175960.0078992028, rel=1e-6)


def test_optimized_mid_size_wing():
    load = rated_wing_load(MID_PLANFORM, FlowEnv(), FoilCoeffs())
    sizing = swdt_optimize(MID_PLANFORM, load)
    assert sizing.mass == pytest.approx(622.1205413709613, rel=1e-3)
    assert abs(sizing.mass / MID_CATALOG_MASS - 1.0) < 0.25
    assert sizing.constraint_active
    assert 1.0 <= sizing.inertia / sizing.inertia_required <= 1.02
    # the shell alone carries the mid-size load at minimum mass
    assert sizing.design.n_spars == 1
    assert sizing.design.spar_width_pct == 0.0


def test_optimizer_deterministic():
    load = rated_wing_load(MID_PLANFORM, FlowEnv(), FoilCoeffs())
    a = swdt_optimize(MID_PLANFORM, load)
    b = swdt_optimize(MID_PLANFORM, load)
    assert a.mass == b.mass
    assert a.design == b.design


def test_optimizer_zero_load_returns_bare_section():
    sizing = swdt_optimize(MID_PLANFORM, 0.0)
    assert sizing.mass == 0.0
    assert sizing.design.spar_width_pct == 0.0
    assert sizing.design.shell_pct == 0.0
    assert not sizing.constraint_active


def test_optimizer_mass_monotone_in_load():
    load = rated_wing_load(MID_PLANFORM, FlowEnv(), FoilCoeffs())
    light = swdt_optimize(MID_PLANFORM, 0.5 * load)
    heavy = swdt_optimize(MID_PLANFORM, 1.5 * load)
    assert light.mass < heavy.mass
    assert heavy.inertia >= heavy.inertia_required


def test_high_aspect_ratio_planform_infeasible():
    planform = WingPlanform(span=10.0, aspect_ratio=12.0)
    load = rated_wing_load(planform, FlowEnv(), FoilCoeffs())
    with pytest.raises(Infeasible) as err:
        swdt_optimize(planform, load)
    assert "inertia_required_m4" in err.value.detail
