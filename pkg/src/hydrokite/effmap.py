"""Flight efficiency proxy eta(s, AR).

Closed-loop flight never extracts the full crosswind ideal; the ratio of
converged peak simulated power to the ideal at the same geometry defines a
flight efficiency.  This module samples that ratio over the wing design
box, fits a low-order polynomial surface to the samples, and serves the
surface as a cheap stand-in for the simulator inside design optimization.
"""
from __future__ import annotations

import warnings
from dataclasses import dataclass
from importlib import resources
from typing import Callable, Iterable, Optional

import numpy as np

from .design import ASPECT_RANGE, SPAN_RANGE, ScalingRule
from .dynsim import TetherProperties
from .dynsim.kite import build_kite
from .errors import (
    ConfigError, DomainWarning, EmptyLap, Infeasible, NumericBlowup,
    PathLost, RankDeficient, SimDiverged,
)
from .fusestruct import rated_fuselage_loads, sfdt_optimize
from .hydro import FlowEnv, FoilCoeffs, WingPlanform, loyd_power
from .ilc import ILCConfig, optimize_path
from .wingstruct import FourDigitFoil, Material, rated_wing_load, swdt_optimize

ETA_FLOOR = 0.01
ETA_CAP = 1.0


@dataclass(frozen=True)
class EffSample:
    """One simulated geometry: efficiency plus the powers that define it."""

    span: float
    aspect_ratio: float
    eta: float
    power_peak: float    # converged peak from the lap optimizer, W
    power_ideal: float   # crosswind ideal at the same geometry, W
    eta_cap: float = ETA_CAP

    def __post_init__(self):
        if self.power_ideal <= 0.0:
            raise ValueError("ideal power must be positive")
        ratio = self.power_peak / self.power_ideal
        if abs(self.eta - ratio) > 1e-9 * max(1.0, abs(ratio)):
            raise ValueError("eta must equal power_peak / power_ideal")
        if not 0.0 < self.eta <= self.eta_cap + 1e-12:
            raise ValueError(
                f"eta {self.eta:.4g} outside (0, {self.eta_cap:g}]")

    @classmethod
    def from_powers(cls, span, aspect_ratio, power_peak, power_ideal,
                    eta_cap=ETA_CAP) -> "EffSample":
        return cls(span, aspect_ratio, power_peak / power_ideal,
                   power_peak, power_ideal, eta_cap)


def monomial_exponents(degree: int) -> list[tuple[int, int]]:
    """(i, j) powers of (s, AR) in graded-lex order: 1, s, a, s2, sa, a2, ..."""
    return [(g - j, j) for g in range(degree + 1) for j in range(g + 1)]


def design_matrix(spans, aspects, degree: int) -> np.ndarray:
    s = np.asarray(spans, dtype=float)
    a = np.asarray(aspects, dtype=float)
    return np.column_stack(
        [s ** i * a ** j for i, j in monomial_exponents(degree)])


@dataclass
class EffSurface:
    """Polynomial efficiency map with its fitted domain and residual."""

    degree: int
    coeffs: np.ndarray
    domain: tuple[float, float, float, float]   # s_lo, s_hi, ar_lo, ar_hi
    residual_rms: float
    eta_floor: float = ETA_FLOOR
    eta_cap: float = ETA_CAP

    def eval(self, span: float, aspect_ratio: float) -> float:
        """Clamped polynomial evaluation; out-of-domain queries warn."""
        s_lo, s_hi, a_lo, a_hi = self.domain
        s, a = float(span), float(aspect_ratio)
        if not (s_lo <= s <= s_hi and a_lo <= a <= a_hi):
            warnings.warn(
                f"({span:g}, {aspect_ratio:g}) outside the fitted box; "
                "evaluating at the clamped point", DomainWarning, stacklevel=2)
            s = min(max(s, s_lo), s_hi)
            a = min(max(a, a_lo), a_hi)
        val = float(design_matrix([s], [a], self.degree)[0] @ self.coeffs)
        return min(max(val, self.eta_floor), self.eta_cap)


def fit_surface(samples: Iterable[EffSample], degree: int = 2,
                eta_floor: float = ETA_FLOOR,
                eta_cap: float = ETA_CAP) -> EffSurface:
    """Least-squares polynomial fit of eta over (s, AR)."""
    samples = list(samples)
    n_terms = len(monomial_exponents(degree))
    if len(samples) < n_terms:
        raise RankDeficient(
            f"{len(samples)} samples cannot determine {n_terms} terms")
    spans = [p.span for p in samples]
    aspects = [p.aspect_ratio for p in samples]
    etas = np.array([p.eta for p in samples])
    matrix = design_matrix(spans, aspects, degree)
    coeffs, _, rank, _ = np.linalg.lstsq(matrix, etas, rcond=None)
    if rank < n_terms:
        raise RankDeficient(
            f"design matrix rank {rank} below term count {n_terms}")
    resid = matrix @ coeffs - etas
    return EffSurface(
        degree=degree,
        coeffs=coeffs,
        domain=(min(spans), max(spans), min(aspects), max(aspects)),
        residual_rms=float(np.sqrt(np.mean(resid ** 2))),
        eta_floor=eta_floor,
        eta_cap=eta_cap,
    )


# -- persistence ------------------------------------------------------------

def surface_text(surface: EffSurface) -> str:
    lines = [
        "# flight efficiency surface eta(s, AR)",
        "# coefficients in graded-lex monomial order: 1, s, AR, s^2, s*AR, AR^2, ...",
        f"degree {surface.degree}",
        "domain " + " ".join(f"{x:.17g}" for x in surface.domain),
        f"eta_floor {surface.eta_floor:.17g}",
        f"eta_cap {surface.eta_cap:.17g}",
        f"residual_rms {surface.residual_rms:.17g}",
    ]
    lines += [f"coeff {c:.17g}" for c in surface.coeffs]
    return "\n".join(lines) + "\n"


def save_surface(surface: EffSurface, path) -> None:
    with open(path, "w") as handle:
        handle.write(surface_text(surface))


def parse_surface(text: str) -> EffSurface:
    fields = {}
    coeffs = []
    try:
        for raw in text.splitlines():
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            key, *vals = line.split()
            if key == "coeff":
                coeffs.append(float(vals[0]))
            else:
                fields[key] = vals
        degree = int(fields["degree"][0])
        domain = tuple(float(x) for x in fields["domain"])
        surface = EffSurface(
            degree=degree,
            coeffs=np.array(coeffs),
            domain=domain,
            residual_rms=float(fields["residual_rms"][0]),
            eta_floor=float(fields["eta_floor"][0]),
            eta_cap=float(fields["eta_cap"][0]),
        )
    except (KeyError, IndexError, ValueError) as exc:
        raise ConfigError(f"malformed efficiency surface document: {exc}")
    if len(coeffs) != len(monomial_exponents(degree)):
        raise ConfigError(
            f"degree {degree} needs {len(monomial_exponents(degree))} "
            f"coefficients, document has {len(coeffs)}")
    if len(domain) != 4:
        raise ConfigError("domain line needs 4 numbers")
    return surface


def load_surface(path) -> EffSurface:
    with open(path) as handle:
        return parse_surface(handle.read())


def default_surface() -> EffSurface:
    """The surface bundled with the package (a synthetic smooth basin)."""
    text = resources.files("hydrokite").joinpath(
        "data/eta_surface.txt").read_text()
    return parse_surface(text)


def samples_text(samples: Iterable[EffSample]) -> str:
    lines = ["s\tAR\teta\tP_star\tP_ideal"]
    for p in samples:
        lines.append("\t".join(f"{x:.17g}" for x in
                               (p.span, p.aspect_ratio, p.eta,
                                p.power_peak, p.power_ideal)))
    return "\n".join(lines) + "\n"


def save_samples(samples: Iterable[EffSample], path) -> None:
    with open(path, "w") as handle:
        handle.write(samples_text(samples))


def load_samples(path, eta_cap: float = ETA_CAP) -> list[EffSample]:
    samples = []
    with open(path) as handle:
        for line in handle.read().splitlines()[1:]:
            if not line.strip():
                continue
            s, ar, eta, p_star, p_ideal = (float(x) for x in line.split("\t"))
            samples.append(EffSample(s, ar, eta, p_star, p_ideal, eta_cap))
    return samples


# -- sample generation ------------------------------------------------------

def generate_samples(
    grid: Iterable[tuple[float, float]],
    ilc_cfg: Optional[ILCConfig] = None,
    rule: ScalingRule = ScalingRule(),
    flow: FlowEnv = FlowEnv(),
    foil_coeffs: FoilCoeffs = FoilCoeffs(),
    foil: FourDigitFoil = FourDigitFoil(),
    material: Material = Material(),
    tether: Optional[TetherProperties] = None,
    point_fn: Optional[Callable[[float, float], tuple[float, float]]] = None,
    eta_cap: float = ETA_CAP,
    **sim_kwargs,
) -> list[EffSample]:
    """Score a grid of wing geometries.

    The default path sizes the structure for each geometry, assembles the
    kite, and runs the lap optimizer to convergence; point_fn(s, AR) ->
    (P_star, P_ideal) substitutes any other scoring, e.g. for tests.
    Points whose flight diverges or whose structure is infeasible are
    skipped with a warning.
    """
    samples = []
    for span, aspect in grid:
        if not (SPAN_RANGE[0] <= span <= SPAN_RANGE[1]
                and ASPECT_RANGE[0] <= aspect <= ASPECT_RANGE[1]):
            raise ConfigError(
                f"grid point ({span:g}, {aspect:g}) outside the design box")
        try:
            if point_fn is not None:
                p_star, p_ideal = point_fn(span, aspect)
            else:
                p_star, p_ideal = _simulated_point(
                    span, aspect, ilc_cfg or ILCConfig(), rule, flow,
                    foil_coeffs, foil, material,
                    tether or TetherProperties(), **sim_kwargs)
            samples.append(
                EffSample.from_powers(span, aspect, p_star, p_ideal, eta_cap))
        except (SimDiverged, NumericBlowup, PathLost, EmptyLap,
                Infeasible) as exc:
            warnings.warn(
                f"skipping geometry ({span:g}, {aspect:g}): {exc}",
                stacklevel=2)
    return samples


def _simulated_point(span, aspect, ilc_cfg, rule, flow, foil_coeffs, foil,
                     material, tether, **sim_kwargs):
    planform = WingPlanform(span, aspect)
    load = rated_wing_load(planform, flow, foil_coeffs)
    wing = swdt_optimize(planform, load, material, foil)
    d, length = rule.fuselage(planform)
    floads = rated_fuselage_loads(
        planform, length, flow, foil_coeffs,
        hstab_area_fraction=rule.hstab_area_fraction)
    fuse = sfdt_optimize(d, length, floads, material)
    props = build_kite(planform, wing.mass, fuse.design, fuse.mass,
                       rule, flow, foil_coeffs, foil)
    optimum = optimize_path(props, tether, ilc_cfg, flow=flow, **sim_kwargs)
    return optimum.power_peak, loyd_power(planform, flow, foil=foil_coeffs)
