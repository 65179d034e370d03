import warnings

import numpy as np
import pytest

from hydrokite.effmap import (
    EffSample, EffSurface, default_surface, design_matrix, fit_surface,
    generate_samples, load_samples, load_surface, monomial_exponents,
    parse_surface, save_samples, save_surface, surface_text,
)
from hydrokite.errors import ConfigError, DomainWarning, RankDeficient, SimDiverged


def bowl_eta(s, ar):
    # exact member of the degree-2 model class
    return 0.9 - 0.003 * (s - 8.5) ** 2 - 0.0015 * (ar - 7.0) ** 2


def bowl_samples(n=30, seed=1):
    rng = np.random.default_rng(seed)
    out = []
    for _ in range(n):
        s = rng.uniform(7.0, 10.0)
        ar = rng.uniform(4.0, 12.0)
        eta = bowl_eta(s, ar)
        out.append(EffSample(s, ar, eta, eta * 1e5, 1e5))
    return out


def test_monomial_order_is_graded_lex():
    assert monomial_exponents(2) == [(0, 0), (1, 0), (0, 1), (2, 0), (1, 1), (0, 2)]
    assert len(monomial_exponents(3)) == 10


def test_sample_validates_ratio_and_range():
    EffSample(8.0, 6.0, 0.5, 5e4, 1e5)
    with pytest.raises(ValueError):
        EffSample(8.0, 6.0, 0.6, 5e4, 1e5)       # eta != ratio
    with pytest.raises(ValueError):
        EffSample(8.0, 6.0, 1.2, 1.2e5, 1e5)     # above cap
    with pytest.raises(ValueError):
        EffSample(8.0, 6.0, 0.5, 5e4, -1e5)
    relaxed = EffSample(8.0, 6.0, 1.2, 1.2e5, 1e5, eta_cap=1.5)
    assert relaxed.eta == pytest.approx(1.2)


def test_fit_recovers_exact_quadratic():
    surface = fit_surface(bowl_samples())
    assert surface.residual_rms < 1e-9
    for s, ar in ((7.3, 5.0), (9.1, 10.2), (8.5, 7.0)):
        assert surface.eval(s, ar) == pytest.approx(bowl_eta(s, ar), abs=1e-6)


def test_fit_constant_samples_gives_constant_surface():
    samples = [EffSample(s, ar, 0.8, 8e4, 1e5)
               for s in (7.0, 8.0, 9.0, 10.0) for ar in (4.0, 8.0, 12.0)]
    surface = fit_surface(samples)
    assert surface.residual_rms < 1e-12
    assert surface.eval(8.3, 6.7) == pytest.approx(0.8, abs=1e-9)


def test_fit_noisy_quadratic_residual_in_band():
    rng = np.random.default_rng(20240824)
    samples = []
    for _ in range(50):
        s = rng.uniform(7.0, 10.0)
        ar = rng.uniform(4.0, 12.0)
        eta = bowl_eta(s, ar) + rng.normal(0.0, 0.01)
        samples.append(EffSample(s, ar, eta, eta * 1e5, 1e5))
    surface = fit_surface(samples)
    assert 0.005 <= surface.residual_rms <= 0.02


def test_fit_rejects_too_few_or_collinear_samples():
    with pytest.raises(RankDeficient):
        fit_surface(bowl_samples(n=5))
    # constant AR collapses three of the six columns
    flat = [EffSample(s, 6.0, 0.8, 8e4, 1e5)
            for s in np.linspace(7.0, 10.0, 12)]
    with pytest.raises(RankDeficient):
        fit_surface(flat)


def test_eval_clamps_outside_domain_with_warning():
    surface = fit_surface(bowl_samples())
    s_lo, s_hi, a_lo, a_hi = surface.domain
    with pytest.warns(DomainWarning):
        outside = surface.eval(s_hi + 1.0, a_hi + 3.0)
    assert outside == pytest.approx(bowl_eta(s_hi, a_hi), abs=1e-6)


def test_eval_never_exceeds_cap():
    # samples hugging 1.0 with noise force the raw polynomial above the cap
    rng = np.random.default_rng(7)
    samples = []
    for s in np.linspace(7.0, 10.0, 6):
        for ar in np.linspace(4.0, 12.0, 6):
            eta = min(1.0, 0.995 + rng.normal(0.0, 0.004))
            samples.append(EffSample(s, ar, eta, eta * 1e5, 1e5))
    surface = fit_surface(samples)
    raw = design_matrix([8.5], [8.0], 2)[0] @ surface.coeffs
    grid = [surface.eval(s, ar) for s in np.linspace(7, 10, 21)
            for ar in np.linspace(4, 12, 21)]
    assert max(grid) <= 1.0
    assert raw > 0.98  # the clamp is doing real work near the cap


def test_surface_round_trip_is_identity():
    surface = fit_surface(bowl_samples(n=40, seed=9))
    back = parse_surface(surface_text(surface))
    rng = np.random.default_rng(13)
    s_lo, s_hi, a_lo, a_hi = surface.domain
    for _ in range(100):
        s = rng.uniform(s_lo, s_hi)
        ar = rng.uniform(a_lo, a_hi)
        assert back.eval(s, ar) == pytest.approx(surface.eval(s, ar),
                                                 abs=1e-12)
    assert back.degree == surface.degree
    assert back.domain == surface.domain


def test_surface_file_round_trip(tmp_path):
    surface = fit_surface(bowl_samples())
    path = tmp_path / "eta.txt"
    save_surface(surface, path)
    back = load_surface(path)
    assert np.allclose(back.coeffs, surface.coeffs, atol=0, rtol=0)


def test_parse_surface_rejects_malformed_documents():
    with pytest.raises(ConfigError):
        parse_surface("degree 2\n")
    good = surface_text(fit_surface(bowl_samples()))
    with pytest.raises(ConfigError):
        parse_surface(good.replace("coeff ", "coeff bad ", 1))
    # drop one coefficient line
    lines = good.strip().split("\n")
    with pytest.raises(ConfigError):
        parse_surface("\n".join(lines[:-1]))


def test_default_surface_loads_and_is_sane():
    surface = default_surface()
    assert surface.domain == (7.0, 10.0, 4.0, 12.0)
    vals = [surface.eval(s, ar) for s in np.linspace(7, 10, 7)
            for ar in np.linspace(4, 12, 9)]
    assert all(0.5 < v <= 1.0 for v in vals)
    # single smooth basin: the peak sits strictly inside the box
    peak = max(vals)
    edge = max(surface.eval(7.0, 4.0), surface.eval(10.0, 12.0))
    assert peak > edge


def test_samples_file_round_trip(tmp_path):
    samples = bowl_samples(n=20, seed=4)
    path = tmp_path / "samples.txt"
    save_samples(samples, path)
    back = load_samples(path)
    assert len(back) == len(samples)
    for a, b in zip(samples, back):
        assert (a.span, a.aspect_ratio, a.eta) == (b.span, b.aspect_ratio, b.eta)


def test_generate_samples_stub_eta_one():
    out = generate_samples([(8.5, 6.0)], point_fn=lambda s, ar: (2e5, 2e5))
    assert len(out) == 1
    assert out[0].eta == pytest.approx(1.0)


def test_generate_samples_grid_properties_and_determinism():
    def scorer(s, ar):
        return bowl_eta(s, ar) * 3e5, 3e5

    grid = [(s, ar) for s in (7.0, 8.5, 10.0) for ar in (4.0, 8.0, 12.0)]
    first = generate_samples(grid, point_fn=scorer)
    second = generate_samples(grid + [grid[0]], point_fn=scorer)
    assert len(first) == 9
    assert all(0.0 < p.eta <= 1.0 for p in first)
    assert second[0].eta == second[-1].eta
    assert [p.eta for p in first] == [p.eta for p in second[:9]]


def test_generate_samples_skips_diverged_points_with_warning():
    def scorer(s, ar):
        if ar > 10.0:
            raise SimDiverged("flight never closed a lap")
        return 2.5e5, 5e5

    grid = [(8.0, 6.0), (8.0, 11.0), (9.0, 5.0)]
    with pytest.warns(UserWarning, match="skipping geometry"):
        out = generate_samples(grid, point_fn=scorer)
    assert [(p.span, p.aspect_ratio) for p in out] == [(8.0, 6.0), (9.0, 5.0)]


def test_generate_samples_rejects_out_of_box_grid():
    with pytest.raises(ConfigError):
        generate_samples([(6.0, 6.0)], point_fn=lambda s, ar: (1e5, 1e5))
