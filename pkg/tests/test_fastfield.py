import numpy as np
import pytest

from rsl.dispersion import get_symbol
from rsl.estimates import canonical_band_amplitude
from rsl.fastfield import BandFieldSampler, SamplerConfig, band_norm_adaptive, czt_points
from rsl.grids import PhysicalGrid, uniform_grid
from rsl.propagator import evolve
from rsl.transform import RadialProfile, profile_from_fn

SCH = get_symbol("schrodinger")


def test_czt_matches_direct_sum():
    rng = np.random.default_rng(1)
    n, m = 73, 41
    c = rng.standard_normal(n) + 1j * rng.standard_normal(n)
    s0, ds, r0, dr = 0.4, 0.013, 2.7, 0.21
    s = s0 + ds * np.arange(n)
    r = r0 + dr * np.arange(m)
    for sign in (+1.0, -1.0):
        direct = np.array([np.sum(c * np.exp(1j * sign * rj * s)) for rj in r])
        fast = czt_points(c, s0, ds, r0, dr, m, sign)
        np.testing.assert_allclose(fast, direct, atol=1e-10)


def test_sampler_field_matches_evolve():
    # |F| from the chirp-Z path vs direct kernel quadrature
    amp = canonical_band_amplitude(2, 0)
    sampler = BandFieldSampler(SCH, 2, 0, amp, T=6.0)
    prof = profile_from_fn(amp, uniform_grid(0.5, 2.0, 2049), 2)
    for t in (0.0, 2.0, 6.0):
        f_in, f_out = sampler.field_at(t)
        r_all = np.concatenate([sampler.r_in, sampler.r_out])
        vals = np.concatenate([f_in, f_out])
        sel = slice(0, r_all.size, 25)
        fld = evolve(SCH, prof, None, PhysicalGrid(np.maximum(r_all[sel], 1e-12), np.array([0.0, t]) if t > 0 else np.array([0.0, 1.0])))
        ref = fld.values[1 if t > 0 else 0]
        scale = np.max(np.abs(ref))
        assert np.max(np.abs(vals[sel] - ref)) / scale < 2e-4


def test_sampler_mass_conservation():
    amp = canonical_band_amplitude(2, 0)
    sampler = BandFieldSampler(SCH, 2, 0, amp, T=8.0)
    for t in (0.0, 3.0, 8.0):
        assert sampler.mass_at(t) == pytest.approx(sampler.mass_true, rel=2e-4)


def test_sampler_refinement_stability():
    amp = canonical_band_amplitude(2, 0)
    base = BandFieldSampler(SCH, 2, 0, amp, T=8.0).norms([(4.0, 4.0)])[(4.0, 4.0)][0]
    fine = BandFieldSampler(SCH, 2, 0, amp, T=8.0, config=SamplerConfig().refined()).norms(
        [(4.0, 4.0)]
    )[(4.0, 4.0)][0]
    assert abs(base - fine) / fine < 1e-3


def test_adaptive_band_norm_converges():
    amp = canonical_band_amplitude(2, 0)
    res = band_norm_adaptive(SCH, 2, 0, amp, [(4.0, 4.0)], T0=16.0, max_doublings=4)
    r = res[(4.0, 4.0)]
    assert r.converged
    # octave contributions decay geometrically for q = 4 > 10/3
    tail = [p for p in r.octave_powers if p > 0][-3:]
    assert tail[-1] < tail[0]


def test_annulus_window_restriction():
    amp = canonical_band_amplitude(2, 0)
    j = 5
    sampler = BandFieldSampler(SCH, 2, 0, amp, T=64.0, r_window=(2.0 ** (j - 1), 2.0**j))
    assert sampler.r_in.size == 0
    assert sampler.r_out[0] >= 2.0 ** (j - 1) - 1e-9
    norm, powers = sampler.norms([(4.0, 4.0)])[(4.0, 4.0)]
    assert norm > 0
