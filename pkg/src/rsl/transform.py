"""Radial frequency profiles and the Fourier-Bessel transform.

Conventions (fixed once, used everywhere):

  * A profile h(s) represents radial frequency-side data of a function on
    R^n.  The synthesis map to physical radius r is the self-inverse
    normalized transform

        T[h](r) = int_0^inf h(s) K_n(s r) s^(n-1) ds,
        K_n(x)  = x^(-(n-2)/2) J_((n-2)/2)(x),

    i.e. the e^{-ix.xi} Fourier convention with the constant (2 pi)^(n/2)
    absorbed into h.  T[T[h]] = h, and the Gaussian e^{-s^2/2} is a fixed
    point in every dimension.

  * Norms carry the full spherical measure: the frequency-side L^2 norm is

        l2_norm(h)^2 = omega_{n-1} int |h(s)|^2 s^(n-1) ds,

    with omega_{n-1} = |S^(n-1)| (so c_2 = 2 pi), and Plancherel holds
    exactly against the physical-side norm omega_{n-1} int |T h|^2 r^(n-1) dr.
"""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass, replace
from typing import Callable, Optional

import numpy as np
from scipy import special

from .bessel import radial_kernel
from .cutoffs import dyadic_cutoff
from .errors import QuadratureUnderresolved
from .grids import DEFAULT_POLICY, FrequencyGrid, QuadraturePolicy


def sphere_area(n: int) -> float:
    """Surface measure of the unit sphere S^(n-1) in R^n."""
    return float(2.0 * np.pi ** (n / 2.0) / special.gamma(n / 2.0))


@dataclass(frozen=True)
class RadialProfile:
    """Frequency-side samples h(s) on a quadrature grid, ambient dimension n.

    `fn`, when present, is the analytic generator of the samples; operations
    that need their own quadrature nodes (e.g. the propagator) re-evaluate it
    instead of interpolating.
    """

    grid: FrequencyGrid
    values: np.ndarray
    n: int
    fn: Optional[Callable[[np.ndarray], np.ndarray]] = None

    def __post_init__(self):
        values = np.asarray(self.values, dtype=complex)
        object.__setattr__(self, "values", values)
        if values.shape != self.grid.nodes.shape:
            raise ValueError("values must match grid nodes")
        if not np.all(np.isfinite(values.view(float))):
            raise ValueError("profile values must be finite")
        if self.n < 2:
            raise ValueError("ambient dimension must be >= 2")

    def with_values(self, values: np.ndarray, keep_fn: bool = False) -> "RadialProfile":
        return replace(self, values=np.asarray(values, dtype=complex), fn=self.fn if keep_fn else None)


def profile_from_fn(fn, grid: FrequencyGrid, n: int) -> RadialProfile:
    return RadialProfile(grid, np.asarray(fn(grid.nodes), dtype=complex), n, fn=fn)


def project(profile: RadialProfile, k: int) -> RadialProfile:
    """Littlewood-Paley piece: multiply by the band-k cutoff psi(2^-k s)."""
    cut = dyadic_cutoff(k, profile.grid.nodes)
    if profile.fn is not None:
        fn = profile.fn
        return replace(profile, values=profile.values * cut,
                       fn=lambda s, _f=fn, _k=k: _f(s) * dyadic_cutoff(_k, s))
    return profile.with_values(profile.values * cut)


def l2_norm(profile: RadialProfile) -> float:
    """(omega_{n-1} int |h|^2 s^(n-1) ds)^(1/2); equals the physical L^2 norm."""
    g = profile.grid
    val = np.sum(g.weights * np.abs(profile.values) ** 2 * g.nodes ** (profile.n - 1))
    return float(np.sqrt(sphere_area(profile.n) * val))


def fourier_bessel(
    profile: RadialProfile,
    r,
    policy: QuadraturePolicy = DEFAULT_POLICY,
) -> np.ndarray:
    """Evaluate T[h](r) by quadrature on the profile's own grid.

    The grid must resolve the kernel oscillation: the largest node spacing
    times max(r) has to stay below the policy's phase step (scaled for the
    non-Gauss case by the panel order).
    """
    r = np.asarray(r, dtype=float)
    scalar = r.ndim == 0
    r = np.atleast_1d(r)
    g = profile.grid
    max_ds = float(np.max(np.diff(g.nodes)))
    budget = policy.max_phase_step * policy.panel_order
    if r.size and max_ds * float(np.max(r)) > budget:
        raise QuadratureUnderresolved(
            f"grid spacing {max_ds:.3g} cannot resolve radius {np.max(r):.3g} "
            f"(budget {budget:.3g} rad per node group)"
        )
    w = g.weights * profile.values * g.nodes ** (profile.n - 1)
    out = radial_kernel(profile.n, np.outer(r, g.nodes)) @ w
    return out[0] if scalar else out


def profile_to_csv(profile: RadialProfile, csv_path, meta_path=None) -> None:
    """CSV columns (s, Re h, Im h) plus a JSON sidecar with n and the span."""
    with open(csv_path, "w", newline="") as f:
        writer = csv.writer(f)
        writer.writerow(["s", "re_h", "im_h"])
        for s, v in zip(profile.grid.nodes, profile.values):
            writer.writerow([repr(float(s)), repr(float(v.real)), repr(float(v.imag))])
    if meta_path is not None:
        lo, hi = profile.grid.span
        with open(meta_path, "w") as f:
            json.dump({"n": profile.n, "span": [lo, hi], "nodes": int(profile.grid.nodes.size)}, f, indent=2)


def profile_from_csv(csv_path, n: int) -> RadialProfile:
    rows = []
    with open(csv_path, newline="") as f:
        reader = csv.reader(f)
        header = next(reader)
        if header[:1] != ["s"]:
            raise ValueError("expected header starting with 's'")
        for row in reader:
            rows.append((float(row[0]), float(row[1]), float(row[2])))
    s = np.array([r[0] for r in rows])
    vals = np.array([complex(r[1], r[2]) for r in rows])
    from .grids import trapezoid_weights

    return RadialProfile(FrequencyGrid(s, trapezoid_weights(s)), vals, n)


def canonical_band_profile(n: int, k: int, grid: Optional[FrequencyGrid] = None) -> RadialProfile:
    """The default measurement datum: h = psi_k(s) s^(-(n-1)/2), normalized to
    unit L^2.  Flat across the band after the s^(n-1) measure is folded in."""
    lo, hi = 2.0 ** (k - 1), 2.0 ** (k + 1)
    # normalization: omega * int psi_k^2 ds, computed on a fine reference grid
    s_ref = np.linspace(lo, hi, 8001)
    z2 = sphere_area(n) * np.trapezoid(dyadic_cutoff(k, s_ref) ** 2, s_ref)
    z = float(np.sqrt(z2))

    def fn(s, _k=k, _n=n, _z=z):
        s = np.asarray(s, dtype=float)
        return dyadic_cutoff(_k, s) * s ** (-(_n - 1) / 2.0) / _z

    if grid is None:
        from .grids import uniform_grid

        grid = uniform_grid(lo, hi, 2049)
    return profile_from_fn(fn, grid, n)
