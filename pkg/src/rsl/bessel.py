"""Bessel functions, the radial Fourier kernel, and the large-argument split.

Everything here is dimension-parametrized through the order nu = (n-2)/2.
The large-argument decomposition isolates the two leading oscillations

    J_nu(r) = c(r) e^{ir} + conj(c(r)) e^{-ir} + remainder,
    c(r)    = e^{-i (n-1) pi/4} / sqrt(2 pi r),

with the remainder split into e^{+-ir} components through the Hankel
function H1 = J + iY (which carries the pure e^{+ir} oscillation), so the
reassembly identity is exact to rounding.  The remainder coefficients decay
like r^{-(n+1)/2}, which is what drives every outer-annulus bound downstream.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy import integrate, special

from .errors import DomainError, SmallArgument


def bessel_j(nu: float, r) -> np.ndarray:
    """J_nu(r) for real order nu >= -1/2 and r >= 0 (scipy backend)."""
    if nu < -0.5:
        raise DomainError(f"order {nu} < -1/2 not supported")
    r = np.asarray(r, dtype=float)
    if np.any(r < 0):
        raise DomainError("negative argument")
    return special.jv(nu, r)


def bessel_j_integral(nu: float, r: float) -> float:
    """Independent oracle: adaptive quadrature of the defining integral

        J_nu(r) = (r/2)^nu / (Gamma(nu+1/2) sqrt(pi)) *
                  int_{-1}^{1} e^{irt} (1-t^2)^(nu-1/2) dt.

    Used only to cross-check `bessel_j`; never called by the evaluators.
    """
    if nu <= -0.5:
        raise DomainError("integral representation needs nu > -1/2")
    if r < 0:
        raise DomainError("negative argument")
    pref = (r / 2.0) ** nu / (special.gamma(nu + 0.5) * np.sqrt(np.pi))

    # t = sin(u) removes the endpoint singularity: the even part gives
    # 2 int_0^{pi/2} cos(r sin u) (cos u)^{2 nu} du
    def re(u):
        return np.cos(r * np.sin(u)) * np.cos(u) ** (2.0 * nu)

    val, _ = integrate.quad(re, 0.0, np.pi / 2.0, limit=400, epsabs=1e-12, epsrel=1e-11)
    return float(pref * 2.0 * val)


@dataclass(frozen=True)
class BoundReport:
    nu: float
    sup_power_ratio: float      # sup |J_nu(r)| / r^nu
    sup_decay_ratio: float      # sup |J_nu(r)| * r^(1/2)
    bound_constant: float
    passed: bool


def bessel_bound_check(nu: float, r_grid, bound_constant: float = 2.0) -> BoundReport:
    """Measure the two textbook envelopes |J_nu| <= C r^nu and |J_nu| <= C r^(-1/2)."""
    r = np.asarray(r_grid, dtype=float)
    if np.any(r <= 0):
        raise DomainError("grid must be positive")
    j = bessel_j(nu, r)
    a = float(np.max(np.abs(j) / r**nu))
    b = float(np.max(np.abs(j) * np.sqrt(r)))
    ok = np.isfinite(a) and np.isfinite(b) and a <= bound_constant and b <= bound_constant
    return BoundReport(nu, a, b, bound_constant, bool(ok))


@dataclass(frozen=True)
class BesselSplit:
    """Leading oscillatory coefficients and residuals of J_(n-2)/2 at radius r.

    Reassembly (exact):
        J = main_plus e^{ir} + main_minus e^{-ir}
            + r^((n-2)/2) (e^{-ir} e_plus - e^{ir} e_minus)
    """

    n: int
    r: float
    main_plus: complex
    main_minus: complex
    e_plus: complex
    e_minus: complex

    def reassemble(self) -> float:
        r = self.r
        nu_pow = r ** ((self.n - 2) / 2.0)
        val = (
            self.main_plus * np.exp(1j * r)
            + self.main_minus * np.exp(-1j * r)
            + nu_pow * (np.exp(-1j * r) * self.e_plus - np.exp(1j * r) * self.e_minus)
        )
        return float(np.real(val))


def bessel_asymptotic_split(n: int, r: float) -> BesselSplit:
    """Split J_(n-2)/2(r), r >= 1, into main oscillations and residuals.

    The e^{+ir} half of J is exactly H1/2 = (J + iY)/2; subtracting the
    leading coefficient c(r) leaves the residual, reported in the
    normalization whose modulus decays like r^(-(n+1)/2).
    """
    if r < 1.0:
        raise SmallArgument("asymptotic split valid for r >= 1 only")
    nu = (n - 2) / 2.0
    beta = (n - 1) * np.pi / 4.0
    c = np.exp(-1j * beta) / np.sqrt(2.0 * np.pi * r)
    h1 = complex(special.jv(nu, r), special.yv(nu, r))
    plus_coeff = 0.5 * h1 * np.exp(-1j * r)        # e^{+ir} coefficient of J
    resid_plus = plus_coeff - c                     # remainder on the e^{+ir} side
    resid_minus = np.conj(resid_plus)               # J real => conjugate pair
    nu_pow = r ** ((n - 2) / 2.0)
    return BesselSplit(
        n=n,
        r=r,
        main_plus=complex(c),
        main_minus=complex(np.conj(c)),
        e_plus=complex(resid_minus / nu_pow),
        e_minus=complex(-resid_plus / nu_pow),
    )


def radial_kernel(n: int, x) -> np.ndarray:
    """x^(-(n-2)/2) J_((n-2)/2)(x), the radial Fourier kernel, with the
    series value 2^(-nu)/Gamma(nu+1) filling the x -> 0 limit."""
    nu = (n - 2) / 2.0
    x = np.asarray(x, dtype=float)
    scalar = x.ndim == 0
    x = np.atleast_1d(x)
    if np.any(x < 0):
        raise DomainError("negative argument")
    out = np.empty_like(x)
    small = x < 1e-6
    xs = x[~small]
    out[~small] = xs ** (-nu) * special.jv(nu, xs)
    # two-term series keeps continuity at the stitch point
    lim = 2.0 ** (-nu) / special.gamma(nu + 1.0)
    out[small] = lim * (1.0 - x[small] ** 2 / (4.0 * (nu + 1.0)))
    return out[0] if scalar else out


def hankel_phase_coeffs(n: int, x_min: float = 1.0, degree: int = 20) -> np.ndarray:
    """Coefficients b_p with

        H1_nu(x) ~ sqrt(2/(pi x)) e^{i(x - (n-1)pi/4)} * sum_p b_p (x_min/x)^p

    uniformly on x >= x_min (max abs error ~5e-12 at degree 20 for n <= 6;
    exact and nearly degree-0 for odd n, where H1_(n-2)/2 is elementary).
    The separable powers (x_min/(rs))^p are what let the outer-region field
    sampler evaluate one chirp-Z transform per power instead of a dense
    kernel matrix.
    """
    nu = (n - 2) / 2.0
    m = 4000
    w = (np.cos(np.pi * (np.arange(m) + 0.5) / m) + 1.0) / 2.0
    x = x_min / w
    zeta = special.hankel1e(nu, x) * np.sqrt(np.pi * x / 2.0) * np.exp(1j * (nu * np.pi / 2 + np.pi / 4))
    cheb = np.polynomial.chebyshev.chebfit(2.0 * w - 1.0, zeta, degree)
    poly_u = np.polynomial.polynomial.Polynomial(np.polynomial.chebyshev.cheb2poly(cheb))
    poly_w = poly_u(np.polynomial.polynomial.Polynomial([-1.0, 2.0]))
    b = poly_w.coef.astype(complex)

    # truncate to the shortest prefix that still evaluates to ~fit accuracy
    # (odd n collapses to its exact finite expansion this way)
    def max_err(coeffs):
        approx = np.zeros_like(w, dtype=complex)
        for c in coeffs[::-1]:
            approx = approx * w + c
        return float(np.max(np.abs(approx - zeta)))

    full_err = max_err(b)
    for p in range(1, b.size):
        if max_err(b[:p]) <= max(2.0 * full_err, 2e-11):
            return b[:p]
    return b
