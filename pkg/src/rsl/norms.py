"""Mixed space-time Lebesgue norms, homogeneous Sobolev norms, and the
adaptive time-window rule.

Radial integrals carry the full spherical measure omega_{n-1} r^(n-1) dr so
reported numbers are genuine R^n norms.  Domain restriction works by node
membership with globally-assigned trapezoid weights, which makes the dyadic
annulus decomposition additive exactly: ||F||_q^q(R x R^n) equals the sum of
the per-annulus q-th powers by construction.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from .errors import DomainNotCovered, NonConvergent
from .propagator import SpaceTimeField
from .transform import RadialProfile, sphere_area


@dataclass(frozen=True)
class MixedNormSpec:
    """L^q_t L^r_x over a time window and a radial region.

    region: ("all",) | ("annulus", j) | ("tail", R)
    window: (t_lo, t_hi) or None for the field's full grid.
    """

    q: float
    r: float
    window: Optional[tuple] = None
    region: tuple = ("all",)

    def __post_init__(self):
        if self.q < 1 or self.r < 1:
            raise ValueError("exponents must be >= 1")


def _region_mask(field: SpaceTimeField, region: tuple) -> np.ndarray:
    r = field.grid.r_nodes
    if region[0] == "all":
        return np.ones_like(r, dtype=bool)
    if region[0] == "annulus":
        j = region[1]
        mask = (r >= 2.0 ** (j - 1)) & (r < 2.0**j)
        if not mask.any():
            raise DomainNotCovered(f"grid has no nodes in annulus {j}")
        return mask
    if region[0] == "tail":
        mask = r >= region[1]
        if not mask.any():
            raise DomainNotCovered(f"grid has no nodes with r >= {region[1]}")
        return mask
    raise ValueError(f"unknown region {region!r}")


def mixed_norm(field: SpaceTimeField, spec: MixedNormSpec) -> float:
    """( int ( int_Omega |F|^r omega r^(n-1) dr )^(q/r) dt )^(1/q), suprema
    for infinite exponents."""
    t = field.grid.t_nodes
    if spec.window is not None:
        lo, hi = spec.window
        if lo < t[0] - 1e-12 or hi > t[-1] + 1e-12:
            raise DomainNotCovered(f"window {spec.window} outside grid [{t[0]}, {t[-1]}]")
        tmask = (t >= lo - 1e-12) & (t <= hi + 1e-12)
    else:
        tmask = np.ones_like(t, dtype=bool)
    rmask = _region_mask(field, spec.region)
    r = field.grid.r_nodes[rmask]
    wr = field.grid.r_weights()[rmask]
    vals = np.abs(field.values[np.ix_(tmask, rmask)])
    om = sphere_area(field.n)
    if math.isinf(spec.r):
        inner = vals.max(axis=1)
    else:
        inner = (om * (vals ** spec.r) @ (wr * r ** (field.n - 1))) ** (1.0 / spec.r)
    if math.isinf(spec.q):
        return float(inner.max())
    wt = field.grid.t_weights()[tmask]
    return float(np.sum(wt * inner ** spec.q) ** (1.0 / spec.q))


def sobolev_norm(profile: RadialProfile, s: float) -> float:
    """Homogeneous H^s norm: (omega int s^(2s) |h|^2 s^(n-1) ds)^(1/2), same
    convention constant as l2_norm (s = 0 reduces to it)."""
    g = profile.grid
    val = np.sum(g.weights * np.abs(profile.values) ** 2 * g.nodes ** (2.0 * s + profile.n - 1))
    return float(np.sqrt(sphere_area(profile.n) * val))


@dataclass(frozen=True)
class WindowResult:
    T: float
    norm: float
    converged: bool
    nonconvergent: bool
    increments: tuple
    extrapolated: Optional[float] = None


def adaptive_window(
    field_source: Callable,
    spec: Optional[MixedNormSpec] = None,
    tol: float = 1e-2,
    T0: float = 16.0,
    max_doublings: int = 6,
    growth_threshold: float = 0.9,
    strict: bool = False,
) -> WindowResult:
    """Double the time window until the norm increment over the last doubling
    is <= tol * norm.

    `field_source(T)` returns either the norm over window T directly, or a
    SpaceTimeField covering [-T, T] (then `spec` selects the norm).  When the
    relative increments stop below tol the run converged.  When successive
    increment ratios stay above `growth_threshold` while the tolerance is
    unmet, the growth does not saturate (log-divergence signature) and the
    result is flagged NONCONVERGENT (raised if strict=True).  A geometric
    tail estimate extrapolated from the final ratio is attached when the
    ratios decay.
    """
    if spec is not None and math.isinf(spec.q):
        raise ValueError("adaptive window needs q < inf")

    def measure(T):
        out = field_source(T)
        if isinstance(out, SpaceTimeField):
            if spec is None:
                raise ValueError("a MixedNormSpec is required for field sources")
            return mixed_norm(out, spec)
        return float(out)

    T = T0
    norms = [measure(T)]
    increments = []
    for _ in range(max_doublings):
        T *= 2.0
        norms.append(measure(T))
        inc = norms[-1] - norms[-2]
        increments.append(inc)
        base = norms[-1] if norms[-1] > 0 else 1.0
        if abs(inc) <= tol * base:
            return WindowResult(T, norms[-1], True, False, tuple(increments))
    ratios = [
        increments[i + 1] / increments[i]
        for i in range(len(increments) - 1)
        if increments[i] > 0
    ]
    tail_ratio = ratios[-1] if ratios else 1.0
    nonconv = tail_ratio >= growth_threshold or not ratios
    extrap = None
    if not nonconv and increments and 0 < tail_ratio < 1:
        extrap = norms[-1] + increments[-1] * tail_ratio / (1.0 - tail_ratio)
    if nonconv and strict:
        raise NonConvergent(
            f"window increments not saturating (last ratio {tail_ratio:.3f})"
        )
    return WindowResult(T, norms[-1], False, nonconv, tuple(increments), extrap)
