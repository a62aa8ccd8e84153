"""Quadrature grids and policies.

FrequencyGrid carries nodes and weights for integrals in the radial frequency
variable s; PhysicalGrid carries the (t, r) sample points of a space-time
field together with the dyadic annulus index 2^(j-1) <= r < 2^j.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import NonPositiveSample, QuadratureUnderresolved


@dataclass(frozen=True)
class QuadraturePolicy:
    """Oscillatory-quadrature resolution policy.

    max_phase_step bounds the phase increment delta_s * (|t| sup|phi'| + r)
    allowed per Gauss-Legendre panel (or, for uniform trapezoid grids, per
    0.9/max_phase_step-scaled node step).
    """

    max_phase_step: float = np.pi / 4
    panel_order: int = 10
    refinement_limit: int = 400_000

    def __post_init__(self):
        if not (0 < self.max_phase_step <= np.pi / 4):
            raise ValueError("max_phase_step must lie in (0, pi/4]")


DEFAULT_POLICY = QuadraturePolicy()


def trapezoid_weights(x: np.ndarray) -> np.ndarray:
    """Composite trapezoid weights on an ordered (possibly nonuniform) grid."""
    w = np.zeros_like(x)
    d = np.diff(x)
    w[:-1] += d / 2
    w[1:] += d / 2
    return w


@dataclass(frozen=True)
class FrequencyGrid:
    """Nodes s_0 < ... < s_N > 0 with quadrature weights for integrals in ds."""

    nodes: np.ndarray
    weights: np.ndarray

    def __post_init__(self):
        nodes = np.asarray(self.nodes, dtype=float)
        weights = np.asarray(self.weights, dtype=float)
        object.__setattr__(self, "nodes", nodes)
        object.__setattr__(self, "weights", weights)
        if nodes.ndim != 1 or nodes.size < 2:
            raise ValueError("need at least two frequency nodes")
        if np.any(nodes <= 0):
            raise NonPositiveSample("frequency nodes must be positive")
        if np.any(np.diff(nodes) <= 0):
            raise ValueError("frequency nodes must be strictly increasing")
        if np.any(weights < 0):
            raise ValueError("quadrature weights must be nonnegative")

    @property
    def span(self) -> tuple[float, float]:
        return float(self.nodes[0]), float(self.nodes[-1])

    def integrate(self, values: np.ndarray) -> complex:
        return complex(np.sum(self.weights * values))


def uniform_grid(lo: float, hi: float, n: int) -> FrequencyGrid:
    """Uniform nodes with trapezoid weights; spectrally accurate for smooth
    integrands vanishing at both endpoints."""
    nodes = np.linspace(lo, hi, n)
    return FrequencyGrid(nodes, trapezoid_weights(nodes))


def gauss_panel_grid(lo: float, hi: float, n_panels: int, order: int = 10) -> FrequencyGrid:
    """Composite Gauss-Legendre panels; panel edges split [lo, hi] uniformly
    so dyadic rescaling maps node sets exactly onto each other."""
    x, w = np.polynomial.legendre.leggauss(order)
    edges = np.linspace(lo, hi, n_panels + 1)
    mid = (edges[:-1] + edges[1:]) / 2
    half = (edges[1:] - edges[:-1]) / 2
    nodes = (mid[:, None] + half[:, None] * x[None, :]).ravel()
    weights = (half[:, None] * w[None, :]).ravel()
    return FrequencyGrid(nodes, weights)


def band_edges(k: int) -> tuple[float, float]:
    """Support [2^(k-1), 2^(k+1)] of the band-k cutoff."""
    return 2.0 ** (k - 1), 2.0 ** (k + 1)


def band_grid(k: int, phase_budget: float, policy: QuadraturePolicy = DEFAULT_POLICY) -> FrequencyGrid:
    """Gauss-Legendre grid on band k resolving a total phase rate
    `phase_budget` (radians per unit s) at the policy's panel step.

    Raises QuadratureUnderresolved if the panel count would exceed the
    policy's refinement limit.
    """
    lo, hi = band_edges(k)
    n_panels = int(np.ceil((hi - lo) * max(phase_budget, 1.0) / policy.max_phase_step)) + 2
    if n_panels > policy.refinement_limit:
        raise QuadratureUnderresolved(
            f"band {k} needs {n_panels} panels > limit {policy.refinement_limit}"
        )
    return gauss_panel_grid(lo, hi, n_panels, policy.panel_order)


def annulus_index(r: np.ndarray) -> np.ndarray:
    """Dyadic index j with 2^(j-1) <= r < 2^j for each radius."""
    r = np.asarray(r, dtype=float)
    if np.any(r <= 0):
        raise NonPositiveSample("annulus index defined for r > 0 only")
    return np.floor(np.log2(r)).astype(int) + 1


@dataclass(frozen=True)
class PhysicalGrid:
    """Ordered radii r_nodes > 0 and times t_nodes of a space-time sample set."""

    r_nodes: np.ndarray
    t_nodes: np.ndarray

    def __post_init__(self):
        r = np.asarray(self.r_nodes, dtype=float)
        t = np.asarray(self.t_nodes, dtype=float)
        object.__setattr__(self, "r_nodes", r)
        object.__setattr__(self, "t_nodes", t)
        if np.any(r <= 0):
            raise NonPositiveSample("physical radii must be positive")
        if np.any(np.diff(r) <= 0) or np.any(np.diff(t) <= 0):
            raise ValueError("grid nodes must be strictly increasing")

    @property
    def annulus(self) -> np.ndarray:
        return annulus_index(self.r_nodes)

    def r_weights(self) -> np.ndarray:
        return trapezoid_weights(self.r_nodes)

    def t_weights(self) -> np.ndarray:
        return trapezoid_weights(self.t_nodes)
