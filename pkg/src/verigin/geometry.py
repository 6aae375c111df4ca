"""Sphere geometry bookkeeping: volumes, areas, curvature, harmonic modes.

Two interface layouts are supported.  ``RadialGeometry`` is the concentric
layout (nested spheres around the origin) used by the nonlinear simulator
and by all no-phase-transition configurations.  ``DropletGeometry`` is the
disjoint-droplet layout (m equal spheres of the disperse phase in a
connected bath) required by phase-transition equilibria with m > 1, where
equal radii are incompatible with nesting; it enters the stability and
spectral formulas only through component volumes, interface areas and
adjacency.
"""

import math
from dataclasses import dataclass

import numpy as np

PHASE1 = 1
PHASE2 = 2


def ball_volume(n, radius):
    """Volume of the n-ball, kappa_n R^n."""
    if radius < 0.0:
        raise ValueError("radius must be nonnegative")
    kappa = math.pi ** (n / 2.0) / math.gamma(n / 2.0 + 1.0)
    return kappa * radius**n


def sphere_area(n, radius):
    """Surface measure of the (n-1)-sphere of radius R, n kappa_n R^(n-1)."""
    if radius <= 0.0:
        raise ValueError("radius must be positive")
    kappa = math.pi ** (n / 2.0) / math.gamma(n / 2.0 + 1.0)
    return n * kappa * radius ** (n - 1)


def mean_curvature_jump(n, radius, sigma):
    """Equilibrium pressure jump (outer minus inner) across a sphere.

    With the normal pointing out of the enclosed set this is
    -(n-1) sigma / R; the value is orientation-free when expressed as
    outer-side minus inner-side.
    """
    if radius <= 0.0:
        raise ValueError("radius must be positive")
    return -(n - 1) * sigma / radius


def harmonic_multiplicity(n, l):
    """Dimension of degree-l spherical harmonics on S^(n-1)."""
    if l < 0:
        raise ValueError("degree must be nonnegative")
    if l == 0:
        return 1

    def _comb(a, b):
        return math.comb(a, b) if 0 <= b <= a else 0

    return _comb(l + n - 1, l) - _comb(l + n - 3, l - 2)


def curvature_op_eigenvalue(n, radius, l):
    """Eigenvalue of the curvature linearization on degree-l harmonics.

    The operator -(n-1)/R^2 - Laplace_Beltrami acts on degree-l harmonics
    as (l(l+n-2) - (n-1)) / R^2.  Returns (eigenvalue, multiplicity); the
    value vanishes at l = 1 (translations) and is negative only at l = 0.
    """
    if l < 0 or l != int(l):
        raise ValueError("degree must be a nonnegative integer")
    value = (l * (l + n - 2) - (n - 1)) / radius**2
    return value, harmonic_multiplicity(n, l)


@dataclass(frozen=True)
class RadialGeometry:
    """Concentric layout: interfaces at 0 < R_1 < ... < R_m < R_out.

    Component s (s = 0..m) is the shell between R_s and R_{s+1} with
    R_0 = 0 and R_{m+1} = R_out; phases alternate starting from
    ``inner_phase``.
    """

    n: int
    R_out: float
    radii: tuple
    inner_phase: int = PHASE1

    def __post_init__(self):
        object.__setattr__(self, "radii", tuple(float(r) for r in self.radii))
        if self.n < 2:
            raise ValueError("spatial dimension must be >= 2")
        if self.inner_phase not in (PHASE1, PHASE2):
            raise ValueError("inner_phase must be 1 or 2")
        r = (0.0,) + self.radii + (self.R_out,)
        if any(b - a <= 0.0 for a, b in zip(r, r[1:])):
            raise ValueError("radii must be strictly increasing inside (0, R_out)")

    @property
    def m(self):
        return len(self.radii)

    @property
    def n_components(self):
        return self.m + 1

    def component_bounds(self):
        r = (0.0,) + self.radii + (self.R_out,)
        return [(r[s], r[s + 1]) for s in range(self.n_components)]

    def component_volumes(self):
        return [ball_volume(self.n, b) - ball_volume(self.n, a)
                for a, b in self.component_bounds()]

    def phase_of_component(self, s):
        first = self.inner_phase
        other = PHASE2 if first == PHASE1 else PHASE1
        return first if s % 2 == 0 else other

    def interface_areas(self):
        return [sphere_area(self.n, r) for r in self.radii]

    def adjacency(self):
        """delta[k][s] = 1 iff interface k bounds component s."""
        delta = np.zeros((self.m, self.n_components), dtype=int)
        for k in range(self.m):
            delta[k, k] = 1
            delta[k, k + 1] = 1
        return delta

    def inner_component(self, k):
        return k

    def outer_component(self, k):
        return k + 1


@dataclass(frozen=True)
class DropletGeometry:
    """m disjoint equal droplets of the disperse phase in a connected bath.

    Components 0..m-1 are the droplet interiors (phase 1), component m is
    the bath (phase 2).  Interface k separates droplet k from the bath.
    """

    n: int
    R_out: float
    radius: float
    m: int

    def __post_init__(self):
        if self.n < 2:
            raise ValueError("spatial dimension must be >= 2")
        if self.m < 1:
            raise ValueError("need at least one droplet")
        if not (0.0 < self.radius):
            raise ValueError("droplet radius must be positive")
        if self.m * ball_volume(self.n, self.radius) >= ball_volume(self.n, self.R_out):
            raise ValueError("droplets exceed the domain volume")

    @property
    def radii(self):
        return (self.radius,) * self.m

    @property
    def n_components(self):
        return self.m + 1

    def component_volumes(self):
        v_drop = ball_volume(self.n, self.radius)
        return [v_drop] * self.m + [ball_volume(self.n, self.R_out) - self.m * v_drop]

    def phase_of_component(self, s):
        return PHASE1 if s < self.m else PHASE2

    def interface_areas(self):
        return [sphere_area(self.n, self.radius)] * self.m

    def adjacency(self):
        delta = np.zeros((self.m, self.n_components), dtype=int)
        for k in range(self.m):
            delta[k, k] = 1
            delta[k, self.m] = 1
        return delta

    def inner_component(self, k):
        return k

    def outer_component(self, k):
        return self.m

    def cell_radius(self):
        """Outer radius of the per-droplet bath cell of volume |Omega_2|/m."""
        return self.R_out * self.m ** (-1.0 / self.n)
