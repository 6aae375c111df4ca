"""Equilibria of the two-phase flow and their thermodynamic stability.

Equilibria carry constant pressure in every component, spherical
interfaces, and the pressure jump (outer minus inner) -(n-1)*sigma/R_k.
With phase transition the Gibbs potential also matches across the
interface, which forces a single pressure per phase and a common radius.

Thermodynamic stability is decided by the second variation of the
available energy under the mass constraints: without phase transition by
positive definiteness of an m x m matrix built from component masses and
interface areas; with phase transition by a dimensionless number zeta
(stable iff the interface is connected and zeta < 1).

All interface jumps below are radial: outer-side value minus inner-side
value.  Interface displacements h are radial displacements.  Both
conventions are orientation-free reformulations of the phase-oriented
jump conditions.
"""

from dataclasses import dataclass, field

import numpy as np

from . import eos as eos_mod
from .errors import (
    DensityJumpVanishes,
    GeometryDegenerate,
    NoConvergence,
    PressureOutOfRange,
)
from .geometry import (
    PHASE1,
    DropletGeometry,
    RadialGeometry,
    curvature_op_eigenvalue,
)

CASE_I = "no-phase-transition"
CASE_II = "phase-transition"

VERDICT_STABLE = "NormallyStable"
VERDICT_HYPERBOLIC = "NormallyHyperbolic"
VERDICT_DEGENERATE = "Degenerate"

_DEGENERACY_TOL = 1e-12


@dataclass(frozen=True)
class PhasePair:
    """Per-phase material data plus surface tension and dimension."""

    eos1: object
    eos2: object
    law1: object
    law2: object
    sigma: float
    n: int

    def eos_of(self, phase):
        return self.eos1 if phase == PHASE1 else self.eos2

    def law_of(self, phase):
        return self.law1 if phase == PHASE1 else self.law2


@dataclass
class EquilibriumState:
    case: str
    pressures: list            # one per component
    radii: list                # one per interface
    geometry: object           # RadialGeometry or DropletGeometry
    residuals: dict = field(default_factory=dict)

    def densities(self, pair):
        return [
            eos_mod.density_from_pressure(pair.eos_of(self.geometry.phase_of_component(c)), p)
            for c, p in enumerate(self.pressures)
        ]

    def density_slopes(self, pair):
        """rho'(pi) per component."""
        out = []
        for c, p in enumerate(self.pressures):
            e = pair.eos_of(self.geometry.phase_of_component(c))
            rho = eos_mod.density_from_pressure(e, p)
            out.append(1.0 / eos_mod.pressure_derivative(e, rho))
        return out

    def density_jumps(self, pair):
        """Radial density jump (outer minus inner) per interface."""
        rho = self.densities(pair)
        geo = self.geometry
        return [rho[geo.outer_component(k)] - rho[geo.inner_component(k)]
                for k in range(len(self.radii))]


@dataclass
class StabilityReport:
    case: str
    verdict: str
    eigenvalues: list
    C_matrix: object = None    # case i
    zeta: float = None         # case ii
    connected: bool = None     # case ii

    def as_dict(self):
        out = {
            "case": self.case,
            "verdict": self.verdict,
            "eigenvalues": [float(v) for v in self.eigenvalues],
        }
        if self.C_matrix is not None:
            out["C_matrix"] = np.asarray(self.C_matrix).tolist()
        if self.zeta is not None:
            out["zeta"] = float(self.zeta)
        if self.connected is not None:
            out["connected"] = bool(self.connected)
        return out


def _laplace_jump_residuals(pressures, radii, geo, sigma, n):
    res = []
    for k, R in enumerate(radii):
        dpi = pressures[geo.outer_component(k)] - pressures[geo.inner_component(k)]
        res.append(dpi + (n - 1) * sigma / R)
    return res


def _damped_newton(x0, fun, jac, scales, feasible, maxiter=60, tol=1e-13):
    """Newton with step halving until the scaled residual decreases.

    ``feasible`` is called on trial iterates; an infeasible full step that
    cannot be rescued by damping raises GeometryDegenerate.
    """
    x = np.array(x0, dtype=float)
    f = fun(x)
    norm = np.max(np.abs(f / scales))
    for _ in range(maxiter):
        if norm < tol:
            return x
        step = np.linalg.solve(jac(x), -f)
        alpha = 1.0
        while alpha > 1e-10:
            x_try = x + alpha * step
            if feasible(x_try):
                try:
                    f_try = fun(x_try)
                except PressureOutOfRange:
                    alpha *= 0.5
                    continue
                norm_try = np.max(np.abs(f_try / scales))
                if norm_try < norm or norm_try < tol:
                    x, f, norm = x_try, f_try, norm_try
                    break
            alpha *= 0.5
        else:
            if not feasible(x + step):
                raise GeometryDegenerate(
                    "Newton step leaves the admissible geometry")
            raise NoConvergence("damping failed to reduce the residual")
    if norm < tol:
        return x
    raise NoConvergence(f"equilibrium Newton stalled at residual {norm:.3e}")


def solve_equilibrium_case_i(pair, geometry_template, masses):
    """Equilibrium without phase transition for prescribed component masses.

    Unknowns are the m+1 component pressures and the m interface radii;
    equations are the component mass constraints and the Laplace jumps.
    """
    geo = geometry_template
    if not isinstance(geo, RadialGeometry):
        raise ValueError("case (i) equilibria use the concentric layout")
    m = geo.m
    masses = np.asarray(masses, dtype=float)
    if masses.shape != (m + 1,) or np.any(masses <= 0.0):
        raise ValueError("need one positive mass per component")
    n = pair.n
    phases = [geo.phase_of_component(c) for c in range(m + 1)]
    eoss = [pair.eos_of(p) for p in phases]

    def split(x):
        return x[: m + 1], x[m + 1 :]

    def geometry_of(radii):
        return RadialGeometry(n=n, R_out=geo.R_out, radii=tuple(radii),
                              inner_phase=geo.inner_phase)

    def feasible(x):
        _, radii = split(x)
        r = np.concatenate(([0.0], radii, [geo.R_out]))
        return bool(np.all(np.diff(r) > 1e-12 * geo.R_out))

    def fun(x):
        pis, radii = split(x)
        g = geometry_of(radii)
        vols = g.component_volumes()
        rho = [eos_mod.density_from_pressure(eoss[c], pis[c]) for c in range(m + 1)]
        f_mass = [rho[c] * vols[c] - masses[c] for c in range(m + 1)]
        f_lap = _laplace_jump_residuals(pis, radii, g, pair.sigma, n)
        return np.concatenate([f_mass, f_lap])

    def jac(x):
        pis, radii = split(x)
        g = geometry_of(radii)
        vols = g.component_volumes()
        from .geometry import sphere_area

        J = np.zeros((2 * m + 1, 2 * m + 1))
        rho = [eos_mod.density_from_pressure(eoss[c], pis[c]) for c in range(m + 1)]
        drho = [1.0 / eos_mod.pressure_derivative(eoss[c], rho[c]) for c in range(m + 1)]
        for c in range(m + 1):
            J[c, c] = drho[c] * vols[c]
            # volume gain at the outer bound, loss at the inner bound
            if c <= m - 1:
                J[c, m + 1 + c] += rho[c] * sphere_area(n, radii[c])
            if c >= 1:
                J[c, m + 1 + c - 1] -= rho[c] * sphere_area(n, radii[c - 1])
        for k in range(m):
            row = m + 1 + k
            J[row, k + 1] = 1.0
            J[row, k] = -1.0
            J[row, m + 1 + k] = -(n - 1) * pair.sigma / radii[k] ** 2
        return J

    vols0 = geo.component_volumes()
    x0 = np.concatenate([
        [eos_mod.pressure_from_density(
            eoss[c],
            min(max(masses[c] / vols0[c], eoss[c].rho_min * 1.01),
                eoss[c].rho_max * 0.99))
         for c in range(m + 1)],
        geo.radii,
    ])
    scales = np.concatenate([masses, np.full(m, max(1.0, abs(x0[: m + 1]).max()))])
    x = _damped_newton(x0, fun, jac, scales, feasible)

    pis, radii = split(x)
    g = geometry_of(radii)
    vols = g.component_volumes()
    rho = [eos_mod.density_from_pressure(eoss[c], pis[c]) for c in range(m + 1)]
    return EquilibriumState(
        case=CASE_I,
        pressures=list(pis),
        radii=list(radii),
        geometry=g,
        residuals={
            "laplace": float(np.max(np.abs(
                _laplace_jump_residuals(pis, radii, g, pair.sigma, n)))),
            "mass": float(np.max(np.abs(
                [(rho[c] * vols[c] - masses[c]) / masses[c] for c in range(m + 1)]))),
        },
    )


def solve_equilibrium_case_ii(pair, geometry_template, total_mass, m=None):
    """Equilibrium with phase transition for prescribed total mass.

    Unknowns are the phase pressures (pi1, pi2) and the common interface
    radius.  A concentric single-interface template keeps its layout; any
    multi-interface request uses the disjoint-droplet layout, the only one
    compatible with a shared radius.
    """
    if total_mass <= 0.0:
        raise ValueError("total mass must be positive")
    n = pair.n
    geo = geometry_template
    if isinstance(geo, RadialGeometry):
        if m is None:
            m = geo.m
        if m == 1 and geo.m == 1:
            layout = "concentric"
            R0 = geo.radii[0]
        else:
            layout = "droplets"
            R0 = float(np.mean(geo.radii))
    elif isinstance(geo, DropletGeometry):
        layout = "concentric" if geo.m == 1 else "droplets"
        m = geo.m
        R0 = geo.radius
        if layout == "concentric":
            geo = RadialGeometry(n=n, R_out=geo.R_out, radii=(R0,),
                                 inner_phase=PHASE1)
    else:
        raise ValueError("unsupported geometry template")
    R_out = geo.R_out

    def geometry_of(R):
        if layout == "concentric":
            return RadialGeometry(n=n, R_out=R_out, radii=(R,),
                                  inner_phase=geo.inner_phase)
        return DropletGeometry(n=n, R_out=R_out, radius=R, m=m)

    def feasible(x):
        R = x[2]
        if not (1e-12 * R_out < R < R_out * (1.0 - 1e-12)):
            return False
        try:
            geometry_of(R)
        except ValueError:
            return False
        return True

    def unpack(x):
        """(pi per component, geometry) for unknowns (pi1, pi2, R)."""
        g = geometry_of(x[2])
        pis = [x[0] if g.phase_of_component(c) == PHASE1 else x[1]
               for c in range(g.n_components)]
        return pis, g

    def fun(x):
        pi1, pi2, R = x
        g = geometry_of(R)
        rho1 = eos_mod.density_from_pressure(pair.eos1, pi1)
        rho2 = eos_mod.density_from_pressure(pair.eos2, pi2)
        pis, _ = unpack(x)
        lap = _laplace_jump_residuals(pis, g.radii, g, pair.sigma, n)[0]
        gibbs = eos_mod.gibbs_phi(pair.eos2, rho2) - eos_mod.gibbs_phi(pair.eos1, rho1)
        vols = g.component_volumes()
        mass = sum(
            (rho1 if g.phase_of_component(c) == PHASE1 else rho2) * vols[c]
            for c in range(g.n_components)
        ) - total_mass
        return np.array([lap, gibbs, mass])

    def jac(x):
        pi1, pi2, R = x
        g = geometry_of(R)
        from .geometry import sphere_area

        rho1 = eos_mod.density_from_pressure(pair.eos1, pi1)
        rho2 = eos_mod.density_from_pressure(pair.eos2, pi2)
        drho1 = 1.0 / eos_mod.pressure_derivative(pair.eos1, rho1)
        drho2 = 1.0 / eos_mod.pressure_derivative(pair.eos2, rho2)
        vols = g.component_volumes()
        vol1 = sum(v for c, v in enumerate(vols) if g.phase_of_component(c) == PHASE1)
        vol2 = sum(vols) - vol1
        # laplace row: outer-minus-inner pressure jump
        inner_is_1 = g.phase_of_component(g.inner_component(0)) == PHASE1
        d_lap_d1, d_lap_d2 = (-1.0, 1.0) if inner_is_1 else (1.0, -1.0)
        area = g.interface_areas()[0] * len(g.radii)
        sgn = 1.0 if inner_is_1 else -1.0
        return np.array([
            [d_lap_d1, d_lap_d2, -(n - 1) * pair.sigma / R**2],
            [-1.0 / rho1, 1.0 / rho2, 0.0],          # d phi / d pi = 1/rho
            [drho1 * vol1, drho2 * vol2, sgn * (rho1 - rho2) * area],
        ])

    # stage 1: coexistence pressures at the frozen template radius, so the
    # full solve starts on (and stays on) the branch the template selects
    rho_bar = total_mass / sum(geometry_of(R0).component_volumes())
    pi_guess_1 = eos_mod.pressure_from_density(
        pair.eos1, min(max(rho_bar, pair.eos1.rho_min * 1.01), pair.eos1.rho_max * 0.99))
    pi_guess_2 = eos_mod.pressure_from_density(
        pair.eos2, min(max(rho_bar, pair.eos2.rho_min * 1.01), pair.eos2.rho_max * 0.99))

    def fun_frozen(y):
        return fun(np.array([y[0], y[1], R0]))[1:]

    def jac_frozen(y):
        return jac(np.array([y[0], y[1], R0]))[1:, :2]

    pi_scale = max(1.0, abs(pi_guess_1), abs(pi_guess_2))
    phi_scale = max(1.0, abs(eos_mod.gibbs_phi(pair.eos1, rho_bar))
                    if pair.eos1.rho_min < rho_bar < pair.eos1.rho_max else 1.0)
    y = _damped_newton(
        np.array([pi_guess_1, pi_guess_2]), fun_frozen, jac_frozen,
        np.array([phi_scale, total_mass]), lambda y: True)

    # stage 2: release the radius
    x0 = np.array([y[0], y[1], R0])
    scales = np.array([pi_scale, phi_scale, total_mass])
    x = _damped_newton(x0, fun, jac, scales, feasible)

    pis, g = unpack(x)
    rho1 = eos_mod.density_from_pressure(pair.eos1, x[0])
    rho2 = eos_mod.density_from_pressure(pair.eos2, x[1])
    jump = abs(rho2 - rho1)
    if jump < 1e-8 * max(rho1, rho2):
        raise DensityJumpVanishes(
            f"|[[rho]]| = {jump:.3e} at the equilibrium candidate")
    vols = g.component_volumes()
    mass = sum((rho1 if g.phase_of_component(c) == PHASE1 else rho2) * vols[c]
               for c in range(g.n_components))
    return EquilibriumState(
        case=CASE_II,
        pressures=pis,
        radii=list(g.radii),
        geometry=g,
        residuals={
            "laplace": float(np.max(np.abs(_laplace_jump_residuals(
                pis, g.radii, g, pair.sigma, n)))),
            "gibbs": float(abs(
                eos_mod.gibbs_phi(pair.eos2, rho2)
                - eos_mod.gibbs_phi(pair.eos1, rho1))),
            "mass": float(abs(mass - total_mass) / total_mass),
        },
    )


def stability_matrix_case_i(eq, pair, sigma=None):
    """Second-variation matrix on interface constants, case (i).

    c_kl = sum_c rho_c / (rho'_c |Omega_c|) delta_c^k delta_c^l
           - sigma (n-1) / (R_k^2 |Sigma_k|) delta_kl.
    Positive definite <=> thermodynamically stable.  Passing ``sigma``
    overrides the pair's value (frozen-equilibrium sweeps).
    """
    if eq.case != CASE_I:
        raise ValueError("case-(i) stability matrix needs a case-(i) state")
    if sigma is None:
        sigma = pair.sigma
    geo = eq.geometry
    m = len(eq.radii)
    n = pair.n
    rho = eq.densities(pair)
    drho = eq.density_slopes(pair)
    vols = geo.component_volumes()
    areas = geo.interface_areas()
    # radial boundary sign: +1 when interface k is component c's outer
    # boundary, -1 when inner.  With all interfaces oriented out of one
    # phase the signed products reduce to the plain adjacency indicators;
    # the signed matrix is an orthogonal conjugate either way (same
    # spectrum) and is the one consistent with radial displacements h.
    sgn = np.zeros((m, geo.n_components))
    for k in range(m):
        sgn[k, geo.inner_component(k)] = 1.0
        sgn[k, geo.outer_component(k)] = -1.0
    C = np.zeros((m, m))
    for k in range(m):
        for l in range(m):
            C[k, l] = sum(
                rho[c] / (drho[c] * vols[c]) * sgn[k, c] * sgn[l, c]
                for c in range(geo.n_components)
                if sgn[k, c] and sgn[l, c]
            )
        C[k, k] -= sigma * (n - 1) / (eq.radii[k] ** 2 * areas[k])
    eigs = np.linalg.eigvalsh(C)
    scale = max(1.0, float(np.max(np.abs(eigs))))
    if np.any(np.abs(eigs) <= _DEGENERACY_TOL * scale):
        verdict = VERDICT_DEGENERATE
    elif np.all(eigs > 0.0):
        verdict = VERDICT_STABLE
    else:
        verdict = VERDICT_HYPERBOLIC
    return StabilityReport(case=CASE_I, verdict=verdict,
                           eigenvalues=list(eigs), C_matrix=C)


def zeta_case_ii(eq, pair, sigma=None):
    """Dimensionless stability number, case (ii).

    zeta = (n-1) sigma / ([[rho]]^2 R^2 |Gamma|) * integral of rho' rho;
    stable iff the interface is connected (m = 1) and zeta < 1.
    """
    if eq.case != CASE_II:
        raise ValueError("zeta needs a phase-transition state")
    if sigma is None:
        sigma = pair.sigma
    geo = eq.geometry
    n = pair.n
    jump = eq.density_jumps(pair)[0]
    if abs(jump) < 1e-8:
        raise DensityJumpVanishes("density jump vanished in zeta evaluation")
    rho = eq.densities(pair)
    drho = eq.density_slopes(pair)
    vols = geo.component_volumes()
    integral = sum(drho[c] * rho[c] * vols[c] for c in range(geo.n_components))
    R = eq.radii[0]
    total_area = sum(geo.interface_areas())
    zeta = (n - 1) * sigma * integral / (jump**2 * R**2 * total_area)
    connected = len(eq.radii) == 1
    if abs(zeta - 1.0) <= _DEGENERACY_TOL:
        verdict = VERDICT_DEGENERATE
    elif connected and zeta < 1.0:
        verdict = VERDICT_STABLE
    else:
        verdict = VERDICT_HYPERBOLIC
    return StabilityReport(case=CASE_II, verdict=verdict,
                           eigenvalues=[1.0 - zeta], zeta=float(zeta),
                           connected=connected)


@dataclass(frozen=True)
class BulkPerturbation:
    """Per-component constants plus L2 norms of the zero-mean remainders."""

    constants: tuple
    remainder_norms: tuple = None

    def norm(self, c):
        return 0.0 if self.remainder_norms is None else self.remainder_norms[c]


@dataclass(frozen=True)
class SurfacePerturbation:
    """Per-interface constants plus orthonormal harmonic coefficients.

    ``harmonics[k]`` is a list of (degree, coefficient) pairs; coefficients
    are taken against an L2(Sigma_k)-orthonormal basis, degrees >= 1.
    """

    constants: tuple
    harmonics: tuple = None

    def modes(self, k):
        return () if self.harmonics is None else tuple(self.harmonics[k])


def second_variation_form(eq, pair, v, h):
    """Quadratic form of the constrained energy at the equilibrium.

    value = sum_c (rho'_c/rho_c) (v_c^2 |Omega_c| + |v0|_c^2)
          + sigma * [sum_k a_0(R_k) |Sigma_k| h_k^2
                     + sum_k sum_(l,c) a_l(R_k) c^2],
    with a_l the curvature-operator eigenvalue of degree l.
    """
    geo = eq.geometry
    n = pair.n
    rho = eq.densities(pair)
    drho = eq.density_slopes(pair)
    vols = geo.component_volumes()
    areas = geo.interface_areas()
    bulk = sum(
        (drho[c] / rho[c]) * (v.constants[c] ** 2 * vols[c] + v.norm(c) ** 2)
        for c in range(geo.n_components)
    )
    surf = 0.0
    for k, R in enumerate(eq.radii):
        a0, _ = curvature_op_eigenvalue(n, R, 0)
        surf += a0 * areas[k] * h.constants[k] ** 2
        for degree, coeff in h.modes(k):
            al, _ = curvature_op_eigenvalue(n, R, degree)
            surf += al * coeff**2
    return bulk + pair.sigma * surf


def constraint_kernel_check(eq, pair, v, h, rtol=1e-10):
    """Evaluate the linearised mass constraints on a perturbation.

    Case (i): one constraint per component,
        rho'_c v_c |Omega_c| + rho_c sum_k s_ck |Sigma_k| h_k = 0,
    with s_ck = +1 when interface k is the component's outer boundary and
    -1 when it is the inner one.  Case (ii): the single total-mass
    constraint sum_c rho'_c v_c |Omega_c| = sum_k [[rho]]_k |Sigma_k| h_k.
    Returns a list of booleans (one per constraint).
    """
    geo = eq.geometry
    rho = eq.densities(pair)
    drho = eq.density_slopes(pair)
    vols = geo.component_volumes()
    areas = geo.interface_areas()
    m = len(eq.radii)

    def boundary_sign(c, k):
        if geo.inner_component(k) == c:
            return 1.0     # component gains volume when R_k grows
        if geo.outer_component(k) == c:
            return -1.0
        return 0.0

    if eq.case == CASE_I:
        results = []
        for c in range(geo.n_components):
            bulk = drho[c] * v.constants[c] * vols[c]
            surf = rho[c] * sum(
                boundary_sign(c, k) * areas[k] * h.constants[k] for k in range(m)
            )
            scale = abs(bulk) + abs(surf) + 1e-300
            results.append(abs(bulk + surf) <= rtol * max(scale, 1.0))
        return results

    jumps = eq.density_jumps(pair)
    lhs = sum(drho[c] * v.constants[c] * vols[c] for c in range(geo.n_components))
    rhs = sum(jumps[k] * areas[k] * h.constants[k] for k in range(m))
    scale = abs(lhs) + abs(rhs) + 1e-300
    return [abs(lhs - rhs) <= rtol * max(scale, 1.0)]


def critical_sigma_frozen(eq, pair):
    """Surface tension at which stability flips, holding the state frozen.

    Case (i): smallest positive root of the affine map sigma -> min eig
    C_*(sigma) (exact for m = 1).  Case (ii): sigma with zeta = 1, exact
    since zeta is linear in sigma at frozen state.
    """
    if eq.case == CASE_II:
        rep = zeta_case_ii(eq, pair)
        return pair.sigma / rep.zeta
    base = stability_matrix_case_i(eq, pair, sigma=0.0).C_matrix
    geo = eq.geometry
    n = pair.n
    areas = geo.interface_areas()
    slope = np.diag([(n - 1) / (eq.radii[k] ** 2 * areas[k])
                     for k in range(len(eq.radii))])
    # generalized eigenvalue problem base v = sigma * slope v
    vals = np.linalg.eigvals(np.linalg.solve(slope, base))
    vals = np.real(vals[np.abs(np.imag(vals)) < 1e-10 * np.max(np.abs(vals))])
    positive = vals[vals > 0.0]
    if positive.size == 0:
        raise ValueError("no positive critical surface tension")
    return float(np.min(positive))
