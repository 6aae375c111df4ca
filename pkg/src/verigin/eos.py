"""Free energies, pressure laws and the Gibbs potential of the two phases.

Pressure and density are linked by pi(rho) = rho^2 psi'(rho), where psi is
the free energy per unit mass.  The named families are

    ideal gas:  pi = c*rho,   psi = c*log(rho) + d
    power law:  pi = c*rho^r, psi = c/(r-1)*rho^(r-1) + d   (r != 1)

and a custom family supplies (psi, psi', psi'') directly so that exact
derivatives are available to Newton solves and stability formulas.
The phase-equilibrium potential is phi(rho) = psi(rho) + rho*psi'(rho),
which satisfies phi'(rho) = pi'(rho)/rho.
"""

from dataclasses import dataclass

import numpy as np

from ._rootfind import newton_bracketed_vec
from .errors import DensityOutOfRange, PressureOutOfRange
from .reports import ValidationReport

IDEAL_GAS = "ideal-gas"
POWER_LAW = "power-law"
CUSTOM = "custom"


@dataclass(frozen=True)
class EquationOfState:
    family: str
    psi: callable
    dpsi: callable
    d2psi: callable
    rho_min: float
    rho_max: float
    # (c, r, d) for the named families; r unused for the ideal gas.
    params: tuple = ()

    def __post_init__(self):
        if not (0.0 < self.rho_min < self.rho_max):
            raise ValueError("need 0 < rho_min < rho_max")

    @property
    def jit_spec(self):
        """(family_code, c, r, d) for the compiled kernels, or None."""
        if self.family == IDEAL_GAS:
            c, _, d = self.params
            return (0, c, 0.0, d)
        if self.family == POWER_LAW:
            c, r, d = self.params
            return (1, c, r, d)
        return None


def ideal_gas(c, d=0.0, rho_range=(1e-6, 1e6)):
    if c <= 0.0:
        raise ValueError("ideal-gas slope c must be positive")
    return EquationOfState(
        family=IDEAL_GAS,
        psi=lambda rho: c * np.log(rho) + d,
        dpsi=lambda rho: c / rho,
        d2psi=lambda rho: -c / rho**2,
        rho_min=rho_range[0],
        rho_max=rho_range[1],
        params=(float(c), 1.0, float(d)),
    )


def power_law(c, r, d=0.0, rho_range=(1e-6, 1e6)):
    if c <= 0.0 or r <= 0.0 or r == 1.0:
        raise ValueError("power law needs c > 0, r > 0, r != 1")
    return EquationOfState(
        family=POWER_LAW,
        psi=lambda rho: c / (r - 1.0) * rho ** (r - 1.0) + d,
        dpsi=lambda rho: c * rho ** (r - 2.0),
        d2psi=lambda rho: c * (r - 2.0) * rho ** (r - 3.0),
        rho_min=rho_range[0],
        rho_max=rho_range[1],
        params=(float(c), float(r), float(d)),
    )


def custom(psi, dpsi, d2psi, rho_range):
    return EquationOfState(
        family=CUSTOM,
        psi=psi,
        dpsi=dpsi,
        d2psi=d2psi,
        rho_min=rho_range[0],
        rho_max=rho_range[1],
    )


def _check_density(eos, rho):
    rho = np.asarray(rho, dtype=float)
    if np.any(rho < eos.rho_min) or np.any(rho > eos.rho_max):
        raise DensityOutOfRange(
            f"rho outside [{eos.rho_min}, {eos.rho_max}]"
        )
    return rho


def pressure_from_density(eos, rho):
    """Maxwell pressure pi(rho) = rho^2 psi'(rho)."""
    rho = _check_density(eos, rho)
    out = rho**2 * eos.dpsi(rho)
    return float(out) if out.ndim == 0 else out


def pressure_derivative(eos, rho):
    """pi'(rho) = 2 rho psi'(rho) + rho^2 psi''(rho); positive on valid EOS."""
    rho = _check_density(eos, rho)
    out = 2.0 * rho * eos.dpsi(rho) + rho**2 * eos.d2psi(rho)
    return float(out) if out.ndim == 0 else out


def density_from_pressure(eos, pi, rtol=1e-12, maxiter=100):
    """Invert the pressure law on the valid density window.

    Safeguarded Newton with bisection fallback; the named families short-cut
    through their closed-form inverses.
    """
    pi_arr = np.asarray(pi, dtype=float)
    scalar = pi_arr.ndim == 0
    pi_arr = np.atleast_1d(pi_arr)

    lo = pressure_from_density(eos, eos.rho_min)
    hi = pressure_from_density(eos, eos.rho_max)
    pad = 1e-12 * max(abs(lo), abs(hi), 1.0)
    if np.any(pi_arr < lo - pad) or np.any(pi_arr > hi + pad):
        raise PressureOutOfRange(f"pressure outside image [{lo}, {hi}]")

    if eos.family == IDEAL_GAS:
        c = eos.params[0]
        rho = pi_arr / c
    elif eos.family == POWER_LAW:
        c, r, _ = eos.params
        rho = (pi_arr / c) ** (1.0 / r)
    else:
        rho = newton_bracketed_vec(
            f=lambda x: x**2 * eos.dpsi(x) - pi_arr,
            fprime=lambda x: 2.0 * x * eos.dpsi(x) + x**2 * eos.d2psi(x),
            lo=np.full_like(pi_arr, eos.rho_min),
            hi=np.full_like(pi_arr, eos.rho_max),
            rtol=rtol,
            maxiter=maxiter,
        )
    rho = np.clip(rho, eos.rho_min, eos.rho_max)
    return float(rho[0]) if scalar else rho


def density_derivative_of_pressure(eos, pi):
    """rho'(pi) = 1 / pi'(rho(pi))."""
    rho = density_from_pressure(eos, pi)
    return 1.0 / pressure_derivative(eos, rho)


def gibbs_phi(eos, rho):
    """phi(rho) = psi(rho) + rho psi'(rho); its jump closes the
    phase-transition interface condition."""
    rho = _check_density(eos, rho)
    out = eos.psi(rho) + rho * eos.dpsi(rho)
    return float(out) if out.ndim == 0 else out


def gibbs_phi_prime(eos, rho):
    """phi'(rho) = pi'(rho)/rho, exact."""
    rho = _check_density(eos, rho)
    out = 2.0 * eos.dpsi(rho) + rho * eos.d2psi(rho)
    return float(out) if out.ndim == 0 else out


def validate_eos(eos, samples=200):
    """Sample the valid window and check rho > 0 and pi'(rho) > 0."""
    if samples < 2:
        raise ValueError("need at least 2 samples")
    rho = np.linspace(eos.rho_min, eos.rho_max, samples)
    dpi = pressure_derivative(eos, rho)
    failures = []
    if np.min(dpi) <= 0.0:
        i = int(np.argmin(dpi))
        failures.append((f"rho={rho[i]:.6g}", f"pi'(rho) = {dpi[i]:.6g} <= 0"))
    return ValidationReport(
        passed=not failures,
        metrics={"min_pressure_slope": float(np.min(dpi)), "min_rho": float(rho[0])},
        failures=failures,
    )
