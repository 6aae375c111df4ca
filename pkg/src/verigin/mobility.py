"""Velocity closures: Darcy permeability and the Forchheimer inversion.

Darcy's law is u = -k(pi, |grad pi|^2) grad pi.  Forchheimer's law
g(|u|) u = -l(pi) grad pi is isotropic, so it reduces to the scalar
equation w g(w) = l sqrt(s) for the speed w = k sqrt(s); inverting it
yields an effective permeability with the same signature as Darcy's.
"""

from dataclasses import dataclass

import numpy as np

from ._rootfind import newton_bracketed
from .errors import NoConvergence, NonMonotoneDrag
from .reports import ValidationReport

DARCY = "darcy"
FORCHHEIMER = "forchheimer"

# preset codes understood by the compiled kernels
PRESET_DARCY_CONST = 0
PRESET_DARCY_AFFINE = 1
PRESET_FORCH_LINEAR = 2


@dataclass(frozen=True)
class VelocityLaw:
    kind: str
    k: callable = None        # darcy: (pi, s) -> permeability
    dk_ds: callable = None    # darcy: (pi, s) -> d k / d s
    l: callable = None        # forchheimer: pi -> mobility > 0
    g: callable = None        # forchheimer: speed -> drag > 0
    preset: tuple = None      # (code, p0, p1) when kernel-compatible

    @property
    def jit_spec(self):
        return self.preset


def darcy(k, dk_ds=None, preset=None):
    if dk_ds is None:
        def dk_ds(pi, s, _k=k):  # central difference fallback
            h = max(1e-6, 1e-6 * abs(s))
            if s - h < 0.0:
                return (_k(pi, s + h) - _k(pi, s)) / h
            return (_k(pi, s + h) - _k(pi, s - h)) / (2.0 * h)
    return VelocityLaw(kind=DARCY, k=k, dk_ds=dk_ds, preset=preset)


def darcy_const(k0):
    return darcy(lambda pi, s: k0, lambda pi, s: 0.0,
                 preset=(PRESET_DARCY_CONST, float(k0), 0.0))


def darcy_affine(k0, k1):
    """k(pi, s) = k0 + k1 * s."""
    return darcy(lambda pi, s: k0 + k1 * s, lambda pi, s: k1,
                 preset=(PRESET_DARCY_AFFINE, float(k0), float(k1)))


def forchheimer(l, g):
    return VelocityLaw(kind=FORCHHEIMER, l=l, g=g)


def forchheimer_linear(l0, gamma=1.0):
    """g(v) = 1 + gamma*v with constant mobility l0."""
    return VelocityLaw(
        kind=FORCHHEIMER,
        l=lambda pi: l0,
        g=lambda v: 1.0 + gamma * v,
        preset=(PRESET_FORCH_LINEAR, float(l0), float(gamma)),
    )


def effective_permeability(law, pi, s):
    """Permeability k such that u = -k grad pi solves the closure law."""
    if s < 0.0:
        raise ValueError("s = |grad pi|^2 must be nonnegative")
    if law.kind == DARCY:
        return law.k(pi, s)

    lval = law.l(pi)
    if s == 0.0:
        return lval / law.g(0.0)
    root_s = np.sqrt(s)
    target = lval * root_s

    def resid(w):
        return w * law.g(w) - target

    # expand the bracket; w*g(w) is increasing for admissible drag laws
    hi = max(target / law.g(0.0), 1e-30)
    f_hi = resid(hi)
    grow = 0
    while f_hi < 0.0:
        new_hi = 2.0 * hi
        f_new = resid(new_hi)
        if f_new < f_hi:
            raise NonMonotoneDrag(f"w*g(w) decreasing near w={new_hi:.3g}")
        hi, f_hi = new_hi, f_new
        grow += 1
        if grow > 200:
            raise NoConvergence("drag-law bracket expansion failed")
    w = newton_bracketed(resid, 0.0, hi, rtol=1e-14, scale=max(hi, 1.0))
    return w / root_s


def velocity(law, pi, grad_pi):
    """u = -k_eff(pi, |grad pi|^2) grad pi."""
    grad_pi = np.asarray(grad_pi, dtype=float)
    s = float(np.dot(grad_pi, grad_pi))
    return -effective_permeability(law, pi, s) * grad_pi


def effective_dk_ds(law, pi, s):
    """s-derivative of the effective permeability.

    Exact map for Darcy; central differences with step max(1e-6, 1e-6*s)
    for Forchheimer, where no closed form exists.
    """
    if law.kind == DARCY:
        return law.dk_ds(pi, s)
    h = max(1e-6, 1e-6 * abs(s))
    if s - h < 0.0:
        return (effective_permeability(law, pi, s + h)
                - effective_permeability(law, pi, s)) / h
    return (effective_permeability(law, pi, s + h)
            - effective_permeability(law, pi, s - h)) / (2.0 * h)


def validate_ellipticity(law, pi_window, s_window, samples=8):
    """Check k > 0 and k + 2 s dk/ds > 0 on a (pi, s) sample box."""
    if samples < 4:
        raise ValueError("need at least 4 samples")
    pis = np.linspace(pi_window[0], pi_window[1], samples)
    ss = np.linspace(max(s_window[0], 0.0), s_window[1], samples)
    min_k = np.inf
    min_ell = np.inf
    failures = []
    for pi in pis:
        for s in ss:
            try:
                k = effective_permeability(law, pi, s)
            except (NonMonotoneDrag, NoConvergence) as exc:
                failures.append((f"pi={pi:.6g}, s={s:.6g}", str(exc)))
                continue
            ell = k + 2.0 * s * effective_dk_ds(law, pi, s)
            if k < min_k:
                min_k = k
            if ell < min_ell:
                min_ell = ell
            if k <= 0.0:
                failures.append((f"pi={pi:.6g}, s={s:.6g}", f"k = {k:.6g} <= 0"))
            elif ell <= 0.0:
                failures.append(
                    (f"pi={pi:.6g}, s={s:.6g}", f"k + 2s dk/ds = {ell:.6g} <= 0")
                )
    return ValidationReport(
        passed=not failures,
        metrics={"min_k": float(min_k), "min_k_plus_2s_dkds": float(min_ell)},
        failures=failures,
    )
