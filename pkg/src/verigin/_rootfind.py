"""Safeguarded scalar root finding used by the EOS inversion and drag laws."""

import numpy as np

from .errors import NoConvergence


def newton_bracketed(f, lo, hi, fprime=None, rtol=1e-12, maxiter=100, scale=None):
    """Root of f on [lo, hi] by Newton steps with a bisection safeguard.

    f(lo) and f(hi) must have opposite signs (or one endpoint is a root).
    When ``fprime`` is None the derivative is approximated by a central
    difference.  Convergence is declared on the bracket width relative to
    ``scale`` (defaults to max(|lo|, |hi|, 1)).
    """
    flo = f(lo)
    fhi = f(hi)
    if flo == 0.0:
        return lo
    if fhi == 0.0:
        return hi
    if flo * fhi > 0.0:
        raise NoConvergence(f"root not bracketed on [{lo}, {hi}]")
    if scale is None:
        scale = max(abs(lo), abs(hi), 1.0)
    x = 0.5 * (lo + hi)
    for _ in range(maxiter):
        fx = f(x)
        if fx == 0.0:
            return x
        if flo * fx < 0.0:
            hi = x
        else:
            lo, flo = x, fx
        if hi - lo <= rtol * scale:
            return 0.5 * (lo + hi)
        if fprime is not None:
            dfx = fprime(x)
        else:
            h = 1e-7 * max(abs(x), scale)
            dfx = (f(x + h) - f(x - h)) / (2.0 * h)
        if dfx != 0.0:
            x_new = x - fx / dfx
        else:
            x_new = lo - 1.0  # force bisection
        if not (lo < x_new < hi):
            x_new = 0.5 * (lo + hi)
        x = x_new
    raise NoConvergence(f"no root to rtol={rtol} within {maxiter} iterations")


def newton_bracketed_vec(f, fprime, lo, hi, rtol=1e-12, maxiter=100):
    """Vectorised variant for elementwise-monotone f with exact derivative.

    ``lo``/``hi`` are arrays bracketing each component's root.  Used for
    array-valued EOS inversion; all iterates stay inside their brackets.
    """
    lo = np.array(lo, dtype=float)
    hi = np.array(hi, dtype=float)
    flo = f(lo)
    fhi = f(hi)
    if np.any(flo * fhi > 0.0):
        raise NoConvergence("some components not bracketed")
    x = 0.5 * (lo + hi)
    for _ in range(maxiter):
        fx = f(x)
        left = flo * fx < 0.0
        hi = np.where(left, x, hi)
        lo = np.where(left, lo, x)
        flo = np.where(left, flo, fx)
        dfx = fprime(x)
        with np.errstate(divide="ignore", invalid="ignore"):
            x_new = x - fx / dfx
        bad = ~np.isfinite(x_new) | (x_new < lo) | (x_new > hi)
        x_new = np.where(bad, 0.5 * (lo + hi), x_new)
        tol = rtol * np.maximum(np.abs(x_new), 1e-300)
        done = (np.abs(x_new - x) <= tol) | (hi - lo <= tol)
        x = x_new
        if np.all(done):
            return x
    raise NoConvergence(f"vector inversion not converged in {maxiter} iterations")
