import numpy as np
import pytest
from numpy.testing import assert_allclose

from verigin import mobility


def test_constant_drag_reduces_to_darcy():
    law = mobility.forchheimer(l=lambda pi: 2.0, g=lambda v: 1.0)
    for s in [0.0, 0.3, 1.0, 7.5]:
        assert_allclose(mobility.effective_permeability(law, 0.0, s), 2.0, rtol=1e-12)


def test_linear_drag_golden_ratio():
    law = mobility.forchheimer_linear(l0=1.0, gamma=1.0)
    k = mobility.effective_permeability(law, 0.0, 1.0)
    assert_allclose(k, (np.sqrt(5.0) - 1.0) / 2.0, rtol=1e-10)


def test_linear_drag_against_bisection_oracle():
    law = mobility.forchheimer_linear(l0=1.0, gamma=1.0)
    s = 2.7
    target = np.sqrt(s)
    lo, hi = 0.0, 10.0
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if mid * (1.0 + mid) > target:
            hi = mid
        else:
            lo = mid
    w = 0.5 * (lo + hi)
    assert_allclose(mobility.effective_permeability(law, 0.0, s), w / np.sqrt(s),
                    rtol=1e-10)


def test_darcy_passthrough():
    law = mobility.darcy(lambda pi, s: 1.0 + s)
    assert_allclose(mobility.effective_permeability(law, 0.0, 3.0), 4.0, rtol=1e-14)


def test_velocity_zero_gradient():
    law = mobility.darcy_const(2.0)
    assert_allclose(mobility.velocity(law, 0.0, np.zeros(2)), np.zeros(2))


def test_velocity_darcy():
    law = mobility.darcy_const(2.0)
    assert_allclose(mobility.velocity(law, 0.0, np.array([1.0, 0.0])),
                    np.array([-2.0, 0.0]))


def test_velocity_forchheimer():
    law = mobility.forchheimer_linear(l0=1.0, gamma=1.0)
    u = mobility.velocity(law, 0.0, np.array([1.0, 0.0]))
    assert_allclose(u, np.array([-(np.sqrt(5.0) - 1.0) / 2.0, 0.0]), rtol=1e-10)


def test_back_substitution_residual():
    rng = np.random.default_rng(7)
    for _ in range(100):
        l0 = rng.uniform(0.2, 5.0)
        law = mobility.forchheimer(l=lambda pi, _l=l0: _l, g=lambda v: 1.0 + v)
        grad = rng.uniform(-3.0, 3.0, size=3)
        if np.linalg.norm(grad) < 1e-3:
            continue
        u = mobility.velocity(law, 0.0, grad)
        lhs = (1.0 + np.linalg.norm(u)) * u
        rhs = -l0 * grad
        assert np.linalg.norm(lhs - rhs) < 1e-10 * np.linalg.norm(rhs)


def test_darcy_limit_of_forchheimer():
    # g -> const 1 uniformly reproduces Darcy with k = l
    law = mobility.forchheimer(l=lambda pi: 1.7, g=lambda v: 1.0)
    for s in np.linspace(0.0, 20.0, 9):
        assert_allclose(mobility.effective_permeability(law, 0.0, s), 1.7, rtol=1e-12)


def test_validate_const_passes():
    report = mobility.validate_ellipticity(mobility.darcy_const(1.0),
                                           (-1.0, 1.0), (0.0, 2.0))
    assert report.passed


def test_validate_decreasing_k_fails():
    law = mobility.darcy(lambda pi, s: 1.0 - s, lambda pi, s: -1.0)
    report = mobility.validate_ellipticity(law, (-1.0, 1.0), (0.0, 2.0))
    assert not report.passed


def test_validate_forchheimer_linear_passes():
    report = mobility.validate_ellipticity(mobility.forchheimer_linear(1.0),
                                           (-1.0, 1.0), (0.0, 10.0))
    assert report.passed
    assert report.metrics["min_k"] > 0.0


def test_effective_k_positive_and_elliptic_samples():
    law = mobility.forchheimer_linear(l0=2.0, gamma=0.5)
    for s in np.linspace(0.0, 10.0, 13):
        k = mobility.effective_permeability(law, 0.0, s)
        assert k > 0.0
        assert k + 2.0 * s * mobility.effective_dk_ds(law, 0.0, s) > 0.0
