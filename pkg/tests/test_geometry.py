import numpy as np
import pytest
from numpy.testing import assert_allclose

from verigin import geometry as geo


def test_ball_volume_3d():
    assert_allclose(geo.ball_volume(3, 1.0), 4.0 * np.pi / 3.0, rtol=1e-14)


def test_ball_volume_2d():
    assert_allclose(geo.ball_volume(2, 2.0), 4.0 * np.pi, rtol=1e-14)


def test_ball_volume_4d_against_slab_integral():
    # recursive slab integral: V_4(1) = int_{-1}^{1} V_3(sqrt(1-t^2)) dt
    t = np.linspace(-1.0, 1.0, 20001)
    v3 = geo.ball_volume(3, 1.0) * (1.0 - t**2) ** 1.5
    ref = np.trapezoid(v3, t)
    assert_allclose(geo.ball_volume(4, 1.0), np.pi**2 / 2.0, rtol=1e-12)
    assert_allclose(geo.ball_volume(4, 1.0), ref, rtol=1e-6)


@pytest.mark.parametrize("n,R,expected", [(3, 1.0, 4.0 * np.pi),
                                          (2, 1.0, 2.0 * np.pi),
                                          (3, 2.0, 16.0 * np.pi)])
def test_sphere_area(n, R, expected):
    assert_allclose(geo.sphere_area(n, R), expected, rtol=1e-14)


def test_area_is_volume_derivative():
    for n in (2, 3, 4):
        for R in (0.5, 1.0, 2.3):
            h = 1e-6 * R
            dv = (geo.ball_volume(n, R + h) - geo.ball_volume(n, R - h)) / (2 * h)
            assert abs(dv - geo.sphere_area(n, R)) < 1e-8 * geo.sphere_area(n, R)


@pytest.mark.parametrize("n,R,sigma,expected", [(2, 1.0, 1.0, -1.0),
                                                (3, 2.0, 1.0, -1.0),
                                                (3, 1.0, 0.0, 0.0)])
def test_mean_curvature_jump(n, R, sigma, expected):
    assert_allclose(geo.mean_curvature_jump(n, R, sigma), expected, rtol=1e-14)


def test_curvature_eigenvalue_translations():
    value, mult = geo.curvature_op_eigenvalue(3, 1.0, 1)
    assert value == 0.0
    assert mult == 3


def test_curvature_eigenvalue_constant_mode():
    value, mult = geo.curvature_op_eigenvalue(3, 1.0, 0)
    assert_allclose(value, -2.0)
    assert mult == 1


def test_curvature_eigenvalue_degree_two():
    value, mult = geo.curvature_op_eigenvalue(3, 1.0, 2)
    assert_allclose(value, 4.0)
    assert mult == 5


def test_curvature_increasing_in_degree():
    for n in (2, 3, 4):
        values = [geo.curvature_op_eigenvalue(n, 1.3, l)[0] for l in range(7)]
        assert np.all(np.diff(values) > 0.0)
        assert values[0] < 0.0
        assert all(v >= 0.0 for v in values[1:])


def test_harmonic_multiplicities():
    assert [geo.harmonic_multiplicity(2, l) for l in range(4)] == [1, 2, 2, 2]
    assert [geo.harmonic_multiplicity(3, l) for l in range(4)] == [1, 3, 5, 7]
    assert [geo.harmonic_multiplicity(4, l) for l in range(3)] == [1, 4, 9]


def test_radial_geometry_components():
    g = geo.RadialGeometry(n=3, R_out=2.0, radii=(0.5, 1.0))
    assert g.n_components == 3
    assert g.component_bounds() == [(0.0, 0.5), (0.5, 1.0), (1.0, 2.0)]
    vols = g.component_volumes()
    assert_allclose(sum(vols), geo.ball_volume(3, 2.0), rtol=1e-14)
    assert [g.phase_of_component(s) for s in range(3)] == [1, 2, 1]


def test_radial_geometry_rejects_bad_ordering():
    with pytest.raises(ValueError):
        geo.RadialGeometry(n=3, R_out=2.0, radii=(1.0, 0.5))
    with pytest.raises(ValueError):
        geo.RadialGeometry(n=3, R_out=1.0, radii=(1.0,))


def test_radial_adjacency():
    g = geo.RadialGeometry(n=3, R_out=2.0, radii=(0.5, 1.0))
    delta = g.adjacency()
    assert delta.tolist() == [[1, 1, 0], [0, 1, 1]]


def test_droplet_geometry():
    g = geo.DropletGeometry(n=3, R_out=2.0, radius=0.5, m=2)
    vols = g.component_volumes()
    assert_allclose(sum(vols), geo.ball_volume(3, 2.0), rtol=1e-14)
    assert [g.phase_of_component(s) for s in range(3)] == [1, 1, 2]
    assert g.adjacency().tolist() == [[1, 0, 1], [0, 1, 1]]
    # bath cells partition the bath volume
    cell = g.cell_radius()
    assert_allclose(2 * (geo.ball_volume(3, cell) - geo.ball_volume(3, 0.5)),
                    vols[2], rtol=1e-12)
