import dataclasses
from math import pi

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from spacelike import ChartError, InputError, MeanCurvatureDegenerateError
from spacelike.calibration import (
    boundary_point,
    boundary_quantities,
    calibration_value,
    growth_scan,
    lemma1_residual,
    stokes_check,
    volume_identity,
)
from spacelike.geometry import Signature, SurfaceDef, point_geometry
from spacelike.quadrature import chart
from spacelike.suite import random_sphere_angles, random_spacelike_graph
from spacelike.surfaces import cylinder, hyperboloid, plane, polynomial, radial

import oracles


def rotation(rng, m):
    Q, _ = np.linalg.qr(rng.normal(size=(m, m)))
    if np.linalg.det(Q) < 0:
        Q[:, 0] *= -1
    return Q


# -- calibration form ---------------------------------------------------------


def test_lemma1_at_documented_points():
    assert lemma1_residual(hyperboloid(2), [0.3, -0.4]) < 1e-5
    phi, expected = calibration_value(hyperboloid(3, 2.0), np.zeros(3))
    assert expected == pytest.approx(6 * 0.5)  # 3! H *Omega with H = 1/2, *Omega = 1
    assert phi == pytest.approx(expected, rel=1e-5)


@pytest.mark.parametrize("m", [2, 3])
def test_lemma1_is_basis_independent(m, rng):
    f = hyperboloid(m, 1.3)
    x = rng.uniform(-1, 1, size=m)
    values = [calibration_value(f, x, basis=rotation(rng, m))[0] for _ in range(4)]
    np.testing.assert_allclose(values, values[0], rtol=1e-6)


def test_lemma1_on_cylinder():
    # a constant-H surface that is not totally umbilic
    assert lemma1_residual(cylinder(2, 0.8), [0.2, 0.5]) < 1e-5


def test_lemma1_rejects_bad_bases():
    f = hyperboloid(2)
    with pytest.raises(InputError):
        calibration_value(f, [0.1, 0.2], basis=2 * np.eye(2))
    with pytest.raises(InputError):
        calibration_value(f, [0.1, 0.2], basis=np.diag([1.0, -1.0]))


def test_lemma1_on_plane_is_degenerate():
    with pytest.raises(MeanCurvatureDegenerateError):
        lemma1_residual(plane([[0.5, 0.0]]), [0.0, 0.0])


# -- boundary quantities ----------------------------------------------------------


def test_flat_graph_boundary():
    f = plane([[0.0, 0.0]])
    bq = boundary_quantities(f, boundary_point(f, 1.0, [0.4]))
    assert bq.R == 0.0
    assert bq.P == pytest.approx(1.0) and bq.Q == pytest.approx(1.0)
    assert bq.normal_source == "unit-normal"
    # the frame of a flat graph is any rotation; only the norm of p is fixed
    assert bq.p @ bq.p == pytest.approx(1.0, abs=1e-14)


def test_hyperboloid_boundary_identity_at_documented_point():
    f = hyperboloid(2)
    bq = boundary_quantities(f, boundary_point(f, 1.0, [0.7]))
    lhs = bq.P**2 + bq.R**2
    rhs = (bq.star_omega * bq.Q) ** 2
    assert abs(lhs - rhs) < 1e-8 * rhs


@pytest.mark.parametrize("m", [2, 3])
@pytest.mark.parametrize("r", [0.5, 1.0, 3.0])
def test_hyperboloid_alpha_is_radius_times_area(m, r, rng):
    # e_H = (x, f) so alpha restricts to r dA on the sphere of radius r
    f = hyperboloid(m)
    for _ in range(3):
        bq = boundary_quantities(f, boundary_point(f, r, random_sphere_angles(rng, m)))
        assert bq.R == pytest.approx(r * bq.P, rel=1e-12)
        assert bq.Q == pytest.approx(bq.P, rel=1e-12)


@pytest.mark.parametrize(
    "f,theta",
    [
        (plane([[0.5, 0.0]]), [pi / 3]),
        (hyperboloid(2), [2.1]),
        (polynomial([[(0.3, [2, 0]), (0.1, [1, 1]), (-0.2, [0, 1])]], 2), [0.9]),
        (hyperboloid(3, 2.0), [1.1, 4.0]),
        (plane([[0.3, 0.2, 0.0], [-0.1, 0.4, 0.3]]), [0.8, 5.5]),
    ],
)
def test_densities_match_gram_oracle(f, theta):
    r = 0.9
    bq = boundary_quantities(f, boundary_point(f, r, theta), alpha=f.n == 1)
    P, Q = oracles.boundary_densities(f.jac, f.m, r, theta)
    assert bq.P == pytest.approx(P, rel=1e-8)
    assert bq.Q == pytest.approx(Q, rel=1e-8)
    assert bq.Q <= bq.P * (1 + 1e-12)
    if bq.R is not None:
        assert abs(bq.R) <= bq.star_omega * bq.Q * (1 + 1e-12)


@settings(max_examples=30, deadline=None)
@given(seed=st.integers(0, 2**32 - 1), m=st.sampled_from([2, 3, 4]))
def test_boundary_identities_on_random_graphs(seed, m):
    rng = np.random.default_rng(seed)
    f = random_spacelike_graph(rng, m)
    r = rng.uniform(0.2, 1.0)
    bq = boundary_quantities(f, boundary_point(f, r, random_sphere_angles(rng, m)))
    sQ = bq.star_omega * bq.Q
    assert abs(bq.P**2 + bq.R**2 - sQ**2) < 1e-8 * sQ**2
    assert sQ - abs(bq.R) >= -1e-10
    assert bq.P - bq.Q >= -1e-10
    assert np.sqrt(bq.star_omega**-2 + bq.radial_slope**2) * bq.P - bq.Q >= -1e-10
    assert bq.q_minor_residual < 1e-10
    assert bq.R == pytest.approx(bq.R_direct, rel=1e-10, abs=1e-12)


@settings(max_examples=20, deadline=None)
@given(seed=st.integers(0, 2**32 - 1), m=st.sampled_from([2, 3]))
def test_boundary_densities_scale_with_the_chart(seed, m):
    rng = np.random.default_rng(seed)
    f = random_spacelike_graph(rng, m)
    bp = boundary_point(f, 0.8, random_sphere_angles(rng, m))
    a = boundary_quantities(f, bp)
    # theta -> 2 theta doubles every chart tangent
    b = boundary_quantities(f, dataclasses.replace(bp, chart_jacobian=2 * bp.chart_jacobian))
    k = 2.0 ** (m - 1)
    for name in ("P", "Q", "R", "R_direct"):
        assert getattr(b, name) == pytest.approx(k * getattr(a, name), rel=1e-10, abs=1e-14)
    np.testing.assert_allclose(b.p, k * a.p, rtol=1e-10, atol=1e-14)
    assert b.Q / b.P == pytest.approx(a.Q / a.P, rel=1e-10)
    assert b.R / (b.Q * b.star_omega) == pytest.approx(a.R / (a.Q * a.star_omega), rel=1e-10, abs=1e-14)


def test_codimension_two_boundary(rng):
    def f(x):
        return np.array([np.sqrt(1 + x @ x), 0.2 * x[0]])

    surf = SurfaceDef(Signature(2, 2), f, name="tilted")
    for _ in range(3):
        bq = boundary_quantities(surf, boundary_point(surf, 0.7, random_sphere_angles(rng, 2)))
        assert bq.normal_source == "mean-curvature"
        assert bq.xi @ bq.xi == pytest.approx(1.0, abs=1e-6)
        assert bq.R == pytest.approx(bq.R_direct, rel=1e-6)
        # the sum-of-squares identity is a hypersurface statement; the bound is not
        assert abs(bq.R) <= bq.star_omega * bq.Q


def test_degenerate_codimension_two_boundary():
    f = plane([[0.2, 0.0], [0.0, 0.3]])
    bp = boundary_point(f, 1.0, [0.5])
    with pytest.raises(MeanCurvatureDegenerateError):
        boundary_quantities(f, bp)
    bq = boundary_quantities(f, bp, alpha=False)
    assert bq.R is None and bq.xi is None


def test_boundary_point_errors():
    with pytest.raises(ChartError):
        boundary_point(hyperboloid(3), 1.0, [0.0, 1.0])
    with pytest.raises(InputError):
        boundary_point(hyperboloid(1), 1.0, [])
    with pytest.raises(InputError):
        boundary_point(hyperboloid(2), -1.0, [0.3])
    with pytest.raises(InputError):
        boundary_point(hyperboloid(3), 1.0, [0.3])


# -- Stokes ----------------------------------------------------------------------


@pytest.mark.parametrize("m,r", [(2, 1.0), (3, 0.7)])
def test_stokes_on_hyperboloid(m, r):
    rep = stokes_check(hyperboloid(m), r, 16, 64)
    assert rep.rel_residual < 1e-10
    assert rep.lhs == pytest.approx(m * 1.0 * (pi * r**2 if m == 2 else 4 * pi * r**3 / 3), rel=1e-12)
    assert rep.volume_ratio == pytest.approx(1.0, abs=1e-12)
    assert not rep.warnings


def test_stokes_converges_on_non_cmc_convex_graph():
    f = polynomial([[(0.3, [2, 0]), (0.2, [0, 2]), (0.05, [3, 0]), (0.1, [1, 0])]], 2)
    res = [stokes_check(f, 1.0, n, 4 * n).rel_residual for n in (4, 8, 16, 32)]
    order = np.log2(np.array(res[:-1]) / np.array(res[1:]))
    assert np.all(order >= 2), res
    assert res[-1] < 1e-8


def test_stokes_warns_when_mean_curvature_varies():
    rep = stokes_check(radial([0.0, 0.3, 0.02], 2), 1.0, 8, 32)
    assert any("hypothesis-violation" in w for w in rep.warnings)


def test_stokes_on_plane_is_degenerate():
    with pytest.raises(MeanCurvatureDegenerateError):
        stokes_check(plane([[0.5, 0.0]]), 1.0, 8, 32)


def test_stokes_rejects_bad_input():
    with pytest.raises(InputError):
        stokes_check(hyperboloid(4), 1.0, 4, 8)
    with pytest.raises(InputError):
        stokes_check(hyperboloid(2), 0.0, 4, 8)


@pytest.mark.parametrize(
    "f",
    [
        hyperboloid(2, 0.5),
        plane([[0.4, -0.3], [0.2, 0.5]]),
        plane([[0.2, 0.1, -0.6]]),
        radial([0.0, 0.3, -0.05], 3),
    ],
    ids=lambda f: f"{f.name}-m{f.m}-n{f.n}",
)
def test_volume_identity(f):
    assert volume_identity(f, 1.0, 12) == pytest.approx(1.0, abs=1e-6)


# -- growth scan --------------------------------------------------------------------


def test_growth_scan_on_hyperboloid():
    radii = [1.0, 2.0, 4.0, 8.0, 16.0, 32.0]
    rep = growth_scan(hyperboloid(2), radii, 32, 4)
    for rec in rep.records:
        assert rec.sup_star_omega == pytest.approx(np.sqrt(1 + rec.r**2), rel=1e-12)
        assert rec.h_bound == pytest.approx(rec.h_bound_isoperimetric, rel=1e-12)
        assert rec.h_measured_max == pytest.approx(1.0, abs=1e-10)
        assert rec.h_measured_max <= rec.h_bound
        assert rec.radial_slope_sup == pytest.approx(rec.r, rel=1e-12)
    assert rep.records[-1].sup_ratio == pytest.approx(np.sqrt(1 + 1 / 1024), rel=1e-12)


def test_growth_scan_on_plane():
    rep = growth_scan(plane([[0.48, 0.64]]), [1.0, 32.0], 64, 4)
    for rec in rep.records:
        assert rec.sup_star_omega == pytest.approx(5 / 3, rel=1e-12)
        assert rec.h_measured_max == 0.0


def test_growth_scan_on_cylinder():
    # |df(eta)| *Omega = |x_1| cos(t) / ... peaks at t = 0 where it equals r
    rep = growth_scan(cylinder(2), [1.0, 4.0, 16.0], 64, 4)
    for rec in rep.records:
        assert rec.radial_slope_sup == pytest.approx(rec.r, rel=1e-12)
        assert rec.sup_star_omega == pytest.approx(np.sqrt(1 + rec.r**2), rel=1e-12)


def test_growth_scan_records_non_space_like_points():
    f = polynomial([[(0.5, [2, 0])]], 2)  # slope |x_1| exceeds 1 beyond x_1 = 1
    rep = growth_scan(f, [0.5, 2.0], 16, 4)
    assert not rep.records[0].failures
    assert rep.records[1].failures
    assert all(fl["min_eigenvalue"] <= 0 for fl in rep.records[1].failures)


@pytest.mark.parametrize("radii", [[], [1.0, 1.0], [2.0, 1.0], [-1.0, 1.0]])
def test_growth_scan_validates_radii(radii):
    with pytest.raises(InputError):
        growth_scan(hyperboloid(2), radii)
