import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from spacelike import InputError, NotSpaceLikeError, EvaluationError
from spacelike.geometry import (
    Signature,
    SurfaceDef,
    curvature,
    derivatives,
    frame_from_jacobian,
    gram,
    mean_curvature_vector,
    minkowski_inner,
    point_geometry,
    unit_mean_curvature_normal,
)
from spacelike.surfaces import cylinder, hyperboloid, plane, polynomial, radial, without_derivatives

import oracles


def eta(m, n):
    return np.diag(np.concatenate([np.ones(m), -np.ones(n)]))


def contraction(seed, m, n, norm):
    """Random n x m matrix with operator norm ``norm``."""
    A = np.random.default_rng(seed).normal(size=(n, m))
    return A * (norm / np.linalg.norm(A, 2))


# -- inner product ---------------------------------------------------------


def test_minkowski_inner_basis_vectors():
    sig = Signature(2, 1)
    assert minkowski_inner([1, 0, 0], [1, 0, 0], sig) == 1.0
    assert minkowski_inner([0, 0, 1], [0, 0, 1], sig) == -1.0
    assert minkowski_inner([1, 1], [1, 1], Signature(1, 1)) == 0.0


@pytest.mark.parametrize("m,n", [(0, 1), (2, 0), (1.5, 1)])
def test_signature_rejects_bad_dimensions(m, n):
    with pytest.raises(InputError):
        Signature(m, n)


# -- derivatives -----------------------------------------------------------


def test_linear_map_derivatives():
    J, H = derivatives(plane([[0.5, 0.0]]), np.array([0.3, -2.0]))
    np.testing.assert_array_equal(J, [[0.5, 0.0]])
    np.testing.assert_array_equal(H, np.zeros((1, 2, 2)))


def test_constant_map_derivatives_by_finite_differences():
    f = SurfaceDef(Signature(2, 1), lambda x: np.array([3.0]))
    J, H = derivatives(f, np.array([1.0, 2.0]))
    np.testing.assert_allclose(J, 0, atol=1e-12)
    np.testing.assert_allclose(H, 0, atol=1e-12)


def test_hyperboloid_derivatives_by_hand():
    x = np.array([1.0, 0.0])
    J, H = derivatives(hyperboloid(2), x)
    np.testing.assert_allclose(J, [[1 / np.sqrt(2), 0.0]], atol=1e-15)
    expected = (np.eye(2) - np.outer(x, x) / 2) / np.sqrt(2)
    np.testing.assert_allclose(H[0], expected, atol=1e-15)


@pytest.mark.parametrize("f", [hyperboloid(3, 2.0), radial([0.0, 0.2, -0.03], 2), cylinder(2)])
def test_exact_hessian_matches_differenced_jacobian(f, rng):
    for x in rng.uniform(-1, 1, size=(5, f.m)):
        fd = oracles.central_gradient(f.jac, x)  # (m, n, m)
        np.testing.assert_allclose(np.moveaxis(fd, 0, -1), f.hess(x), atol=1e-8)


def test_finite_difference_derivatives_match_exact(rng):
    f = hyperboloid(3)
    g = without_derivatives(f)
    for x in rng.uniform(-2, 2, size=(5, 3)):
        J, H = derivatives(f, x)
        Jd, Hd = derivatives(g, x)
        np.testing.assert_allclose(Jd, J, atol=1e-9)
        np.testing.assert_allclose(Hd, H, atol=1e-6)
        np.testing.assert_array_equal(Hd, np.swapaxes(Hd, 1, 2))


def test_non_finite_values_raise():
    f = SurfaceDef(Signature(1, 1), lambda x: np.array([np.nan if x[0] < 0 else np.log(x[0])]))
    with pytest.raises(EvaluationError):
        point_geometry(f, np.array([-1.0]))


def test_wrong_output_shape_raises():
    f = SurfaceDef(Signature(2, 1), lambda x: np.array([1.0, 2.0]))
    with pytest.raises(InputError):
        f(np.zeros(2))


# -- frame and *Omega --------------------------------------------------------


def test_flat_graph_frame():
    pg = point_geometry(plane([[0.0, 0.0]]), np.array([4.0, -1.0]))
    np.testing.assert_allclose(pg.lambdas, 0)
    assert pg.star_omega == 1.0
    np.testing.assert_allclose(pg.e_tan[2:], 0)
    np.testing.assert_allclose(pg.e_nor[:2], 0)


def test_hyperboloid_star_omega_closed_form(rng):
    f = hyperboloid(2)
    for x in rng.uniform(-5, 5, size=(20, 2)):
        assert point_geometry(f, x).star_omega == pytest.approx(np.sqrt(1 + x @ x), rel=1e-12)


def test_codimension_two_singular_values():
    pg = frame_from_jacobian(np.diag([0.6, 0.8]))
    np.testing.assert_allclose(sorted(pg.lambdas), [0.6, 0.8])
    assert pg.star_omega == pytest.approx(1 / np.sqrt(0.64 * 0.36), rel=1e-14)
    assert pg.star_omega == pytest.approx(2.0833333333333, rel=1e-12)


@settings(max_examples=200, deadline=None)
@given(
    seed=st.integers(0, 2**32 - 1),
    m=st.integers(1, 4),
    n=st.integers(1, 3),
    norm=st.floats(0.0, 0.95),
)
def test_frame_invariants_for_random_contractions(seed, m, n, norm):
    J = contraction(seed, m, n, norm)
    pg = frame_from_jacobian(J)
    so = pg.star_omega
    assert abs(so - pg.star_omega_det) < 1e-10 * so
    assert abs(so - 1 / np.sqrt(np.linalg.det(np.eye(m) - J.T @ J))) < 1e-10 * so
    assert so >= 1.0
    if norm == 0.0:
        assert so == 1.0
    assert np.max(np.abs(gram(pg.frame, m) - eta(m, n))) < 1e-10
    assert np.linalg.det(pg.a_tan) == pytest.approx(1.0, abs=1e-12)
    for i in range(m):
        lam = pg.lambdas[i] if i < min(m, n) else 0.0
        target = lam * pg.a_nor[:, i] if i < n else np.zeros(n)
        assert np.max(np.abs(J @ pg.a_tan[:, i] - target)) < 1e-10


@settings(max_examples=50, deadline=None)
@given(seed=st.integers(0, 2**32 - 1), m=st.integers(1, 3), n=st.integers(1, 3))
def test_tangent_frame_spans_coordinate_tangents(seed, m, n):
    J = contraction(seed, m, n, 0.9)
    pg = frame_from_jacobian(J)
    dz = np.vstack([np.eye(m), J])
    np.testing.assert_allclose(dz @ pg.T, pg.e_tan, atol=1e-12)


def test_star_omega_is_one_only_for_flat_slope():
    assert frame_from_jacobian(np.zeros((1, 3))).star_omega == 1.0
    assert frame_from_jacobian(np.array([[1e-4, 0, 0]])).star_omega > 1.0


def test_not_space_like_reports_eigenvalue():
    with pytest.raises(NotSpaceLikeError) as info:
        point_geometry(plane([[1.2, 0.0]]), np.zeros(2))
    assert info.value.min_eigenvalue == pytest.approx(1 - 1.44)
    assert info.value.kind == "not-space-like"


def test_light_like_plane_is_rejected():
    with pytest.raises(NotSpaceLikeError) as info:
        point_geometry(plane([[0.6, 0.8]]), np.zeros(2))
    assert info.value.min_eigenvalue <= 1e-12


# -- curvature ----------------------------------------------------------------


def test_plane_is_flat():
    cd = curvature(plane([[0.3, 0.1], [0.0, -0.5]]), np.array([1.0, 2.0]))
    np.testing.assert_array_equal(cd.h, 0)
    assert cd.Hscalar == 0.0
    assert cd.parallel_residual < 1e-12


@pytest.mark.parametrize("m", [2, 3])
@pytest.mark.parametrize("R", [1.0, 2.0])
def test_hyperboloid_mean_curvature_vector_is_position(m, R, rng):
    f = hyperboloid(m, R)
    for x in rng.uniform(-2, 2, size=(5, m)):
        z = f.embed(x)
        np.testing.assert_allclose(mean_curvature_vector(f, x), z / R**2, atol=1e-12)
        e_H, H, _ = unit_mean_curvature_normal(f, x, 1e-8)
        assert H == pytest.approx(1 / R, abs=1e-12)
        np.testing.assert_allclose(e_H, z / R, atol=1e-12)


@pytest.mark.parametrize(
    "f",
    [radial([0.0, 0.25, -0.02], 2), radial([1.0, 0.1, 0.01], 3), cylinder(3, 0.7)],
    ids=lambda f: f.name,
)
def test_mean_curvature_matches_divergence_form(f, rng):
    for x in rng.uniform(-0.8, 0.8, size=(6, f.m)):
        expected = abs(oracles.graph_mean_curvature(lambda y: f.jac(y)[0], x))
        assert curvature(f, x, parallel=False).Hscalar == pytest.approx(expected, abs=1e-8)


def test_polynomial_mean_curvature_matches_divergence_form(rng):
    f = polynomial([[(0.2, [2, 0]), (0.15, [0, 2]), (0.05, [1, 1]), (0.03, [3, 0])]], 2)
    for x in rng.uniform(-1, 1, size=(6, 2)):
        expected = abs(oracles.graph_mean_curvature(lambda y: f.jac(y)[0], x))
        assert curvature(f, x, parallel=False).Hscalar == pytest.approx(expected, abs=1e-8)


def test_second_fundamental_form_is_symmetric(rng):
    for f, tol in ((hyperboloid(3), 1e-10), (without_derivatives(hyperboloid(3)), 1e-6)):
        for x in rng.uniform(-1, 1, size=(4, 3)):
            h = curvature(f, x, parallel=False).h
            assert np.max(np.abs(h - np.swapaxes(h, 1, 2))) < tol


def test_parallel_residual_separates_cmc_from_non_cmc():
    x = np.array([0.4, -0.3])
    assert curvature(cylinder(2), x).parallel_residual < 1e-8
    # for hypersurfaces the residual is |grad H|, which is far from zero here
    assert curvature(radial([0.0, 0.3, -0.1], 2), x).parallel_residual > 1e-2


def test_codimension_two_product_with_constant():
    def f(x):
        return np.array([np.sqrt(1 + x @ x), 0.7])

    surf = SurfaceDef(Signature(2, 2), f, name="hyperboloid x point")
    cd = curvature(surf, np.array([0.3, -0.5]))
    assert cd.Hscalar == pytest.approx(1.0, abs=1e-6)
    assert cd.parallel_residual < 1e-5


@settings(max_examples=25, deadline=None)
@given(
    cx=st.floats(-3, 3), cy=st.floats(-3, 3), px=st.floats(-3, 3), py=st.floats(-3, 3),
)
def test_mean_curvature_is_translation_invariant(cx, cy, px, py):
    f = hyperboloid(2, 1.5, center=[cx, cy])
    assert curvature(f, np.array([px, py]), parallel=False).Hscalar == pytest.approx(1 / 1.5, abs=1e-10)
