"""Calibration form, boundary densities, Stokes balance and growth scans.

For a graph with mean curvature ``H > 0`` the unit field ``e_H = Hvec / H``
defines the m-form

    Phi = (m-1)! sum_i d(a_1,z) ^ .. ^ d(a_i,e_H) ^ .. ^ d(a_m,z)

whose value on an oriented orthonormal tangent frame is ``m! H *Omega``,
and ``Phi = (m-1)! d alpha`` for the (m-1)-form

    alpha = sum_i (-1)^(i-1) (a_i, e_H) d(a_1,z) ^ .. (omit i) .. ^ d(a_m,z).

Integrating over the graph of a ball ``D_r`` gives the balance
``m H int (*Omega) dV = int_boundary alpha``. The boundary quantities
``P``, ``Q`` and ``R`` are the densities of the projected boundary volume,
the graph boundary volume and ``alpha`` relative to the sphere-chart form
``Psi = +-dtheta_1 ^ .. ^ dtheta_{m-1}`` (sign fixed so that ``Psi`` is
positive on the outward-oriented boundary).
"""

from dataclasses import dataclass, field
from math import factorial
from typing import List, Optional

import numpy as np

from .errors import (
    ChartError,
    InputError,
    MeanCurvatureDegenerateError,
    NotSpaceLikeError,
)
from .geometry import (
    SurfaceDef,
    directional_derivative,
    field_step,
    gram,
    mean_curvature_scalar,
    point_geometry,
    unit_mean_curvature_normal,
)
from .quadrature import ball_rule, ball_volume, chart, sphere_area, sphere_grid, sphere_rule

H_MIN = 1e-8
H_SPREAD_TOL = 1e-4


def _e_H(f: SurfaceDef, x, h_min=H_MIN):
    e, H, pg = unit_mean_curvature_normal(f, x, h_min)
    if e is None:
        raise MeanCurvatureDegenerateError(
            f"{f.name}: H = {H:.3g} <= {h_min:g} at x={np.asarray(x).tolist()}; e_H is undefined"
        )
    return e, H, pg


def calibration_value(f: SurfaceDef, x, basis=None, h_min: float = H_MIN):
    """``Phi(e_1, .., e_m)`` evaluated from the definition, and ``m! H *Omega``.

    ``basis`` is an oriented orthonormal basis of ``R^m`` (columns) playing
    the role of ``a_i``; defaults to the standard basis. ``d(a_i, e_H)`` is
    obtained by differentiating the ``e_H`` field along each frame vector.
    """
    x = np.asarray(x, dtype=float)
    e_H, H, pg = _e_H(f, x, h_min)
    m = pg.m
    A = np.eye(m) if basis is None else np.asarray(basis, dtype=float)
    if A.shape != (m, m) or not np.allclose(A.T @ A, np.eye(m), atol=1e-12):
        raise InputError("basis must be an orthonormal m x m matrix")
    if np.linalg.det(A) < 0:
        raise InputError("basis must be positively oriented")

    step = field_step(f, x)
    exact = f.hess is not None
    dz = A.T @ pg.e_tan[:m, :]  # (a_k, dz(e_j)); a_k has no time-like part
    de = np.empty((m, m))
    for j in range(m):
        t = step / np.linalg.norm(pg.T[:, j])
        d = t * pg.T[:, j]
        de_j = directional_derivative(lambda y: _e_H(f, y, h_min)[0], x, d, exact) / t
        de[:, j] = A.T @ de_j[:m]

    phi = 0.0
    for i in range(m):
        M = dz.copy()
        M[i, :] = de[i, :]
        phi += np.linalg.det(M)
    phi *= factorial(m - 1)
    return float(phi), factorial(m) * H * pg.star_omega


def lemma1_residual(f: SurfaceDef, x, basis=None, h_min: float = H_MIN) -> float:
    """Relative gap between ``Phi(e_1..e_m)`` and ``m! H *Omega`` at ``x``.

    Raises ``MeanCurvatureDegenerateError`` when ``H <= h_min``.
    """
    phi, expected = calibration_value(f, x, basis=basis, h_min=h_min)
    return abs(phi - expected) / expected


@dataclass
class BoundaryPoint:
    r: float
    theta: np.ndarray
    x: np.ndarray
    eta: np.ndarray  # (m, m) columns; last one is the outward normal x / r
    tangents: np.ndarray  # (m+n, m) columns xi_i = (eta_i, df(eta_i))
    chart_jacobian: np.ndarray  # (m, m-1) d x / d theta
    orientation: float  # +1 if (x/r, dx/dtheta) is positively oriented


def boundary_point(f: SurfaceDef, r: float, theta) -> BoundaryPoint:
    """Point of ``dD_r`` at chart angles ``theta`` with its adapted bases."""
    m = f.m
    if m < 2:
        raise InputError("boundary quantities need m >= 2")
    if not r > 0:
        raise InputError(f"radius must be positive, got {r}")
    theta = np.atleast_1d(np.asarray(theta, dtype=float))
    if theta.shape != (m - 1,):
        raise InputError(f"expected {m - 1} chart angles, got {theta.shape}")
    x, X = chart(theta, r)
    sv = np.linalg.svd(X, compute_uv=False)
    if sv[-1] < 1e-12 * r:
        raise ChartError(f"sphere chart is singular at theta={theta.tolist()}; avoid the poles")
    normal = x / r
    Q, _ = np.linalg.qr(X)
    eta = np.column_stack([Q, normal])
    orientation = float(np.sign(np.linalg.det(np.column_stack([normal, X]))))
    J = point_geometry(f, x).J
    tangents = np.vstack([eta, J @ eta])
    return BoundaryPoint(r, theta, x, eta, tangents, X, orientation)


@dataclass
class BoundaryQuantities:
    P: float
    Q: float
    R: Optional[float]
    p: np.ndarray  # p[i] = minor omitting frame index i (0-based)
    xi: Optional[np.ndarray]  # (e_H, e_{m+k}), k = 1..n
    star_omega: float
    lambdas: np.ndarray
    H: float
    radial_slope: float  # |df(eta_m)|_E
    R_direct: Optional[float] = None
    q_minor_residual: float = 0.0  # |Q^2 - sum p^2| / max(Q^2, tiny)
    normal_source: Optional[str] = None  # "mean-curvature" or "unit-normal"


def boundary_quantities(
    f: SurfaceDef, bp: BoundaryPoint, alpha: bool = True, h_min: float = H_MIN
) -> BoundaryQuantities:
    """``P``, ``Q``, ``R`` and the ``p`` minors at a boundary point.

    ``R`` comes from the frame formula
    ``R = *Omega sum_i (-1)^i lambda_i xi_{m+i} p_{1..^i..m}``; ``R_direct``
    is ``alpha`` evaluated on the chart tangents in the standard basis, an
    independent route to the same number.

    The field ``e_H`` needs ``H > h_min``. For hypersurfaces (n = 1) the
    unit normal is determined up to sign without it, so below ``h_min`` the
    future-directed unit normal is used and ``normal_source`` says so. For
    n > 1 a degenerate ``H`` raises ``MeanCurvatureDegenerateError`` unless
    ``alpha`` is false, in which case ``R`` and ``xi`` are ``None``.
    """
    m = f.m
    pg = point_geometry(f, bp.x)
    X = bp.chart_jacobian
    t = np.vstack([X, pg.J @ X])

    eta = np.concatenate([np.ones(m), -np.ones(f.n)])
    W = pg.e_tan.T @ (eta[:, None] * t)  # W[k, j] = (t_j, e_k)
    p = np.array([bp.orientation * np.linalg.det(np.delete(W, i, axis=0)) for i in range(m)])
    Q2 = float(np.linalg.det(gram(t, m)))
    Q = float(np.sqrt(max(Q2, 0.0)))
    P = float(np.sqrt(np.linalg.det(X.T @ X)))
    q_res = abs(Q2 - float(p @ p)) / max(Q2, np.finfo(float).tiny)
    radial = float(np.linalg.norm(pg.J @ (bp.x / bp.r)))

    R = R_direct = xi = None
    source = None
    H = mean_curvature_scalar(f, bp.x)
    if alpha:
        if H > h_min:
            e_H, H, _ = _e_H(f, bp.x, h_min)
            source = "mean-curvature"
        elif f.n == 1:
            e_H = pg.e_nor[:, 0] * np.sign(pg.e_nor[m, 0])
            source = "unit-normal"
        else:
            raise MeanCurvatureDegenerateError(
                f"{f.name}: H = {H:.3g} <= {h_min:g} at x={bp.x.tolist()}; alpha is undefined"
            )
        xi = np.concatenate([e_H[:m], -e_H[m:]]) @ pg.e_nor
        k = min(m, f.n)
        signs = (-1.0) ** np.arange(1, k + 1)
        R = float(pg.star_omega * np.sum(signs * pg.lambdas[:k] * xi[:k] * p[:k]))
        R_direct = float(bp.orientation * np.linalg.det(np.column_stack([e_H[:m], X])))

    return BoundaryQuantities(
        P=P,
        Q=Q,
        R=R,
        p=p,
        xi=xi,
        star_omega=pg.star_omega,
        lambdas=pg.lambdas,
        H=H,
        radial_slope=radial,
        R_direct=R_direct,
        q_minor_residual=q_res,
        normal_source=source,
    )


@dataclass
class StokesReport:
    r: float
    lhs: float
    rhs: float
    rel_residual: float
    n_interior: int
    n_boundary: int
    lhs_direct: float = 0.0
    h_mean: float = 0.0
    h_spread: float = 0.0
    volume_ratio: float = 1.0
    warnings: List[str] = field(default_factory=list)


def _interior_samples(f: SurfaceDef, r: float, n_int: int):
    pts, w = ball_rule(f.m, r, n_int)
    H = np.empty(len(w))
    so = np.empty(len(w))
    dvol = np.empty(len(w))
    m = f.m
    for k, x in enumerate(pts):
        pg = point_geometry(f, x)
        so[k] = pg.star_omega
        # dV_M / dx from the Minkowski Gram matrix of the coordinate tangents
        dz = np.vstack([np.eye(m), pg.J])
        dvol[k] = np.sqrt(np.linalg.det(gram(dz, m)))
        H[k] = mean_curvature_scalar(f, x)
    return pts, w, H, so, dvol


def volume_identity(f: SurfaceDef, r: float, n_int: int = 32) -> float:
    """``int_{M_r} (*Omega) dV_M / Vol(D_r)``; equal to 1 for every space-like graph."""
    pts, w = ball_rule(f.m, r, n_int)
    m = f.m
    total = 0.0
    for x, wk in zip(pts, w):
        pg = point_geometry(f, x)
        dz = np.vstack([np.eye(m), pg.J])
        total += wk * pg.star_omega * np.sqrt(np.linalg.det(gram(dz, m)))
    return total / ball_volume(m, r)


def stokes_check(
    f: SurfaceDef, r: float, n_int: int = 64, n_bd: int = 512, h_min: float = H_MIN
) -> StokesReport:
    """Compare ``m H int_{M_r} (*Omega) dV`` with ``int_{dM_r} alpha``.

    ``n_int`` is the number of nodes per interior axis and ``n_bd`` the
    azimuthal resolution of the boundary rule.
    """
    m = f.m
    if m not in (2, 3):
        raise InputError(f"stokes_check supports m in {{2, 3}}, got {m}")
    if not r > 0:
        raise InputError(f"radius must be positive, got {r}")
    pts, w, H, so, dvol = _interior_samples(f, r, n_int)
    if H.min() <= h_min:
        k = int(np.argmin(H))
        raise MeanCurvatureDegenerateError(
            f"{f.name}: H = {H[k]:.3g} <= {h_min:g} at x={pts[k].tolist()}"
        )
    vol = ball_volume(m, r)
    h_mean = float(w @ H / w.sum())
    spread = float((H.max() - H.min()) / h_mean)
    lhs = m * h_mean * vol
    lhs_direct = float(m * np.sum(w * H * so * dvol))
    volume_ratio = float(np.sum(w * so * dvol) / vol)

    angles, wb = sphere_rule(m, n_bd)
    rhs = 0.0
    for th, wk in zip(angles, wb):
        bq = boundary_quantities(f, boundary_point(f, r, th), h_min=h_min)
        rhs += wk * bq.R
    rhs = float(rhs)

    warnings = []
    if spread > H_SPREAD_TOL:
        warnings.append(
            f"hypothesis-violation: H varies by {spread:.3g} (relative) over D_r; "
            "mean curvature is not parallel"
        )
    rel = abs(lhs - rhs) / max(abs(lhs), abs(rhs))
    return StokesReport(
        r=r,
        lhs=lhs,
        rhs=rhs,
        rel_residual=rel,
        n_interior=n_int,
        n_boundary=n_bd,
        lhs_direct=lhs_direct,
        h_mean=h_mean,
        h_spread=spread,
        volume_ratio=volume_ratio,
        warnings=warnings,
    )


@dataclass
class ScanRecord:
    r: float
    sup_star_omega: float  # sampled sup
    sup_ratio: float  # sup / r
    h_bound: float  # sup * Vol(dD_r) / (m Vol(D_r))
    h_bound_isoperimetric: float  # sup / r via Vol(dD_r) / (m Vol(D_r)) = 1/r
    radial_slope_sup: float  # sampled sup of |df(eta_m)| *Omega
    radial_slope_ratio: float
    h_measured_min: Optional[float]
    h_measured_max: Optional[float]
    failures: List[dict] = field(default_factory=list)


@dataclass
class ScanReport:
    surface: str
    samples_per_sphere: int
    records: List[ScanRecord]


def growth_scan(
    f: SurfaceDef, radii, samples_per_sphere: int = 64, h_samples: int = 16
) -> ScanReport:
    """Sampled sups of ``*Omega`` and ``|df(eta_m)| *Omega`` over spheres.

    For each radius the bound ``sup(*Omega) Vol(dD_r) / (m Vol(D_r))`` is
    reported next to ``H`` measured at up to ``h_samples`` sphere points.
    Points where the graph fails to be space-like are listed per radius
    instead of aborting the scan.
    """
    radii = [float(r) for r in radii]
    if not radii or any(r <= 0 for r in radii):
        raise InputError("radii must be positive")
    if any(b <= a for a, b in zip(radii, radii[1:])):
        raise InputError("radii must be strictly increasing")
    m = f.m
    if m < 2:
        raise InputError("growth_scan needs m >= 2")
    grid = sphere_grid(m, samples_per_sphere)
    h_every = max(1, len(grid) // max(h_samples, 1))

    records = []
    for r in radii:
        sup_so = 0.0
        sup_slope = 0.0
        hs = []
        failures = []
        for k, th in enumerate(grid):
            x, _ = chart(th, r)
            try:
                pg = point_geometry(f, x)
            except NotSpaceLikeError as exc:
                failures.append({"x": x.tolist(), "min_eigenvalue": exc.min_eigenvalue})
                continue
            sup_so = max(sup_so, pg.star_omega)
            sup_slope = max(sup_slope, float(np.linalg.norm(pg.J @ (x / r))) * pg.star_omega)
            if k % h_every == 0:
                hs.append(mean_curvature_scalar(f, x))
        area = sphere_area(m, r)
        vol = ball_volume(m, r)
        records.append(
            ScanRecord(
                r=r,
                sup_star_omega=sup_so,
                sup_ratio=sup_so / r,
                h_bound=sup_so * area / (m * vol),
                h_bound_isoperimetric=sup_so / r,
                radial_slope_sup=sup_slope,
                radial_slope_ratio=sup_slope / r,
                h_measured_min=min(hs) if hs else None,
                h_measured_max=max(hs) if hs else None,
                failures=failures,
            )
        )
    return ScanReport(f.name, samples_per_sphere, records)
