"""Fixed tensor-product rules on balls and spheres in R^2 and R^3.

Interior rules are Gauss-Legendre in the radius (and in ``cos`` of the polar
angle for m = 3) times the periodic trapezoid rule in the azimuth. Sphere
rules use the same angular factors. Nodes are returned together with their
hyperspherical chart angles so that callers can evaluate chart-relative
densities.
"""

from math import gamma, pi

import numpy as np

from .errors import InputError


def ball_volume(m: int, r: float) -> float:
    return pi ** (m / 2) * r**m / gamma(m / 2 + 1)


def sphere_area(m: int, r: float) -> float:
    """(m-1)-volume of the sphere of radius ``r`` in ``R^m``."""
    return 2 * pi ** (m / 2) * r ** (m - 1) / gamma(m / 2)


def chart(theta, r: float):
    """Hyperspherical chart of the sphere of radius ``r`` in ``R^m``, m = len(theta) + 1.

    ``x_1 = r cos t_1``, ``x_k = r sin t_1 .. sin t_{k-1} cos t_k``,
    ``x_m = r sin t_1 .. sin t_{m-1}``. Returns the point and the
    ``(m, m-1)`` matrix of partial derivatives in the angles.
    """
    theta = np.atleast_1d(np.asarray(theta, dtype=float))
    k = theta.size
    m = k + 1
    s, c = np.sin(theta), np.cos(theta)
    x = np.empty(m)
    dx = np.zeros((m, k))
    prefix = 1.0
    for i in range(m):
        tail = c[i] if i < k else 1.0
        x[i] = r * prefix * tail
        for j in range(min(i + 1, k)):
            if j < i:
                # d/dt_j of the product sin t_0 .. sin t_{i-1}
                others = np.prod(np.delete(s[:i], j))
                dx[i, j] = r * others * c[j] * tail
            else:
                dx[i, j] = -r * prefix * s[i]
        if i < k:
            prefix *= s[i]
    return x, dx


def _trapezoid(n):
    return np.arange(n) * (2 * pi / n), np.full(n, 2 * pi / n)


def _gauss(n, a, b):
    t, w = np.polynomial.legendre.leggauss(n)
    return 0.5 * (b - a) * t + 0.5 * (b + a), 0.5 * (b - a) * w


def ball_rule(m: int, r: float, n: int):
    """Nodes ``(N, m)`` and weights for ``int_{|x|<r} dx`` with ``n`` points per axis."""
    if n < 1:
        raise InputError("quadrature resolution must be positive")
    rho, wr = _gauss(n, 0.0, r)
    if m == 2:
        th, wt = _trapezoid(n)
        R, TH = np.meshgrid(rho, th, indexing="ij")
        W = np.outer(wr * rho, wt)
        pts = np.stack([R * np.cos(TH), R * np.sin(TH)], axis=-1)
    elif m == 3:
        u, wu = _gauss(n, -1.0, 1.0)
        ph, wp = _trapezoid(2 * n)
        R, Uc, PH = np.meshgrid(rho, u, ph, indexing="ij")
        S = np.sqrt(1 - Uc**2)
        W = np.einsum("i,j,k->ijk", wr * rho**2, wu, wp)
        pts = np.stack([R * Uc, R * S * np.cos(PH), R * S * np.sin(PH)], axis=-1)
    else:
        raise InputError(f"ball quadrature supports m in {{2, 3}}, got {m}")
    return pts.reshape(-1, m), W.ravel()


def sphere_rule(m: int, n: int):
    """Chart angles ``(N, m-1)`` and weights for ``int dtheta`` over the sphere chart.

    Weights integrate a chart-relative density (one already multiplied by the
    chart Jacobian), not a surface-measure density. For m = 3 the polar
    angle is sampled at Gauss-Legendre nodes in its cosine, and the weight
    includes ``1/sin``, so that ``sum w * g(theta) ~ int g dt_1 dt_2``.
    """
    if n < 1:
        raise InputError("quadrature resolution must be positive")
    if m == 2:
        th, wt = _trapezoid(n)
        return th[:, None], wt
    if m == 3:
        u, wu = _gauss(max(n // 2, 1), -1.0, 1.0)
        ph, wp = _trapezoid(n)
        T1, PH = np.meshgrid(np.arccos(u), ph, indexing="ij")
        W = np.outer(wu / np.sqrt(1 - u**2), wp)
        return np.stack([T1, PH], axis=-1).reshape(-1, 2), W.ravel()
    raise InputError(f"sphere quadrature supports m in {{2, 3}}, got {m}")


def sphere_grid(m: int, n: int, pole_offset: float = 1e-3):
    """Uniform chart grid on the sphere for sampled sups, avoiding chart poles."""
    if m == 2:
        return _trapezoid(n)[0][:, None]
    polar = [np.linspace(pole_offset, pi - pole_offset, max(n // 2, 2))] * (m - 2)
    az = [_trapezoid(n)[0]]
    grids = np.meshgrid(*(polar + az), indexing="ij")
    return np.stack(grids, axis=-1).reshape(-1, m - 1)
