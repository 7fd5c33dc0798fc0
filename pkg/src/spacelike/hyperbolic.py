"""Gauss map of a space-like hypersurface and hyperbolic model changes.

The Gauss map of a space-like graph in ``R^{m+1}_1`` takes values in the
hyperboloid ``{(w, w) = -1, w_{m+1} > 0}``. ``h1`` sends the hyperboloid to
the Poincare ball by projection from ``(0, .., 0, -1)``; ``h2`` inverts the
ball onto the upper half-space ``{y_m > 0}``. The horoballs ``{y_m > c}`` of
the half-space give the horoball criterion ``(1 + D_v f) *Omega < 1/c``.
"""

import numpy as np

from .errors import InputError, PoleError, UnsupportedCodimensionError
from .geometry import SurfaceDef, point_geometry

HYPERBOLOID_TOL = 1e-9


def _lorentz(u, v):
    return float(u[:-1] @ v[:-1] - u[-1] * v[-1])


def _require_hypersurface(f: SurfaceDef):
    if f.n != 1:
        raise UnsupportedCodimensionError(
            f"{f.name}: the hyperboloid Gauss map needs n = 1, got n = {f.n}"
        )


def gauss_map(f: SurfaceDef, x) -> np.ndarray:
    """``*Omega (f_{x_1}, .., f_{x_m}, 1)``, a point of the unit hyperboloid."""
    _require_hypersurface(f)
    pg = point_geometry(f, x)
    return pg.star_omega * np.append(pg.J[0], 1.0)


def check_hyperboloid_point(w, tol: float = HYPERBOLOID_TOL) -> np.ndarray:
    w = np.asarray(w, dtype=float)
    if w.ndim != 1 or w.size < 2:
        raise InputError("hyperboloid point must be a vector of length m+1 >= 2")
    q = _lorentz(w, w)
    if abs(q + 1.0) > tol * max(1.0, w[-1] ** 2) or not w[-1] > 0:
        raise InputError(f"not on the future unit hyperboloid: (w,w) = {q:.6g}, w_last = {w[-1]:.6g}")
    return w


def h1(w) -> np.ndarray:
    """Hyperboloid to Poincare ball: ``w[:m] / (1 + w[m])``."""
    w = check_hyperboloid_point(w)
    return w[:-1] / (1.0 + w[-1])


def _h1_raw(w):
    return w[:-1] / (1.0 + w[-1])


def _h2_raw(p):
    p0 = np.zeros_like(p)
    p0[-1] = -1.0
    d = p - p0
    dd = float(d @ d)
    if dd < 1e-28:
        raise PoleError("h2 is singular at p0 = (0, .., 0, -1)")
    y = 2.0 * d / dd
    y[-1] -= 1.0
    return y


def h2(p) -> np.ndarray:
    """Poincare ball to upper half-space: ``2 (p - p0) / |p - p0|^2 - e_m``, ``p0 = -e_m``."""
    p = np.asarray(p, dtype=float)
    if p.ndim != 1 or p.size < 1:
        raise InputError("ball point must be a non-empty vector")
    if not p @ p < 1.0:
        raise InputError(f"ball point must satisfy |p| < 1, got |p| = {np.sqrt(p @ p):.6g}")
    return _h2_raw(p)


def composite_mth(f: SurfaceDef, x):
    """Last coordinate of ``h2(h1(gauss_map(x)))``, by the chain and in closed form.

    The closed form is ``1 / ((1 + f_{x_m}) *Omega)``.
    """
    _require_hypersurface(f)
    pg = point_geometry(f, x)
    w = pg.star_omega * np.append(pg.J[0], 1.0)
    y_numeric = float(h2(h1(w))[-1])
    y_closed = 1.0 / ((1.0 + pg.J[0, -1]) * pg.star_omega)
    return y_numeric, y_closed


def horoball_quantity(f: SurfaceDef, x, direction=None) -> float:
    """``(1 + D_v f) *Omega`` with ``v`` the last axis unless given."""
    _require_hypersurface(f)
    pg = point_geometry(f, x)
    if direction is None:
        slope = pg.J[0, -1]
    else:
        v = np.asarray(direction, dtype=float)
        if v.shape != (f.m,) or abs(np.linalg.norm(v) - 1.0) > 1e-12:
            raise InputError("direction must be a unit vector in R^m")
        slope = float(pg.J[0] @ v)
    return float((1.0 + slope) * pg.star_omega)


def horoball_check(f: SurfaceDef, x, c: float, direction=None) -> bool:
    """True iff the Gauss image at ``x`` lies in the horoball ``{y_m > c}``."""
    if not c > 0:
        raise InputError(f"horoball height must be positive, got {c}")
    return horoball_quantity(f, x, direction) < 1.0 / c


def halfspace_inner(y, u, v) -> float:
    """``y_m^-2 (u . v)``: the upper half-space metric at ``y``."""
    return float(np.dot(u, v) / y[-1] ** 2)


def isometry_residual(w, t1, t2, step: float = 1e-5) -> float:
    """``|g_H(D t1, D t2) - (t1, t2)|`` for ``D`` the differential of ``h2 o h1`` at ``w``.

    The differential is taken by central differences of the ambient formula;
    ``t1`` and ``t2`` must be tangent to the hyperboloid at ``w``.
    """
    w = check_hyperboloid_point(w)
    t1 = np.asarray(t1, dtype=float)
    t2 = np.asarray(t2, dtype=float)
    for t in (t1, t2):
        if t.shape != w.shape:
            raise InputError("probe vectors must have the same length as w")
        if abs(_lorentz(w, t)) > 1e-9 * max(1.0, np.linalg.norm(t) * np.linalg.norm(w)):
            raise InputError(f"probe is not tangent to the hyperboloid: (w, t) = {_lorentz(w, t):.3g}")

    def F(v):
        return _h2_raw(_h1_raw(v))

    y = F(w)
    D1 = (F(w + step * t1) - F(w - step * t1)) / (2 * step)
    D2 = (F(w + step * t2) - F(w - step * t2)) / (2 * step)
    return abs(halfspace_inner(y, D1, D2) - _lorentz(t1, t2))


def tangent_basis(w) -> np.ndarray:
    """Columns: an orthonormal basis of the tangent space of the hyperboloid at ``w``."""
    w = np.asarray(w, dtype=float)
    k = w.size
    basis = []
    for e in np.eye(k)[:-1]:
        t = e + _lorentz(w, e) * w
        for b in basis:
            t = t - _lorentz(b, t) * b
        basis.append(t / np.sqrt(_lorentz(t, t)))
    return np.column_stack(basis)
