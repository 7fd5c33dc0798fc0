"""Builtin graph generators with exact derivatives."""

import numpy as np

from .errors import InputError
from .geometry import Signature, SurfaceDef


def plane(c, b=None, name=None) -> SurfaceDef:
    """Affine map ``f(x) = c x + b`` with slope matrix ``c`` of shape ``(n, m)``.

    Space-likeness (operator norm of ``c`` below 1) is not checked here; it
    surfaces as ``NotSpaceLikeError`` when the graph is evaluated.
    """
    c = np.atleast_2d(np.asarray(c, dtype=float))
    n, m = c.shape
    b = np.zeros(n) if b is None else np.broadcast_to(np.asarray(b, dtype=float), (n,)).copy()
    zero_hess = np.zeros((n, m, m))
    return SurfaceDef(
        Signature(m, n),
        eval=lambda x: c @ x + b,
        jac=lambda x: c,
        hess=lambda x: zero_hess,
        name=name or "plane",
    )


def hyperboloid(m: int, R: float = 1.0, center=None, name=None) -> SurfaceDef:
    """Upper sheet ``f(x) = sqrt(R^2 + |x - center|^2)`` in ``R^{m+1}_1``.

    This is the hyperbolic space of curvature ``-1/R^2``; its mean curvature
    is ``1/R`` everywhere.
    """
    if not R > 0:
        raise InputError(f"hyperboloid needs R > 0, got {R}")
    center = np.zeros(m) if center is None else np.asarray(center, dtype=float)
    if center.shape != (m,):
        raise InputError(f"hyperboloid center must have length {m}")
    R2 = float(R) ** 2

    def f(x):
        u = x - center
        return np.array([np.sqrt(R2 + u @ u)])

    def jac(x):
        u = x - center
        return (u / np.sqrt(R2 + u @ u))[None, :]

    def hess(x):
        u = x - center
        r = np.sqrt(R2 + u @ u)
        return ((np.eye(m) - np.outer(u, u) / r**2) / r)[None, :, :]

    return SurfaceDef(Signature(m, 1), f, jac, hess, name=name or f"hyperboloid(R={R:g})")


def polynomial(terms, m: int, name=None) -> SurfaceDef:
    """Polynomial map; ``terms[s]`` is a list of ``(coef, exponents)`` for output ``s``.

    ``exponents`` has length ``m`` and total degree at most 4.
    """
    n = len(terms)
    parsed = []
    for s, out in enumerate(terms):
        rows = []
        for coef, exps in out:
            exps = np.asarray(exps, dtype=int)
            if exps.shape != (m,) or np.any(exps < 0):
                raise InputError(f"output {s + 1}: exponents must be {m} non-negative integers")
            if exps.sum() > 4:
                raise InputError(f"output {s + 1}: monomial degree {exps.sum()} exceeds 4")
            rows.append((float(coef), exps))
        parsed.append(rows)

    def f(x):
        return np.array([sum(c * np.prod(x**e) for c, e in rows) for rows in parsed])

    def _dmono(x, e, k):
        if e[k] == 0:
            return 0.0, None
        e2 = e.copy()
        e2[k] -= 1
        return float(e[k]), e2

    def jac(x):
        J = np.zeros((n, m))
        for s, rows in enumerate(parsed):
            for c, e in rows:
                for k in range(m):
                    a, e2 = _dmono(x, e, k)
                    if e2 is not None:
                        J[s, k] += c * a * np.prod(x**e2)
        return J

    def hess(x):
        H = np.zeros((n, m, m))
        for s, rows in enumerate(parsed):
            for c, e in rows:
                for k in range(m):
                    a, e2 = _dmono(x, e, k)
                    if e2 is None:
                        continue
                    for l in range(m):
                        b, e3 = _dmono(x, e2, l)
                        if e3 is not None:
                            H[s, k, l] += c * a * b * np.prod(x**e3)
        return H

    return SurfaceDef(Signature(m, n), f, jac, hess, name=name or "polynomial")


def radial(coeffs, m: int, center=None, name=None) -> SurfaceDef:
    """Radial profile ``f(x) = sum_k coeffs[k] * rho^(2k)`` with ``rho = |x - center|``."""
    coeffs = np.asarray(coeffs, dtype=float)
    if coeffs.ndim != 1 or coeffs.size == 0:
        raise InputError("radial profile needs at least one coefficient")
    center = np.zeros(m) if center is None else np.asarray(center, dtype=float)
    # profile as a polynomial in s = rho^2
    prof = np.polynomial.Polynomial(coeffs)
    d1 = prof.deriv(1)
    d2 = prof.deriv(2)

    def f(x):
        u = x - center
        return np.array([prof(u @ u)])

    def jac(x):
        u = x - center
        return (2 * d1(u @ u) * u)[None, :]

    def hess(x):
        u = x - center
        s = u @ u
        return (2 * d1(s) * np.eye(m) + 4 * d2(s) * np.outer(u, u))[None, :, :]

    return SurfaceDef(Signature(m, 1), f, jac, hess, name=name or "radial")


def cylinder(m: int, R: float = 1.0) -> SurfaceDef:
    """``f(x) = sqrt(R^2 + x_1^2)``: a hyperbola times a flat factor, H = 1/(m R)."""
    R2 = float(R) ** 2

    def f(x):
        return np.array([np.sqrt(R2 + x[0] ** 2)])

    def jac(x):
        J = np.zeros((1, m))
        J[0, 0] = x[0] / np.sqrt(R2 + x[0] ** 2)
        return J

    def hess(x):
        H = np.zeros((1, m, m))
        H[0, 0, 0] = R2 / (R2 + x[0] ** 2) ** 1.5
        return H

    return SurfaceDef(Signature(m, 1), f, jac, hess, name=f"cylinder(R={R:g})")


def without_derivatives(f: SurfaceDef) -> SurfaceDef:
    """Same map, derivatives left to finite differences."""
    return SurfaceDef(f.signature, f.eval, name=f"{f.name}[fd]")
