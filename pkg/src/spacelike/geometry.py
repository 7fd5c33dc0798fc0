"""Pointwise geometry of space-like graphs in pseudo-Euclidean space.

A graph ``M = {(x, f(x))}`` of ``f: R^m -> R^n`` sits in ``R^{m+n}`` with the
index-n metric ``dx_1^2 + ... + dx_m^2 - dx_{m+1}^2 - ... - dx_{m+n}^2``.
This module evaluates, at a single parameter point ``x``:

* the Jacobian and Hessian of ``f`` (exact when supplied, else central
  finite differences),
* the induced metric ``g = I - J^T J``, the singular values of ``J`` and the
  adapted Lorentzian frame ``{e_i, e_alpha}`` built from them,
* the volume distortion ``*Omega = 1 / sqrt(det g)``,
* the second fundamental form ``h_{alpha ij}``, the mean curvature vector and
  its normal derivative.

Ambient vectors are stored as length ``m + n`` arrays, space-like
coordinates first.
"""

from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from .errors import (
    EvaluationError,
    InputError,
    NotSpaceLikeError,
    SignatureViolationError,
)

EPS = np.finfo(float).eps
SPACELIKE_TOL = 1e-12
# (Hvec, Hvec) above this (relative) means the normal projection went wrong
SIGNATURE_TOL = 1e-9


@dataclass(frozen=True)
class Signature:
    m: int
    n: int

    def __post_init__(self):
        if int(self.m) != self.m or int(self.n) != self.n or self.m < 1 or self.n < 1:
            raise InputError(f"signature needs integers m >= 1, n >= 1, got ({self.m}, {self.n})")

    @property
    def dim(self) -> int:
        return self.m + self.n

    @property
    def eta(self) -> np.ndarray:
        """Diagonal of the metric: +1 (m times) then -1 (n times)."""
        return np.concatenate([np.ones(self.m), -np.ones(self.n)])


@dataclass(frozen=True)
class SurfaceDef:
    """An entire graph generator ``f: R^m -> R^n``.

    ``eval`` maps an ``(m,)`` array to an ``(n,)`` array. ``jac`` returns the
    ``(n, m)`` Jacobian and ``hess`` the ``(n, m, m)`` Hessian; either may be
    omitted, in which case finite differences are used. All three must be
    safe to call concurrently.
    """

    signature: Signature
    eval: Callable[[np.ndarray], np.ndarray]
    jac: Optional[Callable[[np.ndarray], np.ndarray]] = None
    hess: Optional[Callable[[np.ndarray], np.ndarray]] = None
    name: str = "surface"

    @property
    def m(self) -> int:
        return self.signature.m

    @property
    def n(self) -> int:
        return self.signature.n

    def __call__(self, x) -> np.ndarray:
        return _evaluate(self, np.asarray(x, dtype=float))

    def embed(self, x) -> np.ndarray:
        """The graph point ``z(x) = (x, f(x))``."""
        x = np.asarray(x, dtype=float)
        return np.concatenate([x, self(x)])


@dataclass
class PointGeometry:
    x: np.ndarray
    J: np.ndarray
    hess: np.ndarray
    g: np.ndarray
    lambdas: np.ndarray
    a_tan: np.ndarray  # (m, m), columns a_i; det = +1
    a_nor: np.ndarray  # (n, n), columns a_alpha
    e_tan: np.ndarray  # (m+n, m), columns e_i
    e_nor: np.ndarray  # (m+n, n), columns e_alpha
    star_omega: float
    star_omega_det: float
    # e_i = sum_k T[k, i] dz/dx_k
    T: np.ndarray

    @property
    def m(self) -> int:
        return self.J.shape[1]

    @property
    def n(self) -> int:
        return self.J.shape[0]

    @property
    def frame(self) -> np.ndarray:
        """All frame vectors as columns ``[e_1 .. e_m, e_{m+1} .. e_{m+n}]``."""
        return np.hstack([self.e_tan, self.e_nor])


@dataclass
class CurvatureData:
    h: np.ndarray  # (n, m, m): h[alpha, i, j]
    Hvec: np.ndarray
    Hscalar: float
    parallel_residual: Optional[float]
    geometry: PointGeometry


def minkowski_inner(u, v, sig: Signature) -> float:
    """Inner product of ``R^{m+n}_n``: space-like part minus time-like part."""
    u = np.asarray(u, dtype=float)
    v = np.asarray(v, dtype=float)
    if u.shape[-1] != sig.dim or v.shape[-1] != sig.dim:
        raise InputError(
            f"vectors must have length m+n={sig.dim}, got {u.shape[-1]} and {v.shape[-1]}"
        )
    m = sig.m
    return float(u[:m] @ v[:m] - u[m:] @ v[m:])


def gram(vectors: np.ndarray, m: int) -> np.ndarray:
    """Minkowski Gram matrix of the columns of ``vectors``."""
    eta = np.ones(vectors.shape[0])
    eta[m:] = -1.0
    return vectors.T @ (eta[:, None] * vectors)


def fd_steps(x):
    """Central-difference steps ``(h1, h2)`` for first and second derivatives."""
    scale = max(1.0, float(np.max(np.abs(x)))) if np.size(x) else 1.0
    return EPS ** (1 / 3) * scale, EPS ** (1 / 4) * scale


def _evaluate(f: SurfaceDef, x: np.ndarray) -> np.ndarray:
    y = np.atleast_1d(np.asarray(f.eval(x), dtype=float))
    if y.shape != (f.n,):
        raise InputError(f"{f.name}: eval returned shape {y.shape}, expected ({f.n},)")
    if not np.all(np.isfinite(y)):
        raise EvaluationError(f"{f.name}: non-finite value at x={x.tolist()}")
    return y


def _fd_jacobian(func, x, h):
    cols = []
    for k in range(x.size):
        step = np.zeros_like(x)
        step[k] = h
        cols.append((func(x + step) - func(x - step)) / (2 * h))
    return np.stack(cols, axis=-1)


def _fd_hessian(f: SurfaceDef, x, h):
    m = x.size
    f0 = f(x)
    H = np.empty((f.n, m, m))
    basis = np.eye(m) * h
    for k in range(m):
        ek = basis[k]
        H[:, k, k] = (f(x + ek) - 2 * f0 + f(x - ek)) / h**2
        for l in range(k + 1, m):
            el = basis[l]
            val = (f(x + ek + el) - f(x + ek - el) - f(x - ek + el) + f(x - ek - el)) / (4 * h**2)
            H[:, k, l] = val
            H[:, l, k] = val
    return H


def derivatives(f: SurfaceDef, x):
    """Jacobian ``(n, m)`` and Hessian ``(n, m, m)`` of ``f`` at ``x``.

    Exact callbacks on ``f`` take priority. Missing ones are replaced by
    central differences (the Hessian differentiates the exact Jacobian when
    only that is available). The returned Hessian is symmetrised.
    """
    x = np.asarray(x, dtype=float)
    if x.shape != (f.m,):
        raise InputError(f"point must have shape ({f.m},), got {x.shape}")
    if not np.all(np.isfinite(x)):
        raise InputError("point has non-finite coordinates")
    h1, h2 = fd_steps(x)

    if f.jac is not None:
        J = np.asarray(f.jac(x), dtype=float).reshape(f.n, f.m)
    else:
        J = _fd_jacobian(f, x, h1)

    if f.hess is not None:
        H = np.asarray(f.hess(x), dtype=float).reshape(f.n, f.m, f.m)
    elif f.jac is not None:
        H = _fd_jacobian(lambda y: np.asarray(f.jac(y), dtype=float).reshape(f.n, f.m), x, h1)
    else:
        H = _fd_hessian(f, x, h2)
    if not (np.all(np.isfinite(J)) and np.all(np.isfinite(H))):
        raise EvaluationError(f"{f.name}: non-finite derivative at x={x.tolist()}")
    H = 0.5 * (H + np.swapaxes(H, 1, 2))
    return J, H


def _adapted_bases(J):
    """SVD of ``J`` with ``a_tan`` oriented (det +1) and ``J a_i = lambda_i a_{m+i}``."""
    n, m = J.shape
    U, s, Vt = np.linalg.svd(J, full_matrices=True)
    V = Vt.T.copy()
    U = U.copy()
    lambdas = np.zeros(m)
    k = min(m, n)
    lambdas[:k] = s[:k]
    if np.linalg.det(V) < 0:
        V[:, -1] *= -1
        if m <= n:
            U[:, m - 1] *= -1
    return lambdas, V, U


def frame_from_jacobian(J, x=None, hess=None) -> PointGeometry:
    """Build the adapted frame and ``*Omega`` from a Jacobian alone."""
    J = np.atleast_2d(np.asarray(J, dtype=float))
    n, m = J.shape
    x = np.zeros(m) if x is None else np.asarray(x, dtype=float)
    g = np.eye(m) - J.T @ J
    min_eig = float(np.linalg.eigvalsh(g)[0])
    if not min_eig > SPACELIKE_TOL:
        raise NotSpaceLikeError(x, min_eig)

    lambdas, V, U = _adapted_bases(J)
    scale = 1.0 / np.sqrt(1.0 - lambdas**2)

    e_tan = np.zeros((m + n, m))
    e_nor = np.zeros((m + n, n))
    for i in range(m):
        e_tan[:m, i] = V[:, i]
        if i < n:
            e_tan[m:, i] = lambdas[i] * U[:, i]
        e_tan[:, i] *= scale[i]
    for k in range(n):
        e_nor[m:, k] = U[:, k]
        if k < m:
            e_nor[:m, k] = lambdas[k] * V[:, k]
            e_nor[:, k] /= np.sqrt(1.0 - lambdas[k] ** 2)

    star_omega = float(np.prod(scale))
    star_omega_det = float(1.0 / np.sqrt(np.linalg.det(g)))
    return PointGeometry(
        x=x,
        J=J,
        hess=np.zeros((n, m, m)) if hess is None else hess,
        g=g,
        lambdas=lambdas,
        a_tan=V,
        a_nor=U,
        e_tan=e_tan,
        e_nor=e_nor,
        star_omega=star_omega,
        star_omega_det=star_omega_det,
        T=V * scale[None, :],
    )


def point_geometry(f: SurfaceDef, x) -> PointGeometry:
    """Metric, singular values, adapted frame and ``*Omega`` at ``x``.

    Raises
    ------
    NotSpaceLikeError
        If the smallest eigenvalue of ``g = I - J^T J`` is not above
        ``SPACELIKE_TOL``; the eigenvalue is carried on the exception.
    """
    x = np.asarray(x, dtype=float)
    J, H = derivatives(f, x)
    return frame_from_jacobian(J, x=x, hess=H)


def _mean_curvature(pg: PointGeometry):
    m = pg.m
    # time-like components of B(e_i, e_j); the space-like part of d2z is zero
    B = np.einsum("skl,ki,lj->sij", pg.hess, pg.T, pg.T)
    # h[a, i, j] = -(B_ij, e_a) = +B_ij . (time part of e_a)
    h = np.einsum("sij,sa->aij", B, pg.e_nor[m:, :])
    Hvec = pg.e_nor @ np.trace(h, axis1=1, axis2=2) / m
    return h, Hvec


def _hscalar(Hvec, m, x):
    HH = float(Hvec[:m] @ Hvec[:m] - Hvec[m:] @ Hvec[m:])
    if HH > SIGNATURE_TOL * max(1.0, float(Hvec @ Hvec)):
        raise SignatureViolationError(
            f"mean curvature vector is space-like ((H,H)={HH:.3g}) at x={np.asarray(x).tolist()}"
        )
    return float(np.sqrt(max(0.0, -HH)))


def mean_curvature_vector(f: SurfaceDef, x) -> np.ndarray:
    return _mean_curvature(point_geometry(f, x))[1]


def normal_component(v, pg: PointGeometry) -> np.ndarray:
    """Coefficients ``c_alpha`` of the normal part ``sum c_alpha e_alpha`` of ``v``."""
    m = pg.m
    eta_v = np.concatenate([v[:m], -v[m:]])
    return -(eta_v @ pg.e_nor)


def directional_derivative(func, x, d, exact: bool):
    """Derivative of ``func`` along ``d`` per unit of ``d``."""
    if exact:
        return (func(x + d) - func(x - d)) / 2
    # Hvec of a finite-difference surface carries ~1e-7 roundoff noise:
    # least-squares polynomial fit over a wide symmetric stencil
    s = np.linspace(-1.0, 1.0, 17)
    V = np.vander(s, 7, increasing=True)
    Y = np.array([func(x + si * d) for si in s])
    return np.linalg.lstsq(V, Y, rcond=None)[0][1]


def field_step(f: SurfaceDef, x):
    """Step for differentiating derived fields (Hvec, e_H) along the graph."""
    scale = max(1.0, float(np.max(np.abs(x))))
    if f.hess is not None:
        return EPS ** (1 / 3) * scale
    return 0.1 * scale


def curvature(f: SurfaceDef, x, parallel: bool = True) -> CurvatureData:
    """Second fundamental form and mean curvature at ``x``.

    ``h[alpha, i, j] = -(B(e_i, e_j), e_alpha)`` where ``B`` is the coordinate
    second derivative of the embedding; with ``(e_alpha, e_alpha) = -1`` this
    makes the normal part of ``B(e_i, e_j)`` equal ``sum_alpha h[alpha,i,j] e_alpha``.

    When ``parallel`` is set, the normal projection of the derivative of
    ``Hvec`` along each ``e_i`` is estimated by finite differences and its
    norm returned as ``parallel_residual``.
    """
    x = np.asarray(x, dtype=float)
    pg = point_geometry(f, x)
    h, Hvec = _mean_curvature(pg)
    H = _hscalar(Hvec, pg.m, x)

    residual = None
    if parallel:
        step = field_step(f, x)
        total = 0.0
        for i in range(pg.m):
            # fixed Euclidean step in x, independent of the stretch of e_i
            t = step / np.linalg.norm(pg.T[:, i])
            d = t * pg.T[:, i]
            dH = directional_derivative(
                lambda y: mean_curvature_vector(f, y), x, d, f.hess is not None
            ) / t
            total += float(np.sum(normal_component(dH, pg) ** 2))
        residual = float(np.sqrt(total))
    return CurvatureData(h=h, Hvec=Hvec, Hscalar=H, parallel_residual=residual, geometry=pg)


def mean_curvature_scalar(f: SurfaceDef, x) -> float:
    pg = point_geometry(f, x)
    return _hscalar(_mean_curvature(pg)[1], pg.m, x)


def unit_mean_curvature_normal(f: SurfaceDef, x, h_min: float):
    """``e_H = Hvec / H`` and ``H`` at ``x``; ``None`` for ``e_H`` when ``H <= h_min``."""
    pg = point_geometry(f, x)
    Hvec = _mean_curvature(pg)[1]
    H = _hscalar(Hvec, pg.m, x)
    if H <= h_min:
        return None, H, pg
    return Hvec / H, H, pg
