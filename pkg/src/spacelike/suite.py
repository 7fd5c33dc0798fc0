"""The verification battery run by the ``suite`` command.

Each function returns report records for one group of checks. Random point
clouds are drawn from ``numpy.random.default_rng(seed)`` so that the whole
battery is reproducible from the configured seed.
"""

from itertools import combinations_with_replacement

import numpy as np

from . import calibration as cal
from . import hyperbolic as hyp
from .geometry import curvature, point_geometry
from .quadrature import chart
from .report import make_record
from .runner import TOL_COMPOSITE, TOL_ISOMETRY, TOL_LEMMA1, TOL_PARALLEL, TOL_STAR_OMEGA
from .surfaces import cylinder, hyperboloid, plane, polynomial, radial, without_derivatives

CMD = "suite"


def random_spacelike_graph(rng, m: int, r_max: float = 1.0, max_slope: float = 0.9):
    """Random cubic polynomial ``f: R^m -> R`` that is space-like on the ball of radius ``r_max``.

    Coefficients are halved until the sampled gradient norm on the ball stays
    below ``max_slope``; points outside the ball are not guaranteed space-like.
    """
    b = rng.normal(size=m)
    b *= rng.uniform(0.1, 0.5) / np.linalg.norm(b)
    quad = [(rng.normal(scale=0.3), e) for e in _monomials(m, 2)]
    cubic = [(rng.normal(scale=0.1), e) for e in _monomials(m, 3)]
    const = [(float(rng.normal()), [0] * m)]
    linear = [(float(b[k]), list(np.eye(m, dtype=int)[k])) for k in range(m)]
    probe = rng.normal(size=(256, m))
    probe *= (r_max * rng.uniform(size=(256, 1)) ** (1 / m)) / np.linalg.norm(probe, axis=1, keepdims=True)
    scale = 1.0
    for _ in range(40):
        terms = const + linear + [(c * scale, e) for c, e in quad + cubic]
        f = polynomial([terms], m, name=f"random-cubic(m={m})")
        if max(np.linalg.norm(f.jac(x)) for x in probe) < max_slope:
            return f
        scale *= 0.5
    return f


def _monomials(m, degree):
    out = []
    for combo in combinations_with_replacement(range(m), degree):
        e = [0] * m
        for k in combo:
            e[k] += 1
        out.append(e)
    return out


def random_sphere_angles(rng, m):
    """Chart angles with polar angles kept 0.05 away from the chart poles."""
    polar = rng.uniform(0.05, np.pi - 0.05, size=m - 2)
    return np.append(polar, rng.uniform(0, 2 * np.pi))


def criterion_star_omega(rng, seed):
    worst = 0.0
    for m in (2, 3):
        f = hyperboloid(m)
        for x in rng.uniform(-3, 3, size=(100, m)):
            exact = np.sqrt(1 + x @ x)
            worst = max(worst, abs(point_geometry(f, x).star_omega - exact) / exact)
    return [make_record("c1_hyperboloid_star_omega", CMD, passed=worst < TOL_STAR_OMEGA, value=worst,
                        tolerance=TOL_STAR_OMEGA, inputs={"m": [2, 3], "points": 100}, seed=seed)]


def criterion_curvature(rng, seed):
    out = []
    for R in (1.0, 2.0):
        for label, tol in (("exact", 1e-10), ("finite-difference", 1e-6)):
            h_err = 0.0
            par = 0.0
            for k in range(100):
                m = 2 + k % 2
                f = hyperboloid(m, R)
                if label != "exact":
                    f = without_derivatives(f)
                cd = curvature(f, rng.uniform(-2, 2, size=m))
                h_err = max(h_err, abs(cd.Hscalar - 1 / R))
                par = max(par, cd.parallel_residual)
            inputs = {"R": R, "derivatives": label, "m": [2, 3], "points": 100}
            out.append(make_record("c2_hyperboloid_H", CMD, passed=h_err < tol, value=h_err,
                                   tolerance=tol, inputs=inputs, seed=seed))
            out.append(make_record("c2_parallel_residual", CMD, passed=par < TOL_PARALLEL, value=par,
                                   tolerance=TOL_PARALLEL, inputs=inputs, seed=seed))
    return out


def criterion_lemma1(rng, seed):
    worst = 0.0
    for R in (1.0, 2.0):
        for m in (2, 3):
            f = hyperboloid(m, R)
            for x in rng.uniform(-2, 2, size=(50, m)):
                worst = max(worst, cal.lemma1_residual(f, x))
    return [make_record("c3_lemma1", CMD, passed=worst < TOL_LEMMA1, value=worst, tolerance=TOL_LEMMA1,
                        inputs={"R": [1, 2], "m": [2, 3], "points": 50}, seed=seed)]


def criterion_stokes(seed, base=(64, 512)):
    out = []
    f = hyperboloid(2)
    for r in (0.5, 1.0, 2.0):
        coarse = cal.stokes_check(f, r, *base)
        fine = cal.stokes_check(f, r, 2 * base[0], 2 * base[1])
        out.append(make_record(
            "c4_stokes", CMD,
            passed=coarse.rel_residual < 1e-3 and fine.rel_residual < coarse.rel_residual,
            value={"baseline": coarse.rel_residual, "doubled": fine.rel_residual,
                   "lhs": coarse.lhs, "rhs": coarse.rhs},
            tolerance=1e-3, inputs={"r": r, "n_int": base[0], "n_bd": base[1]}, seed=seed,
        ))
    return out


def criterion_boundary(rng, seed, graphs=5, points=200):
    worst = {"sum_of_squares": 0.0, "alpha_bound": np.inf, "projection_bound": np.inf, "radial_slope_bound": np.inf, "q_minors": 0.0, "R_routes": 0.0}
    for k in range(graphs):
        m = (2, 3, 2, 3, 4)[k % 5]
        f = random_spacelike_graph(rng, m)
        for _ in range(points):
            r = rng.uniform(0.3, 1.0)
            bq = cal.boundary_quantities(f, cal.boundary_point(f, r, random_sphere_angles(rng, m)))
            sQ = bq.star_omega * bq.Q
            worst["sum_of_squares"] = max(worst["sum_of_squares"], abs(bq.P**2 + bq.R**2 - sQ**2) / sQ**2)
            worst["alpha_bound"] = min(worst["alpha_bound"], sQ - abs(bq.R))
            worst["projection_bound"] = min(worst["projection_bound"], bq.P - bq.Q)
            radial_bound = np.sqrt(bq.star_omega**-2 + bq.radial_slope**2) * bq.P
            worst["radial_slope_bound"] = min(worst["radial_slope_bound"], radial_bound - bq.Q)
            worst["q_minors"] = max(worst["q_minors"], bq.q_minor_residual)
            worst["R_routes"] = max(worst["R_routes"], abs(bq.R - bq.R_direct) / max(sQ, 1e-300))
    inputs = {"graphs": graphs, "points_per_graph": points}
    return [
        make_record("c5_sum_of_squares", CMD, passed=worst["sum_of_squares"] < 1e-8, value=worst["sum_of_squares"],
                    tolerance=1e-8, inputs=inputs, seed=seed),
        make_record("c5_alpha_bound", CMD, passed=worst["alpha_bound"] >= -1e-10, value=worst["alpha_bound"],
                    tolerance=-1e-10, note="min slack", inputs=inputs, seed=seed),
        make_record("c5_projection_bound", CMD, passed=worst["projection_bound"] >= -1e-10, value=worst["projection_bound"],
                    tolerance=-1e-10, note="min slack", inputs=inputs, seed=seed),
        make_record("c5_radial_slope_bound", CMD, passed=worst["radial_slope_bound"] >= -1e-10, value=worst["radial_slope_bound"],
                    tolerance=-1e-10, note="min slack", inputs=inputs, seed=seed),
        make_record("c5_q_minors", CMD, passed=worst["q_minors"] < 1e-10, value=worst["q_minors"],
                    tolerance=1e-10, inputs=inputs, seed=seed),
        make_record("c5_alpha_routes", CMD, passed=worst["R_routes"] < 1e-10, value=worst["R_routes"],
                    tolerance=1e-10, inputs=inputs, seed=seed),
    ]


def volume_test_surfaces(rng):
    """(surface, radius) pairs used by the volume-identity check."""
    return [
        (hyperboloid(2), 1.0),
        (hyperboloid(2, 2.0), 2.0),
        (hyperboloid(3), 1.0),
        (hyperboloid(3, 2.0), 1.5),
        (plane([[0.48, 0.64]]), 1.0),
        (plane([[0.3, -0.2, 0.5]]), 1.0),
        (plane([[0.5, 0.1], [-0.2, 0.4]]), 1.0),
        (cylinder(2), 1.0),
        (cylinder(3), 1.0),
        (radial([0.0, 0.2, -0.05], 2), 1.0),
        (random_spacelike_graph(rng, 2), 1.0),
        (random_spacelike_graph(rng, 3), 1.0),
    ]


def criterion_volume(rng, seed, n_int=16):
    out = []
    for f, r in volume_test_surfaces(rng):
        ratio = cal.volume_identity(f, r, n_int)
        out.append(make_record("c6_volume_identity", CMD, passed=abs(ratio - 1) < 1e-6, value=ratio,
                               tolerance=1e-6, inputs={"surface": f.name, "m": f.m, "r": r}, seed=seed))
    return out


def criterion_growth(seed):
    radii = [1.0, 2.0, 4.0, 8.0, 16.0, 32.0]
    hyp_scan = cal.growth_scan(hyperboloid(2), radii, 64, 8)
    ratios = [rec.sup_ratio for rec in hyp_scan.records]
    last = ratios[-1]
    h_ok = all(abs(rec.h_measured_max - 1) < 1e-10 and abs(rec.h_measured_min - 1) < 1e-10
               for rec in hyp_scan.records)
    bound_ok = all(rec.h_measured_max <= rec.h_bound for rec in hyp_scan.records)
    monotone = all(b < a for a, b in zip(ratios, ratios[1:]))
    flat = cal.growth_scan(plane([[0.48, 0.64]]), radii, 64, 8)
    flat_last = flat.records[-1]
    flat_h = max(abs(rec.h_measured_max) for rec in flat.records)
    return [
        make_record("c7_hyperboloid_growth", CMD, passed=monotone and 1 <= last <= 1.001 and h_ok and bound_ok,
                    value={"sup_ratios": ratios, "monotone_decreasing": monotone, "h_equals_1": h_ok,
                           "h_below_bound": bound_ok},
                    tolerance=[1.0, 1.001], inputs={"radii": radii}, seed=seed),
        make_record("c7_plane_growth", CMD, passed=flat_last.sup_ratio < 0.06 and flat_h < 1e-12,
                    value={"sup_ratio_r32": flat_last.sup_ratio, "sup_star_omega": flat_last.sup_star_omega,
                           "h_max": flat_h},
                    tolerance=0.06, inputs={"c": [0.48, 0.64], "radii": radii}, seed=seed),
    ]


def criterion_models(rng, seed):
    surfaces = [hyperboloid(2), hyperboloid(3, 2.0)] + [random_spacelike_graph(rng, m) for m in (2, 3)]
    comp = gnorm = height = 0.0
    for k in range(1000):
        f = surfaces[k % len(surfaces)]
        if f.name.startswith("hyperboloid"):
            x = rng.uniform(-3, 3, size=f.m)
        else:
            x = chart(random_sphere_angles(rng, f.m), rng.uniform(0.01, 1.0))[0]
        y_num, y_closed = hyp.composite_mth(f, x)
        comp = max(comp, abs(y_num - y_closed) / abs(y_closed))
        w = hyp.gauss_map(f, x)
        so = point_geometry(f, x).star_omega
        gnorm = max(gnorm, abs(float(w[:-1] @ w[:-1] - w[-1] ** 2) + 1))
        height = max(height, abs(w[-1] - so) / so)
    iso = 0.0
    for k in range(100):
        m = 2 + k % 2
        u = rng.normal(size=m)
        w = np.append(u, np.sqrt(1 + u @ u))
        B = hyp.tangent_basis(w)
        Q, _ = np.linalg.qr(rng.normal(size=(m, m)))
        probes = B @ Q  # a random orthonormal pair of tangent probes
        for i in range(m):
            for j in range(m):
                iso = max(iso, hyp.isometry_residual(w, probes[:, i], probes[:, j]))
    return [
        make_record("c8_composite_mth", CMD, passed=comp < TOL_COMPOSITE, value=comp,
                    tolerance=TOL_COMPOSITE, inputs={"points": 1000}, seed=seed),
        make_record("c8_gauss_map_norm", CMD, passed=gnorm < 1e-10, value=gnorm,
                    tolerance=1e-10, inputs={"points": 1000}, seed=seed),
        make_record("c8_gauss_map_height", CMD, passed=height < 1e-12, value=height,
                    tolerance=1e-12, inputs={"points": 1000}, seed=seed),
        make_record("c8_isometry", CMD, passed=iso < TOL_ISOMETRY, value=iso,
                    tolerance=TOL_ISOMETRY, inputs={"points": 100}, seed=seed),
    ]


def suite_records(cfg):
    seed = cfg.seed
    rng = np.random.default_rng(seed)
    out = []
    out += criterion_star_omega(rng, seed)
    out += criterion_curvature(rng, seed)
    out += criterion_lemma1(rng, seed)
    out += criterion_stokes(seed)
    out += criterion_boundary(rng, seed)
    out += criterion_volume(rng, seed)
    out += criterion_growth(seed)
    out += criterion_models(rng, seed)
    return out
