"""Dispatch a ``RunConfig`` to the geometry checks and collect report records."""

import numpy as np

from . import calibration as cal
from . import hyperbolic as hyp
from .config import RunConfig, build_surface
from .errors import ConfigError, GeometryError
from .geometry import SurfaceDef, curvature, gram, point_geometry
from .report import make_record

TOL_STAR_OMEGA = 1e-10
TOL_FRAME = 1e-10
TOL_SYMMETRY_EXACT = 1e-10
TOL_SYMMETRY_FD = 1e-6
TOL_PARALLEL = 1e-5
TOL_LEMMA1 = 1e-5
TOL_STOKES = 1e-3
TOL_GAUSS = 1e-10
TOL_COMPOSITE = 1e-10
TOL_ISOMETRY = 1e-6
TOL_H_BOUND = 1e-12

DEFAULT_STOKES_RADII = (0.5, 1.0, 2.0)
DEFAULT_GROWTH_RADII = (1.0, 2.0, 4.0, 8.0, 16.0, 32.0)


def _fail(check, command, exc, seed, inputs):
    value = None
    if hasattr(exc, "min_eigenvalue"):
        value = {"min_eigenvalue": exc.min_eigenvalue}
    kind = getattr(exc, "kind", type(exc).__name__)
    return make_record(check, command, passed=False, value=value, error=kind, note=str(exc), inputs=inputs, seed=seed)


def point_records(f: SurfaceDef, x, command="analyze", seed=0):
    """Pointwise geometry checks at ``x``."""
    inputs = {"surface": f.name, "x": np.asarray(x)}
    out = []
    try:
        cd = curvature(f, x)
    except GeometryError as exc:
        return [_fail("point_geometry", command, exc, seed, inputs)]
    pg = cd.geometry
    m, n = pg.m, pg.n

    rel = abs(pg.star_omega - pg.star_omega_det) / pg.star_omega
    out.append(make_record(
        "star_omega", command, passed=rel < TOL_STAR_OMEGA,
        value={"svd": pg.star_omega, "det": pg.star_omega_det, "rel_diff": rel},
        tolerance=TOL_STAR_OMEGA, inputs=inputs, seed=seed,
    ))

    eta = np.diag(np.concatenate([np.ones(m), -np.ones(n)]))
    frame_err = float(np.max(np.abs(gram(pg.frame, m) - eta)))
    recon = 0.0
    for i in range(min(m, n)):
        recon = max(recon, float(np.max(np.abs(pg.J @ pg.a_tan[:, i] - pg.lambdas[i] * pg.a_nor[:, i]))))
    for i in range(min(m, n), m):
        recon = max(recon, float(np.max(np.abs(pg.J @ pg.a_tan[:, i]))))
    out.append(make_record(
        "frame", command, passed=frame_err < TOL_FRAME and recon < TOL_FRAME,
        value={"orthonormality": frame_err, "svd_reconstruction": recon, "lambdas": pg.lambdas},
        tolerance=TOL_FRAME, inputs=inputs, seed=seed,
    ))

    sym_tol = TOL_SYMMETRY_EXACT if f.hess is not None else TOL_SYMMETRY_FD
    sym = float(np.max(np.abs(cd.h - np.swapaxes(cd.h, 1, 2))))
    normality = float(np.max(np.abs(cd.Hvec[:m] @ pg.e_tan[:m] - cd.Hvec[m:] @ pg.e_tan[m:])))
    out.append(make_record(
        "mean_curvature", command, passed=sym < sym_tol and normality < sym_tol,
        value={"H": cd.Hscalar, "Hvec": cd.Hvec, "symmetry": sym, "normality": normality},
        tolerance=sym_tol, inputs=inputs, seed=seed,
    ))
    out.append(make_record(
        "parallel_mean_curvature", command, passed=cd.parallel_residual < TOL_PARALLEL,
        value=cd.parallel_residual, tolerance=TOL_PARALLEL, inputs=inputs, seed=seed,
    ))

    if cd.Hscalar > cal.H_MIN:
        try:
            res = cal.lemma1_residual(f, x)
            out.append(make_record("lemma1", command, passed=res < TOL_LEMMA1, value=res,
                                   tolerance=TOL_LEMMA1, inputs=inputs, seed=seed))
        except GeometryError as exc:
            out.append(_fail("lemma1", command, exc, seed, inputs))
    else:
        out.append(make_record("lemma1", command, passed=True, note=f"skipped: H <= {cal.H_MIN:g}",
                               inputs=inputs, seed=seed))
    return out


def model_records(f: SurfaceDef, x, c: float, command="models", seed=0):
    """Gauss map and hyperbolic model chain at ``x``."""
    inputs = {"surface": f.name, "x": np.asarray(x), "horoball": c}
    try:
        pg = point_geometry(f, x)
        w = hyp.gauss_map(f, x)
        y_num, y_closed = hyp.composite_mth(f, x)
        quantity = hyp.horoball_quantity(f, x)
        inside = hyp.horoball_check(f, x, c)
    except GeometryError as exc:
        return [_fail("gauss_map", command, exc, seed, inputs)]
    out = []
    norm_err = abs(float(w[:-1] @ w[:-1] - w[-1] ** 2) + 1.0)
    height_err = abs(w[-1] - pg.star_omega)
    out.append(make_record(
        "gauss_map", command, passed=norm_err < TOL_GAUSS and height_err < 1e-12 * pg.star_omega,
        value={"w": w, "norm_residual": norm_err, "height_residual": height_err},
        tolerance=TOL_GAUSS, inputs=inputs, seed=seed,
    ))
    rel = abs(y_num - y_closed) / abs(y_closed)
    out.append(make_record(
        "composite_mth", command, passed=rel < TOL_COMPOSITE,
        value={"numeric": y_num, "closed_form": y_closed, "rel_diff": rel},
        tolerance=TOL_COMPOSITE, inputs=inputs, seed=seed,
    ))
    out.append(make_record(
        "horoball", command, passed=inside == (y_closed > c),
        value={"quantity": quantity, "bound": 1.0 / c, "inside": inside},
        inputs=inputs, seed=seed,
    ))
    B = hyp.tangent_basis(w)
    iso = max(hyp.isometry_residual(w, B[:, i], B[:, j]) for i in range(B.shape[1]) for j in range(B.shape[1]))
    out.append(make_record(
        "isometry", command, passed=iso < TOL_ISOMETRY, value=iso,
        tolerance=TOL_ISOMETRY, inputs={"surface": f.name, "w": w}, seed=seed,
    ))
    return out


def stokes_records(f: SurfaceDef, radii, n_int, n_bd, tol=None, command="stokes", seed=0):
    tol = TOL_STOKES if tol is None else tol
    out = []
    for r in radii:
        inputs = {"surface": f.name, "r": r, "n_int": n_int, "n_bd": n_bd}
        try:
            rep = cal.stokes_check(f, r, n_int, n_bd)
        except GeometryError as exc:
            out.append(_fail("stokes", command, exc, seed, inputs))
            continue
        out.append(make_record(
            "stokes", command, passed=rep.rel_residual < tol,
            value={
                "lhs": rep.lhs, "rhs": rep.rhs, "rel_residual": rep.rel_residual,
                "lhs_direct": rep.lhs_direct, "h_mean": rep.h_mean, "h_spread": rep.h_spread,
                "volume_ratio": rep.volume_ratio,
            },
            tolerance=tol, note="; ".join(rep.warnings) or None, inputs=inputs, seed=seed,
        ))
    return out


def growth_records(f: SurfaceDef, radii, samples, h_samples, command="growth", seed=0):
    inputs = {"surface": f.name, "samples_per_sphere": samples}
    try:
        scan = cal.growth_scan(f, radii, samples, h_samples)
    except GeometryError as exc:
        return [_fail("growth", command, exc, seed, inputs)]
    out = []
    for rec in scan.records:
        rin = dict(inputs, r=rec.r)
        agree = abs(rec.h_bound - rec.h_bound_isoperimetric) <= TOL_H_BOUND * rec.h_bound_isoperimetric
        value = {
            "sampled_sup_star_omega": rec.sup_star_omega,
            "sup_ratio": rec.sup_ratio,
            "h_bound": rec.h_bound,
            "h_bound_isoperimetric": rec.h_bound_isoperimetric,
            "radial_slope_sup": rec.radial_slope_sup,
            "radial_slope_ratio": rec.radial_slope_ratio,
            "h_measured_min": rec.h_measured_min,
            "h_measured_max": rec.h_measured_max,
        }
        if rec.failures:
            out.append(make_record(
                "growth", command, passed=False, value=dict(value, failures=rec.failures),
                error="not-space-like", inputs=rin, seed=seed,
            ))
            continue
        out.append(make_record("growth", command, passed=agree, value=value,
                               tolerance=TOL_H_BOUND, inputs=rin, seed=seed))
        hmax, hmin = rec.h_measured_max, rec.h_measured_min
        if hmax is not None and hmax - hmin <= cal.H_SPREAD_TOL * max(hmax, 1.0):
            out.append(make_record(
                "mean_curvature_bound", command, passed=hmax <= rec.h_bound * (1 + 1e-9),
                value={"h_measured": hmax, "h_bound": rec.h_bound, "gap": rec.h_bound - hmax},
                inputs=rin, seed=seed,
            ))
        else:
            out.append(make_record("mean_curvature_bound", command, passed=True,
                                   note="skipped: H not constant on the sampled sphere",
                                   inputs=rin, seed=seed))
    ratios = [r.sup_ratio for r in scan.records]
    out.append(make_record(
        "growth_summary", command, passed=True,
        value={"sup_ratio_monotone_decreasing": all(b < a for a, b in zip(ratios, ratios[1:])),
               "last_sup_ratio": ratios[-1], "last_radial_slope_ratio": scan.records[-1].radial_slope_ratio},
        note="informational", inputs=inputs, seed=seed,
    ))
    return out


def run(cfg: RunConfig, command=None):
    """Run ``command`` (or ``cfg.command``) and return ``(exit_status, records)``.

    Exit status is 0 when every record passed and 1 otherwise; configuration
    problems raise ``ConfigError`` before any check runs.
    """
    from .suite import suite_records

    command = command or cfg.command
    if command is None:
        raise ConfigError("no command given")
    f = build_surface(cfg.surface)
    seed = cfg.seed
    records = []
    if command == "analyze":
        pts, _ = cfg.sample_points()
        for x in pts:
            records += point_records(f, x, seed=seed)
    elif command == "models":
        pts, _ = cfg.sample_points()
        for x in pts:
            records += model_records(f, x, cfg.horoball, seed=seed)
    elif command == "stokes":
        radii = cfg.radii or DEFAULT_STOKES_RADII
        records += stokes_records(f, radii, cfg.n_int, cfg.n_bd, cfg.tol, seed=seed)
    elif command == "growth":
        records += growth_records(f, cfg.radii or DEFAULT_GROWTH_RADII, cfg.samples, cfg.h_samples, seed=seed)
    elif command == "suite":
        records += suite_records(cfg)
    status = 0 if all(r["passed"] for r in records) else 1
    return status, records
