"""Command line front end.

Subcommands: sample, laplacian, eigen, embed, tangent, bounds, pipeline,
rates, verify-s2, tangent-study.  Every command prints a human-readable
summary and writes versioned CSV artifacts into --out; the exit code is 0
exactly when all checks requested by the command pass.
"""

import argparse
import os
import sys

import numpy as np

from . import bounds as B
from . import experiments as X
from . import io as dio
from .embedding import (EmbeddedCloud, EmbeddingParams, embed_points,
                        select_diffusion_time, select_eps_prime)
from .geometry import (PointCloud, s2_oracle_embedding, s2_oracle_tangent,
                       sample_sphere)
from .graph import system_from_cloud
from .spectral import eigensolve_smallest
from .tangent import estimate_tangents, subspace_angle, tangent_bandwidth


def _common(p, n_default=None, seed_default=1):
    p.add_argument("--config", metavar="PATH",
                   help="key=value experiment config file")
    p.add_argument("--out", metavar="DIR",
                   help="directory for CSV artifacts (default: config "
                        "output_dir)")
    p.add_argument("--seed", type=int, default=seed_default)
    p.add_argument("--n", type=int, default=n_default)


def _load_cfg(args):
    cfg = X.load_config(args.config) if args.config \
        else X.ExperimentConfig()
    out = args.out if args.out else cfg.output_dir
    os.makedirs(out, exist_ok=True)
    return cfg, out


def _path(out, name):
    return os.path.join(out, name)


def cmd_sample(args):
    cfg, out = _load_cfg(args)
    n = args.n or 500
    cloud = X._sample(cfg, n, args.seed)
    dio.save_cloud(cloud, _path(out, "cloud.csv"))
    radii = np.linalg.norm(cloud.points, axis=1)
    print("sampled %d %s points in R^%d (seed %d)"
          % (cloud.n, cfg.manifold, cloud.ambient_dim, args.seed))
    print("point radii in [%.6f, %.6f]" % (radii.min(), radii.max()))
    print("wrote %s" % _path(out, "cloud.csv"))
    return 0


def cmd_laplacian(args):
    cfg, out = _load_cfg(args)
    n = args.n or 500
    cloud = X._sample(cfg, n, args.seed)
    system = system_from_cloud(cloud)
    dio.save_matrix_coo(system.W, _path(out, "affinity.csv"),
                        drop_tol=1e-12)
    ones = np.ones(n)
    null = float(np.max(np.abs(system.L @ ones)))
    print("n=%d  bandwidth h=%.9g" % (n, system.h))
    print("degrees in [%.6g, %.6g]"
          % (system.degree.min(), system.degree.max()))
    print("max |L 1| = %.3e (constants must be annihilated)" % null)
    print("wrote %s" % _path(out, "affinity.csv"))
    return 0 if null <= 1e-9 else 1


def cmd_eigen(args):
    cfg, out = _load_cfg(args)
    n = args.n or 500
    cloud = X._sample(cfg, n, args.seed)
    system = system_from_cloud(cloud)
    spec = eigensolve_smallest(system, cfg.m, gap_tol=cfg.gap_tol)
    dio.save_eigen(spec, _path(out, "eigen.csv"))
    print("smallest %d eigenvalues of -L at n=%d:" % (cfg.m + 1, n))
    print("  " + "  ".join("%.6f" % v for v in spec.mu))
    print("clusters: %s" % (spec.clusters,))
    print("wrote %s" % _path(out, "eigen.csv"))
    return 0 if spec.mu[0] <= 1e-8 else 1


def cmd_embed(args):
    cfg, out = _load_cfg(args)
    n = args.n or 500
    cloud = X._sample(cfg, n, args.seed)
    system = system_from_cloud(cloud)
    spec = eigensolve_smallest(system, cfg.m, gap_tol=cfg.gap_tol)
    t = select_diffusion_time(cfg.t0, cfg.iota)
    params = EmbeddingParams(t=t, m=cfg.m, eps=cfg.eps,
                             eps_prime=select_eps_prime(t, cfg.d, cfg.kappa),
                             d=cfg.d, kappa=cfg.kappa, iota=cfg.iota)
    emb = embed_points(spec, params, provenance=(n, system.h, args.seed))
    carrier = PointCloud(points=emb.points, d=cfg.d, ambient_dim=cfg.m,
                         seed=args.seed)
    dio.save_cloud(carrier, _path(out, "embedding.csv"))
    norms = np.linalg.norm(emb.points, axis=1)
    print("embedded %d points into R^%d at t=%.6g (eps'=%.6g)"
          % (n, cfg.m, t, params.eps_prime))
    print("coordinate-vector norms in [%.6f, %.6f]"
          % (norms.min(), norms.max()))
    print("wrote %s" % _path(out, "embedding.csv"))
    return 0


def cmd_tangent(args):
    """Tangent fits on a clean oracle-embedded sphere sample."""
    cfg, out = _load_cfg(args)
    n = args.n or 500
    t = select_diffusion_time(cfg.t0, cfg.iota)
    cloud = sample_sphere(n, 2, args.seed)
    params = EmbeddingParams(t=t, m=cfg.m, eps=cfg.eps,
                             eps_prime=select_eps_prime(t, 2, 0.0),
                             d=2, kappa=0.0, iota=np.pi)
    emb = EmbeddedCloud(s2_oracle_embedding(cloud.points, t)[:, :cfg.m],
                        params)
    tcfg = cfg.tangent_config()
    h_tilde = tangent_bandwidth(n, 2, tcfg)
    batch = estimate_tangents(emb, range(n), tcfg, h_tilde)
    angles = {i: subspace_angle(fit.basis,
                                s2_oracle_tangent(cloud.points[i], t).basis)
              for i, fit in batch.fits.items()}
    fits = [batch.fits[i] for i in sorted(batch.fits)]
    dio.save_tangents(fits, _path(out, "tangents.csv"), angles)
    vals = np.array(list(angles.values()))
    print("tangent fits at %d of %d points (h_tilde=%.6f, k=%d)"
          % (len(fits), n, h_tilde, tcfg.k))
    if batch.errors:
        k0 = min(batch.errors)
        print("failed fits: %d, first at index %d: %s"
              % (len(batch.errors), k0, batch.errors[k0]))
    print("angle to analytic tangent: median %.6f  max %.6f"
          % (np.median(vals), vals.max()))
    print("wrote %s" % _path(out, "tangents.csv"))
    return 0 if not batch.errors else 1


# bound evaluators exposed on the command line: name -> (callable,
# ordered (arg, type) pairs, whether the constants table is appended)
_BOUND_EVALS = {
    "croke_constant": (B.croke_constant, (("d", int),), False),
    "eps_cap": (B.eps_cap, (("d", int),), False),
    "r1_value": (B.r1_value, (("t0", float), ("d", int), ("kappa", float)),
                 False),
    "s1_min": (B.s1_min, (("t0", float), ("d", int), ("kappa", float)),
               True),
    "heat_upper": (B.heat_upper, (("t", float), ("dist", float), ("d", int),
                                  ("kappa", float)), True),
    "heat_lower_diag": (B.heat_lower_diag,
                        (("t", float), ("d", int), ("kappa", float)), False),
    "heat_lower_offdiag": (B.heat_lower_offdiag,
                           (("t", float), ("dist", float), ("d", int),
                            ("kappa", float), ("sigma", float)), False),
    "li_yau_upper": (B.li_yau_upper,
                     (("m", int), ("d", int), ("V", float),
                      ("kappa_neg", float)), False),
    "weyl_estimate": (B.weyl_estimate,
                      (("lam", float), ("d", int), ("V", float)), False),
}


def _eval_bound(expr, consts):
    name, _, argstr = expr.partition(":")
    raw = {}
    for tok in filter(None, argstr.split(",")):
        if "=" not in tok:
            raise ValueError("bad bound argument %r (want key=value)" % tok)
        k, _, v = tok.partition("=")
        raw[k.strip()] = v.strip()
    if name == "star_check":
        inputs = {k: float(raw[k])
                  for k in ("tau_l", "t0", "eps", "d", "kappa")}
        res = B.star_check(inputs["tau_l"], inputs["t0"], inputs["eps"],
                           int(inputs["d"]), inputs["kappa"], consts)
        return [("star_check.lhs", inputs, res.lhs),
                ("star_check.rhs", inputs, res.rhs),
                ("star_check.holds", inputs, float(res.holds))]
    if name == "geodesic_euclid_bounds":
        inputs = {k: float(raw[k]) for k in ("s", "r0")}
        res = B.geodesic_euclid_bounds(inputs["s"], inputs["r0"])
        return [("geodesic_euclid_bounds.lo", inputs, res.lo),
                ("geodesic_euclid_bounds.hi", inputs, res.hi)]
    if name not in _BOUND_EVALS:
        raise ValueError("unknown bound evaluator %r" % name)
    fn, sig, wants_consts = _BOUND_EVALS[name]
    missing = [k for k, _ in sig if k not in raw]
    if missing:
        raise ValueError("%s: missing argument(s) %s"
                         % (name, ", ".join(missing)))
    extra = set(raw) - {k for k, _ in sig}
    if extra:
        raise ValueError("%s: unknown argument(s) %s"
                         % (name, ", ".join(sorted(extra))))
    vals = [typ(float(raw[k])) for k, typ in sig]
    args = vals + [consts] if wants_consts else list(vals)
    return [(name, dict(zip((k for k, _ in sig), vals)), fn(*args))]


_DEFAULT_BOUND_EXPRS = (
    "croke_constant:d=2",
    "croke_constant:d=3",
    "eps_cap:d=1",
    "eps_cap:d=2",
    "r1_value:t0=0.25,d=2,kappa=0",
    "s1_min:t0=0.25,d=2,kappa=0",
    "star_check:tau_l=%.6f,t0=0.25,eps=0.05,d=2,kappa=0" % X.REACH_S2,
    "heat_lower_diag:t=0.25,d=2,kappa=0",
    "heat_upper:t=0.25,dist=0,d=2,kappa=0",
    "li_yau_upper:m=8,d=2,V=%.17g,kappa_neg=0" % (4.0 * np.pi),
    "weyl_estimate:lam=110,d=2,V=%.17g" % (4.0 * np.pi),
    "geodesic_euclid_bounds:s=1,r0=1",
)


def cmd_bounds(args):
    cfg, out = _load_cfg(args)
    exprs = args.expr or list(_DEFAULT_BOUND_EXPRS)
    rows = []
    for expr in exprs:
        rows.extend(_eval_bound(expr, cfg.constants))
    dio.save_bounds_table(rows, _path(out, "bounds.csv"))
    width = max(len(r[0]) for r in rows)
    for name, inputs, value in rows:
        ins = " ".join("%s=%g" % (k, v) for k, v in inputs.items())
        print("%-*s  %-40s  %.9g" % (width, name, ins, value))
    print("wrote %s" % _path(out, "bounds.csv"))
    return 0


def cmd_pipeline(args):
    cfg, out = _load_cfg(args)
    if args.n:
        rec = X.run_pipeline(cfg, args.n, args.seed)
        dio.emit_csv([rec], _path(out, "runs.csv"))
        print(",".join(dio.RUN_FIELDS))
        print(dio.record_row(rec))
        print("wrote %s" % _path(out, "runs.csv"))
        return 0 if rec.status == "ok" else 1
    result = X.convergence_study(cfg)
    dio.emit_csv(result.records, _path(out, "runs.csv"))
    dio.save_table(_path(out, "study.csv"),
                   ("n", "runs", "eigenvalue_error",
                    "eigenvector_sup_error", "embedding_error",
                    "tangent_angle", "first_cluster_mean"),
                   [(r["n"], r["runs"], r["eigenvalue_error"],
                     r["eigenvector_sup_error"], r["embedding_error"],
                     r["tangent_angle"], r["first_cluster_mean"])
                    for r in result.rows])
    print(X.format_convergence(result))
    print("wrote %s and %s"
          % (_path(out, "runs.csv"), _path(out, "study.csv")))
    return 0 if all(r.status == "ok" for r in result.records) else 1


def cmd_rates(args):
    cfg, out = _load_cfg(args)
    d = args.d if args.d is not None else cfg.d
    k = args.k if args.k is not None else cfg.k
    ex = B.rate_exponents(d, k)
    rows = [("eigenvalue_rate", ex.eigenvalue_rate),
            ("eigenvector_rate", ex.eigenvector_rate),
            ("embedding_rate", ex.embedding_rate),
            ("tangent_rate", ex.tangent_rate),
            ("b_star", ex.b_star),
            ("bandwidth_exp", ex.bandwidth_exp)]
    dio.save_table(_path(out, "rates.csv"), ("name", "value"), rows)
    print("rate exponents for d=%d, k=%d (errors scale as "
          "(log n / n)^rate):" % (d, k))
    for name, value in rows:
        print("  %-17s %.9g" % (name, value))
    print("wrote %s" % _path(out, "rates.csv"))
    return 0


def cmd_verify_s2(args):
    cfg, out = _load_cfg(args)
    report = X.verify_s2(t0=args.t0, m=args.m, eps=args.eps)
    dio.save_table(_path(out, "verify.csv"),
                   ("check", "value", "target", "passed"),
                   [(c.name, c.value, c.target.replace(",", ";"),
                     "skip" if c.passed is None else int(c.passed))
                    for c in report.checks])
    print(X.format_verify(report))
    print("wrote %s" % _path(out, "verify.csv"))
    return 0 if report.ok else 1


def cmd_tangent_study(args):
    cfg, out = _load_cfg(args)
    result = X.tangent_study(cfg)
    dio.save_table(_path(out, "tangent_study.csv"),
                   ("ntilde", "h_tilde", "median_angle", "max_angle"),
                   [(r["ntilde"], r["h_tilde"], r["median_angle"],
                     r["max_angle"]) for r in result.rows])
    print(X.format_tangent_study(result))
    print("wrote %s" % _path(out, "tangent_study.csv"))
    return 0


def build_parser():
    ap = argparse.ArgumentParser(
        prog="dmaplab",
        description="Graph-Laplacian spectral embeddings of sampled "
                    "manifolds with geometric bound calculators and a "
                    "closed-form sphere test bed.")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("sample", help="sample a manifold point cloud")
    _common(p)
    p.set_defaults(fn=cmd_sample)

    p = sub.add_parser("laplacian",
                       help="build the graph Laplacian of a fresh sample")
    _common(p)
    p.set_defaults(fn=cmd_laplacian)

    p = sub.add_parser("eigen", help="smallest eigenpairs of -L")
    _common(p)
    p.set_defaults(fn=cmd_eigen)

    p = sub.add_parser("embed", help="spectral embedding coordinates")
    _common(p)
    p.set_defaults(fn=cmd_embed)

    p = sub.add_parser("tangent",
                       help="tangent-plane fits on an oracle-embedded "
                            "sphere sample")
    _common(p)
    p.set_defaults(fn=cmd_tangent)

    p = sub.add_parser("bounds", help="evaluate geometric bounds")
    _common(p)
    p.add_argument("expr", nargs="*",
                   help="evaluator spec name:key=value,...  (default: a "
                        "sphere showcase table)")
    p.set_defaults(fn=cmd_bounds)

    p = sub.add_parser("pipeline",
                       help="full run at --n, or the convergence study "
                            "over the configured grid without --n")
    _common(p)
    p.set_defaults(fn=cmd_pipeline)

    p = sub.add_parser("rates", help="theoretical convergence exponents")
    _common(p)
    p.add_argument("--d", type=int, default=None)
    p.add_argument("--k", type=int, default=None)
    p.set_defaults(fn=cmd_rates)

    p = sub.add_parser("verify-s2",
                       help="closed-form sphere verification battery")
    _common(p)
    p.add_argument("--t0", type=float, default=0.25)
    p.add_argument("--m", type=int, default=8)
    p.add_argument("--eps", type=float, default=0.05)
    p.set_defaults(fn=cmd_verify_s2)

    p = sub.add_parser("tangent-study",
                       help="tangent accuracy against subsample size")
    _common(p)
    p.set_defaults(fn=cmd_tangent_study)
    return ap


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        return args.fn(args)
    except (ValueError, RuntimeError, OSError) as err:
        print("error: %s" % err, file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
