"""End-to-end pipeline runs, convergence and tangent studies, and the
closed-form sphere verification battery."""

import time
from dataclasses import dataclass, field, replace

import numpy as np

from .bounds import (BoundConstants, heat_lower_diag, rate_exponents,
                     star_check)
from .embedding import (EmbeddedCloud, EmbeddingParams, embed_points,
                        embedding_error, select_diffusion_time,
                        select_eps_prime)
from .geometry import (local_reach_numeric, s2_embedding_norm_sq,
                       s2_harmonics, s2_heat_kernel, s2_oracle_embedding,
                       s2_oracle_tangent, s2_tail_sum, sample_sphere,
                       sample_torus)
from .graph import system_from_cloud
from .io import RUN_FIELDS, read_kv
from .spectral import eigen_errors, eigensolve_smallest, subspace_align
from .tangent import (TangentConfig, estimate_tangents, subsample_size,
                      subspace_angle, tangent_bandwidth)

REACH_S2 = 0.646924          # curvature-sweep radius of the degree<=2 map
TAIL_CUTOFF = 50             # truncation index for spectral tail sums


@dataclass
class ExperimentConfig:
    manifold: str = "sphere"
    d: int = 2
    k: int = 3
    t0: float = 0.25
    m: int = 8
    eps: float = 0.05
    gap_tol: float = 0.25
    kappa: float = 0.0
    iota: float = np.pi
    n_grid: tuple = (500, 1000, 2000, 4000)
    seeds: tuple = (1, 2, 3, 4, 5)
    ntilde_grid: tuple = (250, 500, 1000, 2000)
    torus_R: float = 2.0
    torus_r: float = 1.0
    min_subsample: int = 10
    tangent_bandwidth_const: float = 1.0
    tangent_t_cap: float = None
    tangent_max_iter: int = 20
    study_max_iter: int = 100
    tangent_tol: float = 1e-8
    output_dir: str = "."
    constants: BoundConstants = field(default_factory=BoundConstants)

    def __post_init__(self):
        if self.manifold not in ("sphere", "torus"):
            raise ValueError("manifold must be 'sphere' or 'torus'")
        if not self.n_grid or not self.seeds:
            raise ValueError("n_grid and seeds must be nonempty")
        if self.manifold == "torus" and not 0 < self.torus_r < self.torus_R:
            raise ValueError("torus radii must satisfy 0 < r < R")

    def tangent_config(self, max_iter=None):
        return TangentConfig(
            k=self.k, bandwidth_const=self.tangent_bandwidth_const,
            t_cap=self.tangent_t_cap,
            max_iter=self.tangent_max_iter if max_iter is None else max_iter,
            tol=self.tangent_tol)


# key -> (type tag, attribute); lists are comma separated in config files
_CONFIG_KEYS = {
    "manifold": ("str", "manifold"),
    "d": ("int", "d"),
    "k": ("int", "k"),
    "t0": ("float", "t0"),
    "m": ("int", "m"),
    "eps": ("float", "eps"),
    "gap_tol": ("float", "gap_tol"),
    "kappa": ("float", "kappa"),
    "iota": ("float", "iota"),
    "n_grid": ("int_list", "n_grid"),
    "seeds": ("int_list", "seeds"),
    "ntilde_grid": ("int_list", "ntilde_grid"),
    "torus_R": ("float", "torus_R"),
    "torus_r": ("float", "torus_r"),
    "min_subsample": ("int", "min_subsample"),
    "tangent_bandwidth_const": ("float", "tangent_bandwidth_const"),
    "tangent_t_cap": ("opt_float", "tangent_t_cap"),
    "tangent_max_iter": ("int", "tangent_max_iter"),
    "study_max_iter": ("int", "study_max_iter"),
    "tangent_tol": ("float", "tangent_tol"),
    "output_dir": ("str", "output_dir"),
    "C1": ("opt_float", None),
    "C2": ("opt_float", None),
    "C_alpha2": ("opt_float", None),
    "C_d_diam": ("opt_float", None),
    "C1_eigen": ("opt_float", None),
}


def _parse_value(kind, raw, path, lineno):
    try:
        if kind == "int":
            return int(raw)
        if kind == "float":
            return float(raw)
        if kind == "opt_float":
            return None if raw in ("", "none", "auto", "unknown") \
                else float(raw)
        if kind == "int_list":
            return tuple(int(tok) for tok in raw.split(",") if tok.strip())
        return raw
    except ValueError:
        raise ValueError("%s line %d: cannot parse %r as %s"
                         % (path, lineno, raw, kind))


def load_config(path):
    """Build an ExperimentConfig from a key=value file; unknown keys are
    rejected with their line number."""
    kwargs = {}
    consts = {}
    for lineno, key, raw in read_kv(path):
        if key not in _CONFIG_KEYS:
            raise ValueError("%s line %d: unknown config key %r"
                             % (path, lineno, key))
        kind, attr = _CONFIG_KEYS[key]
        val = _parse_value(kind, raw, path, lineno)
        if attr is None:
            consts[key] = val
        else:
            kwargs[attr] = val
    if consts:
        kwargs["constants"] = replace(BoundConstants(), **consts)
    return ExperimentConfig(**kwargs)


@dataclass
class RunRecord:
    n: int
    seed: int
    h: float = np.nan
    t: float = np.nan
    m: int = 0
    eigenvalue_errors: list = field(default_factory=list)
    eigenvector_sup_errors: list = field(default_factory=list)
    embedding_error: float = np.nan
    tangent_angle_median: float = np.nan
    tangent_angle_max: float = np.nan
    first_cluster_mean: float = np.nan
    pattern_matched: bool = False
    status: str = "ok"
    wall_time: float = 0.0


assert set(RUN_FIELDS) == set(RunRecord.__dataclass_fields__)


def sphere_truth(points, m=8):
    """Exact Laplacian eigenvalues (with multiplicity) and eigenfunction
    columns for S^2 up to index m <= 8."""
    if not 0 <= m <= 8:
        raise ValueError("sphere truth is tabulated for m <= 8")
    lam = np.array([0.0, 2, 2, 2, 6, 6, 6, 6, 6])[:m + 1]
    n = points.shape[0]
    cols = np.empty((n, m + 1))
    cols[:, 0] = 1.0 / np.sqrt(4.0 * np.pi)
    if m >= 1:
        cols[:, 1:] = s2_harmonics(points)[:, :m]
    return lam, cols


def truth_clusters(lam):
    """Coordinate clusters of the embedding (constant mode dropped) from
    the exact eigenvalue pattern."""
    groups = []
    for i, v in enumerate(lam[1:]):
        if groups and abs(v - lam[groups[-1][-1] + 1]) <= 1e-9:
            groups[-1].append(i)
        else:
            groups.append([i])
    return groups


def _sample(cfg, n, seed):
    if cfg.manifold == "sphere":
        return sample_sphere(n, cfg.d, seed)
    return sample_torus(n, cfg.torus_R, cfg.torus_r, seed)


def run_pipeline(cfg, n, seed):
    """One full pass: sample -> graph Laplacian -> eigenpairs -> spectral
    embedding -> tangent fits, with sphere ground truth when available.

    Failures are reported through the record's status field as
    'stage: message'; later fields keep their NaN defaults.
    """
    rec = RunRecord(n=n, seed=seed, m=cfg.m)
    start = time.perf_counter()
    stage = "sample"
    try:
        if n > 2 * 10 ** 4:
            raise ValueError("dense pipeline is capped at n = 20000")
        cloud = _sample(cfg, n, seed)

        stage = "laplacian"
        system = system_from_cloud(cloud)
        rec.h = system.h

        stage = "eigen"
        spec = eigensolve_smallest(system, cfg.m, gap_tol=cfg.gap_tol)
        if len(spec.clusters) > 1:
            rec.first_cluster_mean = float(np.mean(spec.mu[spec.clusters[1]]))

        oracle = cfg.manifold == "sphere" and cfg.d == 2 and cfg.m <= 8
        if oracle:
            stage = "eigen-errors"
            lam, cols = sphere_truth(cloud.points, cfg.m)
            report = eigen_errors(spec, lam, cols)
            rec.eigenvalue_errors = report.value_errors
            rec.eigenvector_sup_errors = report.vector_sup_errors
            rec.pattern_matched = report.pattern_matched

        stage = "embed"
        t = select_diffusion_time(cfg.t0, cfg.iota)
        rec.t = t
        params = EmbeddingParams(
            t=t, m=cfg.m, eps=cfg.eps,
            eps_prime=select_eps_prime(t, cfg.d, cfg.kappa),
            d=cfg.d, kappa=cfg.kappa, iota=cfg.iota)
        est = embed_points(spec, params, provenance=(n, system.h, seed))

        rotations = None
        if oracle:
            stage = "embed-errors"
            lam, _ = sphere_truth(cloud.points, cfg.m)
            clusters = truth_clusters(lam)
            target = s2_oracle_embedding(cloud.points, t)[:, :cfg.m]
            rec.embedding_error = embedding_error(est.points, target,
                                                  clusters)
            rotations = [(g, subspace_align(est.points[:, g],
                                            target[:, g])[0])
                         for g in clusters]

        stage = "tangent"
        size = subsample_size(n, cfg.d, cfg.k, cfg.min_subsample).size
        rng = np.random.default_rng((seed, n, 17))
        pick = np.sort(rng.choice(n, size=size, replace=False))
        sub = EmbeddedCloud(est.points[pick], params)
        tcfg = cfg.tangent_config()
        h_tilde = tangent_bandwidth(size, cfg.d, tcfg)
        batch = estimate_tangents(sub, range(size), tcfg, h_tilde)
        if batch.errors:
            k0 = min(batch.errors)
            raise ValueError("%d of %d fits failed; first: %s"
                             % (len(batch.errors), size, batch.errors[k0]))
        if rotations is not None:
            stage = "tangent-errors"
            # map oracle-frame tangent bases into the estimate's frame by
            # the per-cluster rotations found during embedding alignment
            angles = []
            for j, idx in enumerate(pick):
                truth = s2_oracle_tangent(cloud.points[idx], t).basis
                mapped = np.empty_like(truth)
                for g, Q in rotations:
                    mapped[g] = Q @ truth[g]
                angles.append(subspace_angle(batch.fits[j].basis, mapped))
            rec.tangent_angle_median = float(np.median(angles))
            rec.tangent_angle_max = float(np.max(angles))
    except (ValueError, RuntimeError) as err:
        rec.status = "%s: %s" % (stage, err)
    rec.wall_time = time.perf_counter() - start
    return rec


@dataclass
class StudyResult:
    rows: list                 # dicts with per-n medians
    slopes: dict               # metric -> fitted log-log slope
    exponents: object          # RateExponents for (d, k)
    records: list              # every underlying RunRecord


_STUDY_METRICS = ("eigenvalue_error", "eigenvector_sup_error",
                  "embedding_error", "tangent_angle")


def convergence_study(cfg):
    """Median errors over seeds for each n, plus least-squares slopes of
    log(error) against log(log n / n) next to the theoretical exponents."""
    if len(cfg.n_grid) < 3:
        raise ValueError("need at least 3 grid sizes to fit a slope")
    records, rows = [], []
    for n in cfg.n_grid:
        per_seed = [run_pipeline(cfg, n, s) for s in cfg.seeds]
        records.extend(per_seed)
        good = [r for r in per_seed if r.status == "ok"]
        if not good:
            raise RuntimeError("all seeds failed at n=%d: %s"
                               % (n, per_seed[0].status))
        rows.append({
            "n": n,
            "runs": len(good),
            "eigenvalue_error": float(np.median(
                [r.eigenvalue_errors[1] for r in good])),
            "eigenvector_sup_error": float(np.median(
                [r.eigenvector_sup_errors[1] for r in good])),
            "embedding_error": float(np.median(
                [r.embedding_error for r in good])),
            "tangent_angle": float(np.median(
                [r.tangent_angle_max for r in good])),
            "first_cluster_mean": float(np.median(
                [r.first_cluster_mean for r in good])),
        })
    x = np.log([np.log(r["n"]) / r["n"] for r in rows])
    slopes = {key: float(np.polyfit(x, np.log([r[key] for r in rows]), 1)[0])
              for key in _STUDY_METRICS}
    return StudyResult(rows=rows, slopes=slopes,
                       exponents=rate_exponents(cfg.d, cfg.k),
                       records=records)


def format_convergence(result):
    lines = ["n      runs  eig_err     vec_sup     embed_err   tan_angle"
             "   first_cluster"]
    for r in result.rows:
        lines.append("%-6d %-5d %-11.4e %-11.4e %-11.4e %-11.4e %-.6f"
                     % (r["n"], r["runs"], r["eigenvalue_error"],
                        r["eigenvector_sup_error"], r["embedding_error"],
                        r["tangent_angle"], r["first_cluster_mean"]))
    ex = result.exponents
    theo = {"eigenvalue_error": ex.eigenvalue_rate,
            "eigenvector_sup_error": ex.eigenvector_rate,
            "embedding_error": ex.embedding_rate,
            "tangent_angle": ex.tangent_rate}
    lines.append("slopes of log(err) vs log(log n / n):")
    for key in _STUDY_METRICS:
        lines.append("  %-22s fitted %+.4f   theoretical %+.6f"
                     % (key, result.slopes[key], theo[key]))
    return "\n".join(lines)


@dataclass
class CheckResult:
    name: str
    value: float
    target: str
    passed: bool               # None marks a skipped check


@dataclass
class VerifyReport:
    t0: float
    m: int
    eps: float
    checks: list

    @property
    def ok(self):
        return all(c.passed is not False for c in self.checks)


def verify_s2(t0=0.25, m=8, eps=0.05):
    """Closed-form battery for the truncated S^2 spectral map.

    Checks: (a) near-isometric directional norm, (b) spectral tail below
    the truncation budget, (c) the flat-case budget identity 1/(32 pi t0),
    (d) curvature-sweep radius of the image surface, (e) the radius
    inequality protecting the first-order chart, (f) the truncated kernel
    against the flat on-diagonal value.  (d) and (e) depend on a
    sweep constant pinned at t0 = 0.25 and are skipped elsewhere.
    """
    if m not in (3, 8):
        raise ValueError("verification supports m = 3 (degree 1) or 8")
    l_embed = 1 if m == 3 else 2
    checks = []

    norm = float(np.sqrt(s2_embedding_norm_sq(t0, l_embed)))
    checks.append(CheckResult(
        "isometry-defect", norm, "in (0.95, 1.05)",
        bool(0.95 < norm < 1.05)))

    eps_prime = select_eps_prime(t0, 2, 0.0)
    tail = s2_tail_sum(t0, l_embed + 1, TAIL_CUTOFF)
    checks.append(CheckResult(
        "spectral-tail", tail, "<= eps' = %.9g" % eps_prime,
        bool(tail <= eps_prime)))

    ident = 1.0 / (32.0 * np.pi * t0)
    checks.append(CheckResult(
        "budget-identity", eps_prime, "== 1/(32 pi t0) = %.9g" % ident,
        bool(abs(eps_prime - ident) <= 1e-12 * ident)))

    if t0 == 0.25:
        # the image of the heat-time-t0 map is this family member at 2 t0
        reach = local_reach_numeric(
            lambda u: s2_oracle_embedding(_chart(u), 2.0 * t0), grid=200)
        checks.append(CheckResult(
            "sweep-radius", reach, "%.6f within 1%%" % REACH_S2,
            bool(abs(reach - REACH_S2) <= 0.01 * REACH_S2)))
        star = star_check(REACH_S2, t0, eps, 2, 0.0, BoundConstants())
        checks.append(CheckResult(
            "radius-inequality", star.lhs, ">= %.9g" % star.rhs,
            bool(star.holds)))
    else:
        checks.append(CheckResult("sweep-radius", np.nan,
                                  "skipped (t0 != 0.25)", None))
        checks.append(CheckResult("radius-inequality", np.nan,
                                  "skipped (t0 != 0.25)", None))

    diag = s2_heat_kernel(t0, 1.0, l_embed)
    flat = heat_lower_diag(t0, 2, 0.0)
    checks.append(CheckResult(
        "kernel-diagonal", abs(diag - flat),
        "|trunc - %.9g| <= eps'" % flat,
        bool(abs(diag - flat) <= eps_prime)))
    return VerifyReport(t0=t0, m=m, eps=eps, checks=checks)


def _chart(u):
    u = np.asarray(u, dtype=float)
    theta, phi = u[..., 0], u[..., 1]
    st = np.sin(theta)
    return np.stack([st * np.cos(phi), st * np.sin(phi), np.cos(theta)],
                    axis=-1)


def format_verify(report):
    lines = ["sphere verification at t0=%g, m=%d, eps=%g"
             % (report.t0, report.m, report.eps)]
    for c in report.checks:
        tag = "skip" if c.passed is None else ("pass" if c.passed
                                               else "FAIL")
        lines.append("  [%s] %-17s value %-14.9g target %s"
                     % (tag, c.name, c.value, c.target))
    lines.append("overall: %s" % ("pass" if report.ok else "FAIL"))
    return "\n".join(lines)


@dataclass
class TangentStudyResult:
    rows: list                 # per-ntilde dicts
    tangent_rate: float
    theoretical_size: float    # exact subsample size at the largest n


def tangent_study(cfg):
    """Tangent-fit accuracy against subsample size on oracle-embedded
    spheres: medians over seeds of the per-run median and max largest
    principal angle."""
    t = select_diffusion_time(cfg.t0, cfg.iota)
    params = EmbeddingParams(t=t, m=cfg.m, eps=cfg.eps,
                             eps_prime=select_eps_prime(t, 2, 0.0),
                             d=2, kappa=0.0, iota=np.pi)
    tcfg = cfg.tangent_config(max_iter=cfg.study_max_iter)
    rows = []
    for nt in cfg.ntilde_grid:
        med, mx = [], []
        for seed in cfg.seeds:
            cloud = sample_sphere(nt, 2, 1_000_003 * seed + nt)
            emb = EmbeddedCloud(
                s2_oracle_embedding(cloud.points, t)[:, :cfg.m], params)
            h_tilde = tangent_bandwidth(nt, 2, tcfg)
            batch = estimate_tangents(emb, range(nt), tcfg, h_tilde)
            if batch.errors:
                k0 = min(batch.errors)
                raise RuntimeError("fit failed at ntilde=%d seed=%d: %s"
                                   % (nt, seed, batch.errors[k0]))
            angles = [subspace_angle(
                batch.fits[i].basis,
                s2_oracle_tangent(cloud.points[i], t).basis)
                for i in range(nt)]
            med.append(np.median(angles))
            mx.append(np.max(angles))
        rows.append({"ntilde": nt,
                     "h_tilde": tangent_bandwidth(nt, 2, tcfg),
                     "median_angle": float(np.median(med)),
                     "max_angle": float(np.median(mx))})
    ex = rate_exponents(cfg.d, cfg.k)
    theo = subsample_size(max(cfg.n_grid), cfg.d, cfg.k,
                          cfg.min_subsample).theoretical
    return TangentStudyResult(rows=rows, tangent_rate=ex.tangent_rate,
                              theoretical_size=theo)


def format_tangent_study(result):
    lines = ["ntilde  h_tilde    median_angle  max_angle(median over seeds)"]
    for r in result.rows:
        lines.append("%-7d %-10.6f %-13.6f %-.6f"
                     % (r["ntilde"], r["h_tilde"], r["median_angle"],
                        r["max_angle"]))
    inv = 1.0 / result.tangent_rate
    note = " (= 1/%d)" % round(inv) if abs(inv - round(inv)) < 1e-9 else ""
    lines.append("theoretical rate exponent: %.9g%s"
                 % (result.tangent_rate, note))
    lines.append("theoretical subsample size at the largest grid n: %.6f"
                 % result.theoretical_size)
    return "\n".join(lines)
