import numpy as np
import pytest

from dmaplab.geometry import (PointCloud, s2_oracle_embedding,
                              s2_oracle_tangent, sample_sphere)
from dmaplab.tangent import (TangentConfig, estimate_tangents,
                             fit_local_polynomial, monomial_exponents,
                             subsample_size, subspace_angle,
                             tangent_bandwidth)


def test_subsample_size_values():
    res = subsample_size(10 ** 6, 2, 3)
    assert res.theoretical == pytest.approx(1.333521432163324, rel=1e-14)
    assert res.size == 10                      # clamped to the floor
    assert subsample_size(10 ** 6, 2, 3, min_size=25).size == 25
    # a gigantic n finally pushes the raw value above the clamp
    big = subsample_size(10 ** 60, 2, 3)
    assert big.size == int(big.theoretical)
    with pytest.raises(ValueError):
        subsample_size(1, 2, 3)


def test_tangent_bandwidth_value():
    cfg = TangentConfig()
    assert tangent_bandwidth(1000, 2, cfg) == pytest.approx(
        0.294775007852158, rel=1e-14)
    # decreasing in the effective sample size
    assert tangent_bandwidth(4000, 2, cfg) < tangent_bandwidth(1000, 2, cfg)
    with pytest.raises(ValueError):
        tangent_bandwidth(2, 2, cfg)


def test_tangent_config_validation():
    with pytest.raises(ValueError):
        TangentConfig(k=1)
    with pytest.raises(ValueError):
        TangentConfig(max_iter=0)
    with pytest.raises(ValueError):
        TangentConfig(f_min=0.0)


def test_monomial_exponents():
    e2 = monomial_exponents(2, [2])
    assert [x for _, x in e2] == [(2, 0), (1, 1), (0, 2)]
    assert len(monomial_exponents(3, [2])) == 6
    assert len(monomial_exponents(2, [2, 3])) == 3 + 4
    assert all(sum(x) == l for l, x in monomial_exponents(2, [2, 3]))


def test_exact_plane_recovered():
    rng = np.random.default_rng(0)
    U = np.linalg.qr(rng.normal(size=(5, 2)))[0]
    coords = rng.uniform(-1, 1, size=(120, 2))
    cloud = PointCloud(points=coords @ U.T, d=2, ambient_dim=5, seed=0)
    fit = fit_local_polynomial(cloud, 0, 0.8, TangentConfig(k=3))
    assert subspace_angle(fit.basis, U) < 1e-10


def test_circle_curvature_coefficient():
    s = np.linspace(0, 2 * np.pi, 200, endpoint=False)
    pts = np.stack([np.cos(s), np.sin(s)], axis=1)
    cloud = PointCloud(points=pts, d=1, ambient_dim=2, seed=0)
    fit = fit_local_polynomial(cloud, 0, 0.3, TangentConfig(k=3))
    true_tan = np.array([[0.0], [1.0]])
    assert subspace_angle(fit.basis, true_tan) < 0.01
    # the degree-2 row is the half-curvature vector
    coeff = np.linalg.norm(fit.tensors[2][0])
    assert abs(coeff - 0.5) <= 0.05


def test_sphere_embedding_median_angle():
    n = 800
    cloud = sample_sphere(n, 2, 3)
    emb = s2_oracle_embedding(cloud.points, 0.25)
    carrier = PointCloud(points=emb, d=2, ambient_dim=8, seed=3)
    cfg = TangentConfig(k=3, max_iter=100)
    batch = estimate_tangents(carrier, range(0, n, 8), cfg,
                              tangent_bandwidth(n, 2, cfg))
    assert not batch.errors
    angles = [subspace_angle(fit.basis,
                             s2_oracle_tangent(cloud.points[i], 0.25).basis)
              for i, fit in batch.fits.items()]
    assert np.median(angles) < 0.2
    assert all(0.0 <= a <= 1.0 for a in angles)


def test_fit_reports_thin_neighborhoods():
    pts = np.array([[0.0, 0.0, 0.0], [5.0, 0.0, 0.0], [0.0, 5.0, 0.0],
                    [9.0, 9.0, 0.0]])
    cloud = PointCloud(points=pts, d=2, ambient_dim=3, seed=0)
    with pytest.raises(ValueError, match="need at least 3 neighbors"):
        fit_local_polynomial(cloud, 0, 0.5, TangentConfig(k=3))


def test_estimate_tangents_collects_failures():
    pts = np.vstack([np.zeros(3),
                     np.random.default_rng(1).normal(size=(30, 3)) * 0.05
                     + np.array([2.0, 0.0, 0.0])])
    cloud = PointCloud(points=pts, d=2, ambient_dim=3, seed=0)
    batch = estimate_tangents(cloud, [0, 1], TangentConfig(k=3),
                              h_tilde=0.4)
    assert 0 in batch.errors                   # isolated base point
    assert 1 in batch.fits
    assert "neighbors" in batch.errors[0]


def test_subspace_angle_rotated_lines():
    for theta in (0.0, 0.1, 0.5, 1.0, np.pi / 2):
        U = np.array([[1.0], [0.0]])
        V = np.array([[np.cos(theta)], [np.sin(theta)]])
        assert subspace_angle(U, V) == pytest.approx(abs(np.sin(theta)),
                                                     abs=1e-12)


def test_subspace_angle_validation():
    U = np.array([[1.0], [0.0]])
    with pytest.raises(ValueError):
        subspace_angle(U, np.array([[2.0], [0.0]]))    # not orthonormal
    with pytest.raises(ValueError):
        subspace_angle(U, np.eye(3)[:, :1])            # shape mismatch


def test_subspace_angle_range_random():
    rng = np.random.default_rng(4)
    for _ in range(25):
        U = np.linalg.qr(rng.normal(size=(6, 2)))[0]
        V = np.linalg.qr(rng.normal(size=(6, 2)))[0]
        a = subspace_angle(U, V)
        assert 0.0 <= a <= 1.0
        assert a == pytest.approx(subspace_angle(V, U), abs=1e-10)
