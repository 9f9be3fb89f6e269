import numpy as np
import pytest

from dmaplab.geometry import PointCloud, sample_sphere
from dmaplab.graph import (KernelConfig, ball_counts, bandwidth,
                           build_affinity, gaussian_kernel, laplacian,
                           system_from_cloud)


def test_bandwidth_frozen_values():
    assert bandwidth(1000, 2) == pytest.approx(0.7890622799485141,
                                               abs=1e-15)
    assert bandwidth(10000, 2) == pytest.approx(0.716872134125873,
                                                abs=1e-15)


def test_bandwidth_decreasing_in_n():
    hs = [bandwidth(n, 2) for n in (100, 1000, 10000, 100000)]
    assert all(a > b for a, b in zip(hs, hs[1:]))


def test_bandwidth_needs_three_points():
    with pytest.raises(ValueError):
        bandwidth(2, 2)


def test_kernel_config_validation():
    KernelConfig(h=0.5, n=10, d=2)
    with pytest.raises(ValueError):
        KernelConfig(h=0.0, n=10, d=2)
    with pytest.raises(ValueError):
        KernelConfig(h=0.5, n=1, d=2)


def test_gaussian_kernel_values():
    x = np.array([0.0, 0.0])
    y = np.array([1.0, 0.0])
    assert gaussian_kernel(x, x, 0.3) == 1.0
    assert gaussian_kernel(x, y, 0.5) == pytest.approx(np.exp(-1.0),
                                                       rel=1e-14)
    assert gaussian_kernel(x, y, 0.5) == gaussian_kernel(y, x, 0.5)
    with pytest.raises(ValueError):
        gaussian_kernel(x, np.zeros(3), 0.5)


def test_build_affinity_density_normalization():
    cloud = sample_sphere(40, 2, 1)
    h = 0.8
    W, q = build_affinity(cloud, h)
    assert W.shape == (40, 40)
    assert np.allclose(W, W.T, atol=1e-15)
    assert np.all(W > 0)
    # recompute one entry by hand
    K01 = gaussian_kernel(cloud.points[0], cloud.points[1], h)
    assert W[0, 1] == pytest.approx(K01 / (q[0] * q[1]), rel=1e-12)
    # self terms are kept, so q exceeds the off-diagonal mass alone
    assert np.all(q > 0)


def test_laplacian_annihilates_constants():
    cloud = sample_sphere(150, 2, 2)
    system = system_from_cloud(cloud)
    ones = np.ones(cloud.n)
    assert np.max(np.abs(system.L @ ones)) <= 1e-12


def test_laplacian_three_equidistant_points():
    # any three pairwise-equidistant points give the all-ones affinity up
    # to scale; -L then has eigenvalues {0, 1/h^2, 1/h^2}
    h = 0.7
    system = laplacian(np.ones((3, 3)), h)
    vals = np.sort(np.linalg.eigvalsh(-(system.L + system.L.T) / 2.0))
    assert vals[0] == pytest.approx(0.0, abs=1e-14)
    assert np.allclose(vals[1:], 1.0 / h ** 2, rtol=1e-12)


def test_laplacian_rejects_bad_affinity():
    with pytest.raises(ValueError):
        laplacian(np.arange(9.0).reshape(3, 3), 0.5)   # asymmetric
    bad = np.ones((3, 3))
    bad[1, 1] = 0.0
    with pytest.raises(ValueError):
        laplacian(bad, 0.5)                            # dead diagonal
    with pytest.raises(ValueError):
        laplacian(np.ones((3, 3)), 0.0)                # zero bandwidth


def test_ball_counts_strict_inequality():
    h = 0.5
    pts = np.array([[0.0, 0.0], [h, 0.0], [0.0, 0.2]])
    cloud = PointCloud(points=pts, d=1, ambient_dim=2, seed=0)
    counts = ball_counts(cloud, h)
    # the pair at distance exactly h must not see each other
    assert counts.tolist() == [2, 1, 2]


def test_ball_counts_scale_with_density():
    cloud = sample_sphere(600, 2, 3)
    counts = ball_counts(cloud, 0.4)
    assert counts.min() >= 1
    # roughly n * (cap area / total area); just check the right ballpark
    frac = 0.25 * 0.4 ** 2          # (h/2)^2, cap fraction for small h
    assert counts.mean() > 600 * frac * 0.5


def test_system_from_cloud_wiring():
    cloud = sample_sphere(80, 2, 4)
    system = system_from_cloud(cloud)
    assert system.h == pytest.approx(bandwidth(80, 2), rel=1e-15)
    assert system.n == 80
    assert system.d == 2
    assert system.ball_counts is not None
    assert np.all(system.degree > 0)
    # explicit bandwidth is honoured
    other = system_from_cloud(cloud, h=0.9)
    assert other.h == 0.9


def test_system_deterministic():
    a = system_from_cloud(sample_sphere(60, 2, 9))
    b = system_from_cloud(sample_sphere(60, 2, 9))
    assert np.array_equal(a.L, b.L)
    assert np.array_equal(a.ball_counts, b.ball_counts)
