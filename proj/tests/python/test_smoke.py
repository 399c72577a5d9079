import math

import numpy as np
import pytest

import ttgp


def grid(n, d):
    return [list(np.linspace(-1.0, 1.0, n)) for _ in range(d)]


def dense_kernel(points, theta):
    k = 0.0
    for r in range(theta["R"]):
        f = None
        for d, x in enumerate(points):
            x = np.asarray(x)
            ell = math.exp(theta["log_ell"][r][d])
            m = np.exp(-0.5 * (x[:, None] - x[None, :]) ** 2 / ell**2)
            if d == 0:
                m = m * math.exp(2 * theta["log_sigma_f"][r])
            f = m if f is None else np.kron(f, m)
        k = k + f
    return k + theta["noise_sigma"] ** 2 * np.eye(k.shape[0])


def test_tensor_round_trip():
    a = np.random.default_rng(0).standard_normal((3, 4, 5))
    t = ttgp.TTTensor.from_array(a)
    assert t.shape == [3, 4, 5]
    assert t.ranks[0] == 1 and t.ranks[-1] == 1
    np.testing.assert_allclose(t.to_array(), a, atol=1e-12)
    assert t.norm() == pytest.approx(np.linalg.norm(a))
    np.testing.assert_allclose((t + t * 2.0).to_array(), 3 * a, atol=1e-12)


def test_solve_matches_numpy():
    pts = grid(5, 2)
    theta = ttgp.params(2, 2, ell=0.5, noise_sigma=0.1)
    b = np.random.default_rng(1).standard_normal((5, 5))
    x, res, ok = ttgp.solve(pts, theta, ttgp.TTTensor.from_array(b), tol=1e-10)
    assert ok and res <= 1e-10
    ref = np.linalg.solve(dense_kernel(pts, theta), b.ravel())
    np.testing.assert_allclose(x.to_array().ravel(), ref, rtol=1e-7, atol=1e-9)


def test_logdet_quadform_matches_numpy():
    pts = grid(4, 2)
    theta = ttgp.params(1, 2, ell=0.7, noise_sigma=0.1)
    z = np.ones((4, 4))
    q = ttgp.logdet_quadform(pts, theta, ttgp.TTTensor.from_array(z), kryltol=1e-12)
    w, v = np.linalg.eigh(dense_kernel(pts, theta))
    ref = z.ravel() @ (v @ np.diag(np.log(w)) @ v.T) @ z.ravel()
    assert q == pytest.approx(ref, rel=1e-8)


def test_nll_gradient_matches_finite_difference():
    pts = grid(4, 2)
    theta = ttgp.params(1, 2, ell=0.5, noise_sigma=0.1)
    y = ttgp.TTTensor.from_array(np.random.default_rng(2).standard_normal((4, 4)))
    opts = {"probes": 3, "kryltol": 1e-12, "amentol": 1e-12, "trunctol": 1e-13, "seed": 4}
    f, g = ttgp.nll(pts, theta, y, opts)
    h = 1e-5
    up = dict(theta, log_sigma_f=[theta["log_sigma_f"][0] + h])
    dn = dict(theta, log_sigma_f=[theta["log_sigma_f"][0] - h])
    fd = (ttgp.nll(pts, up, y, opts, False)[0] - ttgp.nll(pts, dn, y, opts, False)[0]) / (2 * h)
    assert len(g) == 3
    assert g[0] == pytest.approx(fd, rel=1e-5)


def test_bad_options_raise():
    pts = grid(3, 2)
    y = ttgp.TTTensor.from_array(np.zeros((3, 3)))
    with pytest.raises(ValueError):
        ttgp.nll(pts, ttgp.params(1, 2), y, {"nonsense": 1})


def test_small_experiment_report():
    rep = ttgp.run_experiment({"kind": "trig", "n": 5, "probe_counts": [2], "max_iter": 3, "slice_index": 1})
    run = rep["runs"][0]
    assert run["p"] == 2
    assert run["error_opt"] <= run["error_init"] * 1.0001
