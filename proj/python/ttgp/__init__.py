"""Tensor-train Gaussian process hyperparameter training."""

import json

from ._ttgp import DomainError, TTTensor
from . import _ttgp

__all__ = [
    "DomainError",
    "TTTensor",
    "nll",
    "fit",
    "predict_mean",
    "sample_prior",
    "logdet_quadform",
    "solve",
    "run_experiment",
    "params",
]


def params(R, D, sigma_f=1.0, ell=0.1, noise_sigma=0.01):
    """Uniform hyperparameters as the dict accepted by the other calls."""
    import math

    return {
        "R": R,
        "D": D,
        "log_sigma_f": [math.log(sigma_f)] * R,
        "log_ell": [[math.log(ell)] * D for _ in range(R)],
        "noise_sigma": noise_sigma,
    }


def _dump(obj):
    return obj if isinstance(obj, str) else json.dumps(obj)


def nll(points, theta, y, options=None, with_gradient=True):
    """(value, gradient) of the stochastic negative log-likelihood."""
    return _ttgp.nll(points, _dump(theta), y, _dump(options or {}), with_gradient)


def fit(points, theta, y, options=None):
    return json.loads(_ttgp.fit(points, _dump(theta), y, _dump(options or {})))


def predict_mean(train, test, theta, y, options=None):
    return _ttgp.predict_mean(train, test, _dump(theta), y, _dump(options or {}))


def sample_prior(points, theta, sigma, seed):
    return _ttgp.sample_prior(points, _dump(theta), sigma, seed)


def logdet_quadform(points, theta, z, kryltol=1e-6, maxit=50):
    return _ttgp.logdet_quadform(points, _dump(theta), z, kryltol, maxit)


def solve(points, theta, b, tol=1e-6):
    return _ttgp.solve(points, _dump(theta), b, tol)


def run_experiment(config):
    return json.loads(_ttgp.run_experiment(_dump(config)))
