"""
Fixed Talbot contour inversion.

The contour s(theta) = r theta (cot theta + i), theta in (-pi, pi), r = scale * 2 M / (5 t),
is discretised with the trapezoidal rule on M nodes.
"""

from typing import Tuple

import numpy as np

from fraccomp.laplace.transforms import FCTransform

EPS = np.finfo(float).eps


def talbot_nodes(ts: np.ndarray, nodes: int, scale: float,
                 symmetric: bool) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """
    Contour points and weights for each time.

    :param ts: Times, shape (n,).
    :param nodes: Number of nodes M.
    :param scale: Contour scale.
    :param symmetric: Use theta_k for k = -(M-1)..M-1 instead of k = 0..M-1.
    :return: Tuple (s of shape (n, K), d s / d theta factor (1 + i sigma) of shape (K,), r of shape (n,)).
    """
    r = scale * 2.0 * nodes / (5.0 * ts)
    k = np.arange(-(nodes - 1), nodes) if symmetric else np.arange(nodes)
    theta = k * np.pi / nodes
    nonzero = theta != 0
    th = np.where(nonzero, theta, 1.0)
    cot = np.where(nonzero, 1.0 / np.tan(th), 0.0)
    shape = np.where(nonzero, th * cot, 1.0)
    sigma = np.where(nonzero, th + (th * cot - 1.0) * cot, 0.0)
    s = r[:, None] * (shape + 1j * theta)[None, :]

    return s, 1.0 + 1j * sigma, r


def talbot_sum(transform: FCTransform, ts: np.ndarray, nodes: int, scale: float) -> Tuple[np.ndarray, np.ndarray]:
    """
    Talbot approximation of the inverse at all times, with a rounding error estimate.

    :param transform: Transform to invert.
    :param ts: Positive times, shape (n,).
    :param nodes: Number of nodes M.
    :param scale: Contour scale.
    :return: Tuple (values, rounding error estimates), both shape (n,). Values are complex
             if the transform is complex valued, real otherwise.
    """
    symmetric = transform.complex_valued
    s, dz, r = talbot_nodes(ts, nodes, scale, symmetric)
    with np.errstate(over="ignore", invalid="ignore", divide="ignore", under="ignore"):
        summands = np.exp(ts[:, None] * s) * np.asarray(transform(s), dtype=complex) * dz[None, :]
        if symmetric:
            values = (r / (2.0 * nodes)) * summands.sum(axis=1)
        else:
            summands[:, 0] *= 0.5
            values = (r / nodes) * summands.real.sum(axis=1)
        error = EPS * np.max(np.abs(summands), axis=1) * (r / nodes)

    return values, error


def outside_contour(poles: np.ndarray, r: np.ndarray) -> np.ndarray:
    """
    Whether poles lie right of the Talbot contour s(theta) = r theta (cot theta + i).
    Missing poles (nan) count as enclosed.

    """
    poles = np.asarray(poles, dtype=complex)
    with np.errstate(invalid="ignore", divide="ignore"):
        theta = poles.imag / r
        beyond = np.abs(theta) >= np.pi
        th = np.where(beyond | (theta == 0), 0.5, theta)
        edge = np.where(theta == 0, r, r * th / np.tan(th))
        return beyond | (poles.real > edge)
