"""
Hyperbolic contour inversion for transforms bounded in a sector |arg s| <= beta wider than the
right half-plane.

The contour s(u) = mu (1 + sin(i u - a)), u real, crosses the real axis at mu (1 - sin a) and
opens to the left with asymptotic angle pi/2 + a. Moving u into the strip |Im u| < d sweeps the
hyperbolas with angles pi/2 + a -/+ d, so the trapezoidal rule in u converges like
exp(-2 pi d / h) as long as all of them stay inside the sector. Transforms of the form
G(s) exp(-x Psi(s)) with every order nu_i < 1 are bounded for |arg s| <= pi / (2 max nu_i),
which is where the fixed Talbot contour fails.
"""

import math
from typing import Tuple

import numpy as np

from fraccomp.laplace.transforms import FCTransform
from fraccomp.util.constants import *
from fraccomp.util.errors import ContourFailure

EPS = np.finfo(float).eps


def sector_angle(max_order: float) -> float:
    """
    Half-angle of the sector where exp(-x Psi) stays bounded, capped at the branch cut.

    """
    return min(math.pi / (2.0 * max_order), math.pi) if max_order > 0 else math.pi


def hyperbola_parameters(beta: float) -> Tuple[float, float, int]:
    """
    Opening a, step h and one-sided node count n of the contour for a sector of half-angle beta.

    :param beta: Sector half-angle, pi/2 < beta <= pi.
    :return: Tuple (a, h, n).
    """
    opening = beta - 0.5 * math.pi
    if not opening > 0:
        raise ContourFailure(f"No hyperbolic contour fits a sector of half-angle {beta:.6g}.")

    lower, upper = HYPERBOLA_SECTOR_LOWER * opening, HYPERBOLA_SECTOR_UPPER * opening
    a = 0.5 * (lower + upper)
    h = 2.0 * math.pi * 0.5 * (upper - lower) / HYPERBOLA_DECAY
    u_max = math.acosh((HYPERBOLA_MU_T + HYPERBOLA_DECAY) / (HYPERBOLA_MU_T * math.sin(a)))
    n = int(math.ceil(u_max / h))
    if n > HYPERBOLA_MAX_NODES:
        raise ContourFailure(f"Hyperbolic contour for half-angle {beta:.6g} needs {n} nodes, "
                             f"more than {HYPERBOLA_MAX_NODES}.")

    return a, h, n


def hyperbola_sum(transform: FCTransform, ts: np.ndarray, beta: float) -> Tuple[np.ndarray, np.ndarray, int]:
    """
    Trapezoidal sum of the Bromwich integral on the hyperbola fitted to the sector.

    :param transform: Transform bounded for |arg s| <= beta, evaluated on arrays of shape (n, K).
    :param ts: Positive times, shape (n,).
    :param beta: Sector half-angle.
    :return: Tuple (values, rounding and truncation error estimates, one-sided node count).
    """
    a, h, n = hyperbola_parameters(beta)
    symmetric = transform.complex_valued
    k = np.arange(-n, n + 1) if symmetric else np.arange(n + 1)
    w = 1j * k * h - a
    mu = HYPERBOLA_MU_T / ts
    s = mu[:, None] * (1.0 + np.sin(w))[None, :]
    ds = np.cos(w)

    with np.errstate(over="ignore", invalid="ignore", divide="ignore", under="ignore"):
        summands = np.exp(ts[:, None] * s) * np.asarray(transform(s), dtype=complex) * ds[None, :]
        factor = h * mu / (2.0 * math.pi)
        if symmetric:
            values = factor * summands.sum(axis=1)
            tail = np.abs(summands[:, 0]) + np.abs(summands[:, -1])
        else:
            summands[:, 0] *= 0.5
            values = 2.0 * factor * summands.real.sum(axis=1)
            tail = 2.0 * np.abs(summands[:, -1])
        error = factor * (EPS * np.abs(summands).sum(axis=1) + tail)

    return values, error, n
