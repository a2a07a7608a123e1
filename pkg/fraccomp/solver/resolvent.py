"""
Time dependence of the transformed space-time problem.

For a frequency with symbol value z = F(gamma), the k-th initial condition enters the solution
through R_k(t, z), the inverse Laplace transform of K_k(mu) / (Psi(mu) - z). It is computed by a
Talbot sum plus the residues exp(mu* t) K_k(mu*) / Psi'(mu*) of the roots mu* of Psi(mu) = z that
lie right of the contour.
"""

import math
from typing import Optional

import numpy as np

from fraccomp.laplace.talbot import outside_contour, talbot_sum
from fraccomp.laplace.transforms import FCTransform, InversionConfig
from fraccomp.subordinator.orders import OrderVector
from fraccomp.util.constants import *
from fraccomp.util.errors import ContourFailure, InvalidParams
from fraccomp.util.logging_config import get_logger

logger = get_logger(__name__)

NEWTON_STEPS = 60
ROOT_TOL = 1e-9


def psi_roots(ov: OrderVector, zs: np.ndarray) -> np.ndarray:
    """
    Roots of Psi(mu) = z on the principal sheet, |arg mu| < pi, for each z.
    Newton iterations start from the roots of every single term lambda_i mu^{nu_i} = z.

    :param ov: Order vector.
    :param zs: Symbol values, shape (n,).
    :return: Roots, shape (n, seeds), nan where a seed did not give a new root.
    """
    zs = np.atleast_1d(np.asarray(zs, dtype=complex))
    seeds = []
    for lam, nu in ov.pairs:
        w = zs / lam
        radius = np.abs(w) ** (1.0 / nu)
        reach = math.ceil(nu) + 1
        for k in range(-reach, reach + 1):
            arg = (np.angle(w) + 2.0 * np.pi * k) / nu
            seeds.append(np.where(np.abs(arg) < np.pi, radius * np.exp(1j * arg), np.nan))
    if not seeds:
        return np.full((zs.size, 0), np.nan, dtype=complex)

    mu = np.stack(seeds, axis=1)
    z = zs[:, None]
    with np.errstate(all="ignore"):
        for _ in range(NEWTON_STEPS):
            step = (ov.psi(mu) - z) / ov.psi_derivative(mu)
            mu = np.where(np.isfinite(step), mu - step, mu)
        residual = np.abs(ov.psi(mu) - z)
        valid = (np.isfinite(mu) & (np.abs(mu) > 0) & (np.abs(np.angle(mu)) < np.pi)
                 & (residual <= ROOT_TOL * (1.0 + np.abs(z))))

    for j in range(1, mu.shape[1]):
        same = np.abs(mu[:, :j] - mu[:, j:j + 1]) <= 1e-8 * np.abs(mu[:, j:j + 1])
        valid[:, j] &= ~np.any(same & valid[:, :j], axis=1)

    return np.where(valid, mu, np.nan)


def resolvent(ov: OrderVector, ts: np.ndarray, zs: np.ndarray, k: int = 0,
              cfg: Optional[InversionConfig] = None) -> np.ndarray:
    """
    R_k(t, z), pointwise over matching arrays of times and symbol values.

    :param ov: Order vector.
    :param ts: Positive times, shape (n,).
    :param zs: Symbol values with Re z <= 0, shape (n,).
    :param k: Index of the initial condition, k < ov.n_conditions.
    :param cfg: Talbot config, run defaults if None.
    :return: Values, complex when any z is complex.
    """
    cfg = InversionConfig.talbot() if cfg is None else cfg
    ts, zs = np.broadcast_arrays(np.atleast_1d(np.asarray(ts, dtype=float)), np.atleast_1d(np.asarray(zs)))
    if np.any(ts <= 0):
        raise InvalidParams("Resolvent times must be > 0.")
    if not 0 <= k < ov.n_conditions:
        raise InvalidParams(f"Initial condition index {k} out of range for {ov.describe()}.")

    complex_valued = bool(np.iscomplexobj(zs) and np.any(np.imag(zs) != 0))
    if ov.probabilistic and not complex_valued:
        roots = np.full((zs.size, 0), np.nan, dtype=complex)
    else:
        roots = psi_roots(ov, zs)
    with np.errstate(all="ignore"):
        weights = ov.boundary_kernel(roots, k) / ov.psi_derivative(roots)

    values = np.full(zs.shape, np.nan, dtype=complex if complex_valued else float)
    pending = np.ones(zs.shape, dtype=bool)
    for scale in (cfg.contour_scale,) + tuple(s for s in TALBOT_SCALE_LADDER if s > cfg.contour_scale):
        idx = np.flatnonzero(pending)
        z_col = zs[idx].reshape(-1, 1)
        sub = FCTransform(lambda mu, z_col=z_col: ov.boundary_kernel(mu, k) / (ov.psi(mu) - z_col),
                          complex_valued=complex_valued)
        sums, error = talbot_sum(sub, ts[idx], cfg.nodes, scale)
        r = scale * 2.0 * cfg.nodes / (5.0 * ts[idx])
        with np.errstate(all="ignore"):
            sub_roots = roots[idx]
            outside = outside_contour(sub_roots, r[:, None]) & np.isfinite(sub_roots)
            residues = np.where(outside, np.exp(sub_roots * ts[idx, None]) * weights[idx], 0.0).sum(axis=1)
        total = sums + (residues if complex_valued else residues.real)
        ok = np.isfinite(total) & (error <= cfg.tol)
        values[idx[ok]] = total[ok]
        pending[idx[ok]] = False
        if not np.any(pending):
            return values

    indices = np.flatnonzero(pending)
    raise ContourFailure(f"Resolvent inversion ill-conditioned at {indices.size} point(s), "
                         f"first t={ts[indices[0]]:.6g}, z={zs[indices[0]]:.6g}.", indices)

