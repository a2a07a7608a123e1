from typing import Any, Dict, Optional, Tuple

import numpy as np

from fraccomp.laplace.hyperbola import hyperbola_sum
from fraccomp.laplace.stehfest import stehfest_sum
from fraccomp.laplace.talbot import talbot_sum
from fraccomp.laplace.transforms import FCTransform, InversionConfig
from fraccomp.util.constants import *
from fraccomp.util.enums import InversionMethod
from fraccomp.util.errors import ContourFailure, InvalidConfig
from fraccomp.util.logging_config import get_logger

logger = get_logger(__name__)


def invert_points(transform: FCTransform,
                  ts: np.ndarray,
                  cfg: Optional[InversionConfig] = None,
                  stehfest_fallback: bool = False) -> Tuple[np.ndarray, Dict[str, Any]]:
    """
    Inverts the transform at several times. Points whose Talbot sum is ill-conditioned are
    recomputed with larger contours; remaining failures raise ContourFailure, or are
    recomputed by Gaver-Stehfest when `stehfest_fallback` is set.

    :param transform: Transform to invert; receives arrays of shape (len(ts), nodes).
    :param ts: Positive times.
    :param cfg: Inversion config, Talbot defaults if None.
    :param stehfest_fallback: Whether to fall back to Gaver-Stehfest instead of failing.
    :return: Tuple (values, diagnostics).
    """
    cfg = InversionConfig.talbot() if cfg is None else cfg
    ts = np.atleast_1d(np.asarray(ts, dtype=float))
    if np.any(ts <= 0) or not np.all(np.isfinite(ts)):
        raise InvalidConfig("Inversion times must be positive and finite.")

    if cfg.method == InversionMethod.GaverStehfest:
        values = stehfest_sum(transform, ts, cfg.nodes)
        return values, {"method": cfg.method.value, "nodes": cfg.nodes}

    values, error = talbot_sum(transform, ts, cfg.nodes, cfg.contour_scale)
    failed = ~np.isfinite(values) | ~(error <= cfg.tol)
    used_scale = np.full(ts.shape, cfg.contour_scale)
    for scale in TALBOT_SCALE_LADDER:
        if not np.any(failed) or scale <= cfg.contour_scale:
            continue
        retry, retry_error = talbot_sum(transform, ts, cfg.nodes, scale)
        fixed = failed & np.isfinite(retry) & (retry_error <= cfg.tol)
        values = np.where(fixed, retry, values)
        used_scale = np.where(fixed, scale, used_scale)
        failed &= ~fixed

    diagnostics = {"method": cfg.method.value, "nodes": cfg.nodes, "max_contour_scale": float(used_scale.max()),
                   "stehfest_points": 0}
    if np.any(failed):
        indices = np.flatnonzero(failed)
        if not stehfest_fallback:
            raise ContourFailure(f"Talbot inversion ill-conditioned at {indices.size} point(s), "
                                 f"first t={ts[indices[0]]:.6g}.", indices)
        logger.debug(f"Falling back to Gaver-Stehfest at {indices.size} point(s).")
        fallback = stehfest_sum(transform, ts, InversionConfig.stehfest().nodes)
        values = np.where(failed, fallback, values)
        diagnostics["stehfest_points"] = int(indices.size)

    return values, diagnostics


def invert_in_sector(transform: FCTransform,
                     ts: np.ndarray,
                     beta: float,
                     cfg: Optional[InversionConfig] = None) -> Tuple[np.ndarray, Dict[str, Any]]:
    """
    Inverts a transform known to be bounded for |arg s| <= beta on the hyperbola fitted to that
    sector. Points the hyperbola cannot resolve, or a sector too thin for it, go through
    `invert_points` with the Gaver-Stehfest fallback enabled.

    :param transform: Transform to invert.
    :param ts: Positive times.
    :param beta: Sector half-angle in (pi/2, pi].
    :param cfg: Talbot config of the fallback; its tolerance also bounds the hyperbola error estimate.
    :return: Tuple (values, diagnostics).
    """
    cfg = InversionConfig.talbot() if cfg is None else cfg
    ts = np.atleast_1d(np.asarray(ts, dtype=float))
    if np.any(ts <= 0) or not np.all(np.isfinite(ts)):
        raise InvalidConfig("Inversion times must be positive and finite.")

    try:
        values, error, nodes = hyperbola_sum(transform, ts, beta)
    except ContourFailure as e:
        logger.debug(f"Hyperbolic contour unavailable: {e}")
        return invert_points(transform, ts, cfg, stehfest_fallback=True)

    failed = ~np.isfinite(values) | ~(error <= cfg.tol)
    diagnostics = {"method": InversionMethod.Hyperbola.value, "nodes": nodes, "sector": beta, "stehfest_points": 0}
    if np.any(failed):
        indices = np.flatnonzero(failed)
        logger.debug(f"Hyperbolic contour ill-conditioned at {indices.size} point(s), first t={ts[indices[0]]:.6g}.")
        retry, retry_diagnostics = invert_points(transform, ts[failed], cfg, stehfest_fallback=True)
        values = values.copy()
        values[failed] = retry
        diagnostics["stehfest_points"] = retry_diagnostics["stehfest_points"]
        diagnostics["talbot_points"] = int(indices.size) - retry_diagnostics["stehfest_points"]

    return values, diagnostics


def invert(f: FCTransform, t: float, cfg: Optional[InversionConfig] = None) -> float:
    """
    Inverts a Laplace transform at a single time.

    :param f: Transform.
    :param t: Positive time.
    :param cfg: Inversion config.
    :return: g(t).
    """
    values, _ = invert_points(f, np.array([t], dtype=float), cfg)
    value = values[0]

    return value if f.complex_valued else float(value)


def invert_grid(f: FCTransform, ts: np.ndarray, cfg: Optional[InversionConfig] = None) -> np.ndarray:
    """
    Inverts a Laplace transform on a grid of times. Evaluations are independent.
    For transforms not depending on the evaluation point, `f` is evaluated on arrays of
    shape (len(ts), nodes), so any elementwise expression in mu works.

    :param f: Transform.
    :param ts: Positive times.
    :param cfg: Inversion config.
    :return: g at ts.
    """
    values, _ = invert_points(f, ts, cfg)

    return values


def richardson_diagnostic(f: FCTransform, ts: np.ndarray, cfg: Optional[InversionConfig] = None) -> Dict[str, Any]:
    """
    Compares the inversion at the given config with a refined one (eight more Talbot nodes,
    since rounding grows like exp(2 M / 5), or two more Stehfest terms within the double
    precision limit).

    :param f: Transform.
    :param ts: Positive times.
    :param cfg: Base config.
    :return: Values of both configs and their largest absolute difference.
    """
    cfg = InversionConfig.talbot() if cfg is None else cfg
    if cfg.method == InversionMethod.Talbot:
        refined = InversionConfig(cfg.method, cfg.nodes + 8, cfg.contour_scale, cfg.tol)
    else:
        nodes = cfg.nodes + 2 if cfg.nodes + 2 <= STEHFEST_MAX_NODES else cfg.nodes - 2
        refined = InversionConfig(cfg.method, nodes)
    base = invert_grid(f, ts, cfg)
    fine = invert_grid(f, ts, refined)
    estimate = float(np.max(np.abs(base - fine)))
    logger.debug(f"Richardson comparison: {cfg.nodes} vs {refined.nodes} nodes, difference {estimate:.3e}")

    return {"values": base, "refined_values": fine, "error_estimate": estimate,
            "nodes": (cfg.nodes, refined.nodes)}
