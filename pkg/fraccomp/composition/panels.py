"""
Gauss-Legendre panel quadrature of improper integrals over [0, inf).

The interval [0, scale] is covered by geometric panels refined towards zero, beyond `scale`
panels grow geometrically until PANEL_STOP_RUN consecutive panels fall below the tolerance.
"""

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Optional, Tuple

import numpy as np

from fraccomp.util.config import FCConfig
from fraccomp.util.constants import *
from fraccomp.util.errors import TailDivergence
from fraccomp.util.logging_config import get_logger

logger = get_logger(__name__)


@lru_cache(maxsize=8)
def gauss_legendre(nodes: int) -> Tuple[np.ndarray, np.ndarray]:
    return np.polynomial.legendre.leggauss(nodes)


@dataclass
class PanelResult:
    """
    Value of a panel quadrature.

    Attributes:
        value: Integral, shaped like the trailing axes of the integrand.
        l1: Integral of the absolute integrand.
        panels: Number of panels used.
        end: Right end of the last panel.

    """
    value: np.ndarray
    l1: np.ndarray
    panels: int
    end: float

    @property
    def oscillation_index(self) -> float:
        """
        Largest ratio of absolute to signed integral, 1 for one-signed integrands.

        """
        value = np.abs(np.atleast_1d(self.value))
        l1 = np.atleast_1d(self.l1)
        with np.errstate(divide="ignore", invalid="ignore"):
            ratio = np.where(value > 0, l1 / value, np.where(l1 > 0, np.inf, 1.0))
        return float(ratio.max())


def _panel(func: Callable[[np.ndarray], np.ndarray], a: float, b: float, nodes: int) -> Tuple[np.ndarray, np.ndarray]:
    x, w = gauss_legendre(nodes)
    s = 0.5 * (b - a) * x + 0.5 * (b + a)
    values = np.asarray(func(s))
    weights = (0.5 * (b - a) * w).reshape((-1,) + (1,) * (values.ndim - 1))

    return (weights * values).sum(axis=0), (weights * np.abs(values)).sum(axis=0)


def panel_integral(func: Callable[[np.ndarray], np.ndarray],
                   scale: float,
                   start: Optional[float] = None,
                   s_max: Optional[float] = None,
                   tol: Optional[float] = None) -> PanelResult:
    """
    Integral of func over [0, inf).

    :param func: Integrand, evaluated on 1-D node arrays; may return shape (nodes, ...) to
                 integrate several functions on the same panels.
    :param scale: Decay scale, where geometric refinement towards 0 ends and tail extension starts.
    :param start: Left end of the first refined panel, PANEL_START * scale if None.
    :param s_max: Panels ending beyond s_max raise TailDivergence, configured value if None.
    :param tol: Tolerance of the tail stopping rule, configured value if None.
    :return: Panel result.
    """
    config = FCConfig()
    nodes = config.get("gauss_nodes")
    s_max = config.get("s_max") if s_max is None else s_max
    tol = config.get("panel_tol") if tol is None else tol
    start = PANEL_START * scale if start is None else start
    if not 0 < start < scale:
        raise ValueError(f"Panel start must lie in (0, {scale}), got {start}.")

    count = max(1, math.ceil(math.log(scale / start) / math.log(PANEL_GROWTH)))
    edges = np.concatenate(([0.0], np.geomspace(start, scale, count + 1)))
    value, l1 = _panel(func, edges[0], edges[1], nodes)
    for a, b in zip(edges[1:-1], edges[2:]):
        v, a1 = _panel(func, a, b, nodes)
        value, l1 = value + v, l1 + a1

    panels = edges.size - 1
    quiet = 0
    a = scale
    while quiet < PANEL_STOP_RUN:
        b = a * PANEL_GROWTH
        if b > s_max:
            raise TailDivergence(f"Panel contributions still above {tol:g} at s={a:.6g} (cap {s_max:g}).")
        v, a1 = _panel(func, a, b, nodes)
        value, l1 = value + v, l1 + a1
        quiet = quiet + 1 if np.max(np.abs(v)) < tol and np.max(a1) < tol else 0
        panels += 1
        a = b

    return PanelResult(value, l1, panels, a)
