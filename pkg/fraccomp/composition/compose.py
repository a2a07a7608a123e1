from typing import Callable, Optional

import numpy as np
from scipy.integrate import simpson

from fraccomp.composition.grid import GridFunction
from fraccomp.composition.panels import PanelResult, panel_integral
from fraccomp.util.errors import GridMismatch
from fraccomp.util.logging_config import get_logger

logger = get_logger(__name__)


class FCComposable:
    """
    Function of (outer, inner) variables taking part in a stochastic composition
    (f o g)(t, x) = int_0^inf f(s, x) g(t, s) ds.

    Attributes:
        func: Vectorised callable func(a, b); f is called as f(s, x), g as g(t, s).
        decay_hint: Optional callable returning, for the first argument of g, the s-scale where
                    g(t, .) starts to decay.
        point_mass: Optional callable t -> s0(t) when g(t, .) is the Dirac mass at s0(t).
        name: Label used in logs.

    """

    def __init__(self, func: Optional[Callable[[np.ndarray, np.ndarray], np.ndarray]] = None,
                 decay_hint: Optional[Callable[[float], float]] = None,
                 point_mass: Optional[Callable[[float], float]] = None, name: str = "") -> None:
        if func is None and point_mass is None:
            raise ValueError("Composable function needs either values or a point mass.")
        self.func = func
        self.decay_hint = decay_hint
        self.point_mass = point_mass
        self.name = name

    @classmethod
    def dirac(cls, location: Callable[[float], float], name: str = "dirac") -> "FCComposable":
        return cls(point_mass=location, name=name)

    def __call__(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        if self.func is None:
            raise ValueError(f"{self.name or 'point mass'} has no pointwise values.")
        return self.func(a, b)

    def scale(self, t: float) -> float:
        return 1.0 if self.decay_hint is None else float(self.decay_hint(t))


def compose_points(f: FCComposable, g: FCComposable, t: float, xs: np.ndarray) -> PanelResult:
    """
    (f o g)(t, x) at several x on shared quadrature panels. A point mass g returns
    f(s0(t), x) exactly.

    :param f: Outer function f(s, x).
    :param g: Kernel g(t, s).
    :param t: Outer time.
    :param xs: Points x (radii for radially symmetric fields).
    :return: Panel result with one value per x.
    """
    xs = np.atleast_1d(np.asarray(xs, dtype=float))
    if g.point_mass is not None:
        s0 = float(g.point_mass(t))
        values = np.broadcast_to(np.asarray(f(s0, xs)), xs.shape).copy()
        return PanelResult(values, np.abs(values), 0, s0)

    def integrand(s: np.ndarray) -> np.ndarray:
        weights = np.asarray(g(t, s), dtype=float)
        return f(s[:, None], xs[None, :]) * weights[:, None]

    result = panel_integral(integrand, g.scale(t))
    logger.debug(f"Composed {f.name} with {g.name} at t={t}: {result.panels} panels up to s={result.end:.4g}, "
                 f"oscillation index {result.oscillation_index:.3g}")
    return result


def compose(f: FCComposable, g: FCComposable, t: float, x: float) -> float:
    """
    Stochastic composition (f o g)(t, x) = int_0^inf f(s, x) g(t, s) ds.

    :param f: Outer function f(s, x).
    :param g: Kernel g(t, s), possibly a point mass.
    :param t: Time t >= 0.
    :param x: Point x.
    :return: Value with target absolute error PANEL_TOL scaled by the number of panels.
    """
    return float(compose_points(f, g, t, np.array([x])).value[0])


def compose_grid(f: GridFunction, g: GridFunction) -> GridFunction:
    """
    Composition of sampled functions on a shared s-grid by composite Simpson quadrature.
    The error estimate compares with the same rule on every other s-point.

    :param f: f(s, x) sampled on (s, x).
    :param g: g(t, s) sampled on (t, s).
    :return: (f o g)(t, x) sampled on (t, x).
    """
    s = f.first
    if g.second.shape != s.shape or not np.allclose(g.second, s, rtol=1e-12, atol=0):
        raise GridMismatch(f"Inner grids differ: f has {s.size} s-points, g has {g.second.size}.")
    if s.size < 3:
        raise GridMismatch("Composition needs at least three shared s-points.")

    values = np.array([simpson(row[:, None] * f.values, x=s, axis=0) for row in g.values])
    coarse = np.array([simpson(row[::2, None] * f.values[::2], x=s[::2], axis=0) for row in g.values])
    error = float(np.max(np.abs(values - coarse)))

    return GridFunction(g.first, f.second, values, (g.names[0], f.names[1]), {"error_estimate": error})
