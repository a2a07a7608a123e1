import math
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np
from scipy.integrate import simpson
from scipy.signal import fftconvolve
from scipy.special import gamma

from fraccomp.util.constants import *
from fraccomp.util.errors import HorizonTooShort, InsufficientGrid, OrderOutOfRange
from fraccomp.util.logging_config import get_logger

logger = get_logger(__name__)


@dataclass(frozen=True)
class CaputoOrder:
    """
    Order of a Caputo derivative.

    Attributes:
        alpha: Order, 0 < alpha <= CAPUTO_MAX_ORDER.

    """
    alpha: float

    def __post_init__(self) -> None:
        if not 0 < self.alpha <= CAPUTO_MAX_ORDER:
            raise OrderOutOfRange(f"Caputo order must lie in (0, {CAPUTO_MAX_ORDER}], got {self.alpha}.")

    @property
    def m(self) -> int:
        return math.ceil(self.alpha)

    @property
    def is_integer(self) -> bool:
        return float(self.alpha).is_integer()


@dataclass
class SampledFn:
    """
    Function sampled on a uniform time grid starting at zero.

    Attributes:
        ts: Strictly increasing times with ts[0] = 0.
        values: Samples along axis 0, trailing axes are independent functions (e.g. space points).
        boundary_derivs: Optional exact values of d^k f/dt^k at t = 0 for k = 0, 1, ...

    """
    ts: np.ndarray
    values: np.ndarray
    boundary_derivs: Optional[Sequence[float]] = field(default=None)

    def __post_init__(self) -> None:
        self.ts = np.asarray(self.ts, dtype=float)
        self.values = np.asarray(self.values, dtype=float)
        if self.ts.ndim != 1 or self.ts.size < 2 or self.values.shape[0] != self.ts.size:
            raise InsufficientGrid(f"Need at least two samples with matching grid, got {self.ts.shape} "
                                   f"times and {self.values.shape} values.")
        if self.ts[0] != 0:
            raise InsufficientGrid(f"Time grid must start at 0, got {self.ts[0]}.")

    @property
    def step(self) -> float:
        """
        Uniform grid spacing; nonuniform grids are rejected.

        """
        steps = np.diff(self.ts)
        h = float(steps.mean())
        if not np.all(steps > 0) or not np.allclose(steps, h, rtol=1e-9, atol=0):
            raise InsufficientGrid("Caputo derivative needs a uniform time grid.")
        return h


def _second_difference(values: np.ndarray, h: float) -> np.ndarray:
    """
    Second derivative along axis 0, central inside and four-point one-sided at the ends.

    """
    out = np.empty_like(values)
    out[1:-1] = (values[2:] - 2.0 * values[1:-1] + values[:-2]) / h ** 2
    out[0] = (2.0 * values[0] - 5.0 * values[1] + 4.0 * values[2] - values[3]) / h ** 2
    out[-1] = (2.0 * values[-1] - 5.0 * values[-2] + 4.0 * values[-3] - values[-4]) / h ** 2
    return out


def classical_derivative(values: np.ndarray, h: float, order: int) -> np.ndarray:
    """
    Classical derivative of order 0..3 along axis 0 by second-order finite differences.

    :param values: Samples on a uniform grid.
    :param h: Grid spacing.
    :param order: Derivative order.
    :return: Derivative samples.
    """
    if order == 0:
        return values
    if values.shape[0] < order + 2:
        raise InsufficientGrid(f"Need at least {order + 2} samples for a derivative of order {order}.")
    if order == 1:
        return np.gradient(values, h, axis=0, edge_order=2)
    if order == 2:
        return _second_difference(values, h)
    return np.gradient(_second_difference(values, h), h, axis=0, edge_order=2)


def initial_derivatives(f: SampledFn, count: int) -> np.ndarray:
    """
    d^k f/dt^k at t = 0 for k < count, exact where `boundary_derivs` provides them.

    """
    h = f.step
    derivs = []
    for k in range(count):
        if f.boundary_derivs is not None and k < len(f.boundary_derivs):
            derivs.append(np.broadcast_to(np.asarray(f.boundary_derivs[k], dtype=float), f.values.shape[1:]))
        else:
            derivs.append(classical_derivative(f.values, h, k)[0])
    return np.array(derivs)


def caputo_on_grid(f: SampledFn, ord: CaputoOrder) -> np.ndarray:
    """
    Caputo derivative at every grid point.

    The (m-1)-th derivative g is taken by finite differences, then the fractional part
    alpha' = alpha - (m - 1) by the L1 scheme
    h^(-alpha') / Gamma(2 - alpha') * sum_j b_j (g_{n-j} - g_{n-j-1}), b_j = (j+1)^(1-alpha') - j^(1-alpha').
    The value at t = 0 is set to zero.

    :param f: Sampled function.
    :param ord: Derivative order.
    :return: Array shaped like f.values.
    """
    h = f.step
    n = f.ts.size
    if n < ord.m + 1:
        raise InsufficientGrid(f"Order {ord.alpha} needs at least {ord.m + 1} samples, got {n}.")
    if ord.is_integer:
        return classical_derivative(f.values, h, ord.m)

    g = np.array(classical_derivative(f.values, h, ord.m - 1), dtype=float)
    if ord.m > 1 and f.boundary_derivs is not None and len(f.boundary_derivs) >= ord.m:
        g[0] = f.boundary_derivs[ord.m - 1]

    frac = ord.alpha - (ord.m - 1)
    j = np.arange(n - 1, dtype=float)
    weights = (j + 1.0) ** (1.0 - frac) - j ** (1.0 - frac)
    increments = np.diff(g, axis=0)
    weights = weights.reshape((-1,) + (1,) * (g.ndim - 1))
    conv = fftconvolve(weights, increments, axes=0)[:n - 1]

    out = np.zeros_like(g)
    out[1:] = conv * h ** (-frac) / gamma(2.0 - frac)
    return out


def caputo_derivative(f: SampledFn, ord: CaputoOrder, t: float) -> float:
    """
    Caputo derivative of order alpha at time t, linearly interpolated between grid points.

    :param f: Sampled scalar function.
    :param ord: Derivative order.
    :param t: Time with ts[1] <= t <= ts[-1].
    :return: Derivative value.
    """
    preceding = int(np.searchsorted(f.ts, t, side="right"))
    if preceding < ord.m + 1:
        raise InsufficientGrid(f"Order {ord.alpha} at t={t} needs {ord.m + 1} grid points up to t, "
                               f"found {preceding}.")
    if t > f.ts[-1]:
        raise InsufficientGrid(f"t={t} lies beyond the grid end {f.ts[-1]}.")

    return float(np.interp(t, f.ts, caputo_on_grid(f, ord)))


def laplace_identity_residual(f: SampledFn, ord: CaputoOrder, mu: float, horizon: float) -> float:
    """
    |LHS - RHS| of the Laplace identity of the Caputo derivative,
    mu^alpha F(mu) - sum_k mu^(alpha-k-1) f^(k)(0) = L[D^alpha f](mu),
    with both transforms computed by Simpson quadrature on [0, horizon].

    :param f: Sampled scalar function covering [0, horizon].
    :param ord: Derivative order.
    :param mu: Positive Laplace variable.
    :param horizon: Truncation point of the transforms.
    :return: Absolute residual.
    """
    if f.ts[-1] < horizon:
        raise HorizonTooShort(f"Samples end at {f.ts[-1]}, before the horizon {horizon}.")
    inside = f.ts <= horizon
    ts = f.ts[inside]
    damping = np.exp(-mu * ts)

    tail = abs(damping[-1] * f.values[inside][-1])
    if tail > HORIZON_TAIL_TOL:
        raise HorizonTooShort(f"exp(-mu t) f(t) = {tail:.3e} at the horizon t={ts[-1]}, "
                              f"above {HORIZON_TAIL_TOL}.")

    derivative = caputo_on_grid(f, ord)[inside]
    transform = simpson(damping * f.values[inside], x=ts)
    lhs = mu ** ord.alpha * transform
    for k, value in enumerate(initial_derivatives(f, ord.m)):
        lhs -= mu ** (ord.alpha - k - 1) * float(value)
    rhs = simpson(damping * derivative, x=ts)

    residual = abs(lhs - rhs)
    logger.debug(f"Laplace identity at alpha={ord.alpha}, mu={mu}: lhs={lhs:.10g}, rhs={rhs:.10g}")
    return float(residual)
