"""
Kernels of (pseudo-)subordinators and their inverses.

For Psi(mu) = sum_i lambda_i mu^{nu_i}:
    subordinator kernel u(t, x), x-transform exp(-t Psi(mu)),
    inverse kernel l(t, x), t-transform (Psi(mu) / mu) exp(-x Psi(mu)).

A single order nu < 1 uses the Wright function, order 1 is a point mass, other probabilistic
vectors are inverted on a hyperbola inside the sector where exp(-x Psi) is bounded, and vectors
with some nu_i > 1 from extended-precision sums on the real axis.
"""

import math
from typing import Optional, Tuple

import numpy as np

from fraccomp.composition.compose import FCComposable, compose_points
from fraccomp.composition.panels import panel_integral
from fraccomp.laplace.hyperbola import sector_angle
from fraccomp.laplace.inversion import invert_in_sector
from fraccomp.laplace.transforms import FCTransform, principal_power
from fraccomp.specfun.mittag_leffler import MLParams, mittag_leffler
from fraccomp.specfun.wright import WrightParams, wright
from fraccomp.subordinator.kernel import FCSignedKernel
from fraccomp.subordinator.orders import OrderVector
from fraccomp.subordinator.pseudo import pseudo_kernel, pseudo_time_kernel
from fraccomp.util.common import parallel_map
from fraccomp.util.config import FCConfig
from fraccomp.util.constants import *
from fraccomp.util.enums import KernelKind, Route
from fraccomp.util.errors import InvalidParams
from fraccomp.util.logging_config import get_logger

logger = get_logger(__name__)

# Left end of refined panels in moment integrals, relative to the decay scale
MOMENT_START = 1e-30


def default_route(ov: OrderVector) -> Route:
    if ov.is_single and ov.max_order == 1.0:
        return Route.PointMass
    if ov.is_single and ov.max_order < 1.0:
        return Route.Series
    return Route.Inversion


def _wright_inverse(nu: float, lam: float, t: float, xs: np.ndarray) -> np.ndarray:
    # l(t, x) = lambda t^-nu W_{-nu,1-nu}(-lambda x t^-nu)
    p = WrightParams(-nu, 1.0 - nu)
    scale = t ** -nu
    return np.array(parallel_map(lambda x: lam * scale * wright(p, -lam * x * scale), xs))


def _wright_subordinator(nu: float, lam: float, t: float, xs: np.ndarray) -> np.ndarray:
    # u(t, x) = nu s l(x, s) / x with s = lambda t, x floored away from the singular point
    p = WrightParams(-nu, 1.0 - nu)
    s = lam * t

    def value(x: float) -> float:
        if x <= 0:
            return 0.0
        x = max(x, SUBORDINATOR_X_FLOOR)
        return nu * s * x ** -nu * wright(p, -s * x ** -nu) / x

    return np.array(parallel_map(value, xs))


def inverse_kernel_values(ov: OrderVector, t: float, xs: np.ndarray,
                          route: Optional[Route] = None) -> Tuple[np.ndarray, Route]:
    """
    Inverse kernel l(t, x) on a grid of x at fixed t.

    :param ov: Order vector.
    :param t: Time t > 0.
    :param xs: Points x >= 0.
    :param route: Force a route (Series or Inversion), automatic if None.
    :return: Tuple (values, route used). A point mass returns zeros.
    """
    if not t > 0:
        raise InvalidParams(f"Kernel time must be > 0, got t={t}.")
    xs = np.atleast_1d(np.asarray(xs, dtype=float))
    route = default_route(ov) if route is None else route

    if route == Route.PointMass:
        return np.zeros_like(xs), route
    if route == Route.Series:
        (lam, nu), = ov.pairs
        return _wright_inverse(nu, lam, t, xs), route

    ts = np.full(xs.shape, t)
    if not ov.probabilistic:
        return pseudo_time_kernel(ov, ts, xs), Route.Inversion
    values, diagnostics = invert_in_sector(ov.inverse_transform(xs), ts, sector_angle(ov.max_order))
    logger.debug(f"Inverse kernel inversion for {ov.describe()} at t={t:g}: {diagnostics}")
    return values, Route.Inversion


def inverse_kernel_in_time(ov: OrderVector, ts: np.ndarray, x: float) -> np.ndarray:
    """
    Inverse kernel l(t, x) on a grid of t at fixed x; a point mass is not representable here.

    """
    ts = np.atleast_1d(np.asarray(ts, dtype=float))
    route = default_route(ov)
    if route == Route.PointMass:
        raise InvalidParams("Order 1 inverse kernel is a point mass, not a function of t.")
    if route == Route.Series:
        return np.concatenate([inverse_kernel_values(ov, t, [x])[0] for t in ts])

    if not ov.probabilistic:
        return pseudo_time_kernel(ov, ts, x)
    values, _ = invert_in_sector(ov.inverse_transform(np.array([x])), ts, sector_angle(ov.max_order))
    return values


def subordinator_kernel_values(ov: OrderVector, t: float, xs: np.ndarray,
                               route: Optional[Route] = None) -> Tuple[np.ndarray, Route]:
    """
    Subordinator kernel u(t, x) on a grid of x at fixed t.

    :param ov: Order vector.
    :param t: Time t > 0.
    :param xs: Points x >= 0, u(t, 0) = 0.
    :param route: Force a route (Series or Inversion), automatic if None.
    :return: Tuple (values, route used). A point mass returns zeros.
    """
    if not t > 0:
        raise InvalidParams(f"Kernel time must be > 0, got t={t}.")
    xs = np.atleast_1d(np.asarray(xs, dtype=float))
    route = default_route(ov) if route is None else route

    if route == Route.PointMass:
        return np.zeros_like(xs), route
    if route == Route.Series:
        (lam, nu), = ov.pairs
        return _wright_subordinator(nu, lam, t, xs), route
    if not ov.probabilistic:
        return pseudo_kernel(ov, t, xs), Route.Inversion

    values = np.zeros_like(xs)
    positive = xs > 0
    if np.any(positive):
        # expm1 drops the atom at x = 0, values at x > 0 are unchanged
        transform = FCTransform(lambda mu: np.expm1(-t * ov.psi(mu)))
        values[positive], _ = invert_in_sector(transform, xs[positive], sector_angle(ov.max_order))
    return values, Route.Inversion


def inverse_density(ov: OrderVector, t: float, xs: np.ndarray, route: Optional[Route] = None) -> FCSignedKernel:
    """
    Inverse (pseudo-)subordinator kernel l(t, .) as a signed kernel.

    :param ov: Order vector.
    :param t: Time t > 0.
    :param xs: Nonnegative increasing x-grid.
    :param route: Force a route, automatic if None.
    :return: Kernel; order 1 gives a point mass at x = t / lambda.
    """
    values, used = inverse_kernel_values(ov, t, xs, route)
    point_mass = t / ov.pairs[0][0] if used == Route.PointMass else None
    logger.debug(f"Inverse kernel for {ov.describe()} at t={t}: route {used.value}")

    diagnostics = {"orders": ov.describe(), "probabilistic": ov.probabilistic}
    if used == Route.Inversion and not ov.probabilistic:
        diagnostics.update(method="extended_stehfest", nodes=FCConfig().get("pseudo_nodes"))
    return FCSignedKernel(xs, t, values, KernelKind.Inverse, used, point_mass, diagnostics)


def subordinator_density(ov: OrderVector, t: float, xs: np.ndarray, route: Optional[Route] = None) -> FCSignedKernel:
    """
    Subordinator (pseudo-)kernel u(t, .) as a signed kernel.

    :param ov: Order vector.
    :param t: Time t > 0.
    :param xs: Nonnegative increasing x-grid.
    :param route: Force a route, automatic if None.
    :return: Kernel; order 1 gives a point mass at x = lambda t.
    """
    values, used = subordinator_kernel_values(ov, t, xs, route)
    point_mass = ov.pairs[0][0] * t if used == Route.PointMass else None
    diagnostics = {"orders": ov.describe(), "probabilistic": ov.probabilistic}
    if not ov.probabilistic:
        diagnostics.update(method="moment_matched_stehfest", nodes=FCConfig().get("pseudo_nodes"))
    logger.debug(f"Subordinator kernel for {ov.describe()} at t={t}: route {used.value}")

    return FCSignedKernel(xs, t, values, KernelKind.Subordinator, used, point_mass, diagnostics)


def kernel_moment(ov: OrderVector, t: float, kind: KernelKind, order: int = 0) -> float:
    """
    Moment int_0^inf x^order k(t, x) dx of a kernel over the whole half-line.
    Subordinator kernels are integrated in z = 1/x, which turns their power tails into an
    integrable singularity at z = 0.

    :param ov: Order vector.
    :param t: Time t > 0.
    :param kind: Kernel kind.
    :param order: Moment order, 0 or 1.
    :return: Moment.
    """
    route = default_route(ov)
    if route == Route.PointMass:
        lam = ov.pairs[0][0]
        return (lam * t if kind == KernelKind.Subordinator else t / lam) ** order

    if kind == KernelKind.Subordinator:
        scale = 1.0 / ov.decay_scale(t)

        def integrand(z: np.ndarray) -> np.ndarray:
            values, _ = subordinator_kernel_values(ov, t, 1.0 / z)
            return values * z ** (-2.0 - order)
    else:
        scale = max(t ** nu / lam for lam, nu in ov.pairs)

        def integrand(x: np.ndarray) -> np.ndarray:
            values, _ = inverse_kernel_values(ov, t, x)
            return values * x ** order

    start = MOMENT_START * scale if kind == KernelKind.Subordinator else None
    result = panel_integral(integrand, scale, start=start, s_max=S_MAX * scale)
    return float(result.value)


def inverse_mgf(ov: OrderVector, t: float, delta: float, route: Optional[Route] = None) -> float:
    """
    x-Laplace transform of the inverse kernel, int e^{-delta x} l(t, x) dx. A single order has
    the closed form E_{nu,1}(-delta t^nu / lambda); otherwise the kernel is integrated.

    :param ov: Order vector.
    :param t: Time t > 0.
    :param delta: delta >= 0.
    :param route: ClosedForm or Integral, automatic if None.
    :return: Transform value.
    """
    if delta < 0:
        raise InvalidParams(f"delta must be >= 0, got {delta}.")
    if route is None:
        route = Route.ClosedForm if ov.is_single else Route.Integral
    if route == Route.ClosedForm:
        (lam, nu), = ov.pairs
        return mittag_leffler(MLParams(nu, 1.0), -delta * t ** nu / lam)

    if default_route(ov) == Route.PointMass:
        return math.exp(-delta * t / ov.pairs[0][0])
    scale = max(t ** nu / lam for lam, nu in ov.pairs)

    def integrand(x: np.ndarray) -> np.ndarray:
        values, _ = inverse_kernel_values(ov, t, x)
        return np.exp(-delta * x) * values

    return float(panel_integral(integrand, scale, s_max=S_MAX * scale).value)


def subordinator_t_laplace(nu: float, delta: float, x: float) -> float:
    """
    t-Laplace transform of the subordinator kernel, int e^{-delta t} u(t, x) dt = x^{nu-1} E_{nu,nu}(-delta x^nu).

    """
    if not (nu > 0 and delta > 0 and x > 0):
        raise InvalidParams(f"Need nu, delta, x > 0, got nu={nu}, delta={delta}, x={x}.")
    return x ** (nu - 1.0) * mittag_leffler(MLParams(nu, nu), -delta * x ** nu)


def subordinator_t_laplace_quadrature(ov: OrderVector, delta: float, x: float) -> float:
    """
    Same transform by panel quadrature of the kernel over t, for any order vector.

    """
    scale = max(x ** nu / lam for lam, nu in ov.pairs)

    def integrand(ts: np.ndarray) -> np.ndarray:
        values = np.concatenate([subordinator_kernel_values(ov, t, [x])[0] for t in ts])
        return np.exp(-delta * ts) * values

    return float(panel_integral(integrand, scale, s_max=S_MAX * max(scale, 1.0 / delta)).value)


def inverse_composition_closed(ov: OrderVector, alpha: float, mu: float, x: float) -> float:
    """
    Closed form of the t-Laplace transform of the inverse kernel of ov composed with the inverse
    kernel of order alpha, which is the inverse kernel transform of the scaled orders alpha nu_i.

    """
    if not 0 < alpha <= 1:
        raise InvalidParams(f"Inner order must lie in (0, 1], got {alpha}.")
    return float(np.real(ov.scaled(alpha).inverse_transform(np.array([x]))(np.array([[mu]]))[0, 0]))


def inverse_composition_transform(ov: OrderVector, alpha: float, mu: float, x: float) -> Tuple[float, float]:
    """
    t-Laplace transform at mu of the inverse kernel of ov composed with the inverse kernel of
    order alpha, int_0^inf l_ov(s, x) l_alpha(t, s) ds.

    :param ov: Outer order vector.
    :param alpha: Inner order in (0, 1].
    :param mu: Laplace variable mu > 0.
    :param x: Point x > 0.
    :return: Tuple (s-quadrature, closed form (Psi(mu^alpha) / mu) exp(-x Psi(mu^alpha))).
    """
    closed = inverse_composition_closed(ov, alpha, mu, x)
    p = mu ** alpha
    if default_route(ov) == Route.PointMass:
        lam = ov.pairs[0][0]
        return lam * mu ** (alpha - 1.0) * math.exp(-p * lam * x), closed

    scale = max(min((lam * x) ** (1.0 / nu) for lam, nu in ov.pairs), 1.0 / p)
    quadrature = panel_integral(lambda s: inverse_kernel_in_time(ov, s, x) * mu ** (alpha - 1.0) * np.exp(-p * s),
                                scale, s_max=S_MAX * scale).value

    return float(quadrature), closed


def reverse_composition_transform(ov: OrderVector, alpha: float, mu: float, x: float) -> Tuple[float, float]:
    """
    t-Laplace transform at mu of the inverse kernel of order alpha composed with the inverse
    kernel of ov, int_0^inf l_alpha(s, x) l_ov(t, s) ds.

    :param ov: Inner order vector.
    :param alpha: Outer order in (0, 1).
    :param mu: Laplace variable mu > 0.
    :param x: Point x > 0.
    :return: Tuple (s-quadrature, closed form Psi(mu)^alpha / mu exp(-x Psi(mu)^alpha)).
    """
    if not 0 < alpha < 1:
        raise InvalidParams(f"Outer order must lie in (0, 1), got {alpha}.")
    psi = float(ov.psi(np.array(mu)))
    closed = psi ** alpha / mu * math.exp(-x * psi ** alpha)

    outer = OrderVector.single(alpha)
    scale = max(x ** (1.0 / alpha), 1.0 / psi)
    kernel = float(ov.boundary_kernel(np.array(mu), 0))
    quadrature = panel_integral(lambda s: inverse_kernel_in_time(outer, s, x) * kernel * np.exp(-psi * s),
                                scale, s_max=S_MAX * scale).value

    return float(quadrature), closed


def composition_transform_oracle(ov: OrderVector, alpha: float, mu: np.ndarray, x: np.ndarray) -> np.ndarray:
    """
    Closed form of the inverse kernel transform of ov evaluated at mu^alpha, times mu^(alpha-1).

    """
    p = principal_power(np.asarray(mu, dtype=float), alpha)
    return FCTransform(lambda m: ov.boundary_kernel(m, 0) * np.exp(-x * ov.psi(m)))(p) * p / np.asarray(mu)


def subordinator_semigroup(nu1: float, nu2: float, t: float,
                           xs: np.ndarray) -> Tuple[FCSignedKernel, FCSignedKernel]:
    """
    Kernel of S_nu1(S_nu2(t)) as the composition int u_nu1(s, x) u_nu2(t, s) ds, next to the
    kernel of the single order nu1 nu2 it should equal.

    :param nu1: Outer order, 0 < nu1 <= 1.
    :param nu2: Inner order, 0 < nu2 <= 1.
    :param t: Time t > 0.
    :param xs: Nonnegative increasing x-grid.
    :return: Tuple (composed kernel, kernel of order nu1 nu2).
    """
    for nu in (nu1, nu2):
        if not 0 < nu <= 1:
            raise InvalidParams(f"Semigroup orders must be in (0, 1], got {nu}.")
    xs = np.atleast_1d(np.asarray(xs, dtype=float))
    outer_ov, inner_ov = OrderVector.single(nu1), OrderVector.single(nu2)
    direct = subordinator_density(OrderVector.single(nu1 * nu2), t, xs)

    if nu1 == 1.0:
        # u_1(s, .) is the Dirac mass at s
        composed = subordinator_density(inner_ov, t, xs)
        composed.route = Route.Composition
        return composed, direct

    def outer(s: np.ndarray, x: np.ndarray) -> np.ndarray:
        # u(s, x) = s^(-1/nu) u(1, x s^(-1/nu))
        s, x = np.broadcast_arrays(np.asarray(s, dtype=float), x)
        scale = s ** (-1.0 / nu1)
        values, _ = subordinator_kernel_values(outer_ov, 1.0, (x * scale).ravel())
        return scale * values.reshape(s.shape)

    if nu2 == 1.0:
        inner = FCComposable.dirac(lambda time: time, name=f"subordinator kernel {nu2:g}")
    else:
        inner = FCComposable(lambda time, s: subordinator_kernel_values(inner_ov, time, s)[0],
                             decay_hint=lambda time: time ** (1.0 / nu2), name=f"subordinator kernel {nu2:g}")
    result = compose_points(FCComposable(outer, name=f"subordinator kernel {nu1:g}"), inner, t, xs)

    composed = FCSignedKernel(xs, t, result.value, KernelKind.Subordinator, Route.Composition,
                              diagnostics={"orders": f"{nu1:g} o {nu2:g}", "panels": result.panels,
                                           "oscillation_index": result.oscillation_index})
    logger.info(f"Semigroup {nu1:g} o {nu2:g} at t={t:g}: sup difference to order {nu1 * nu2:g} is "
                f"{np.max(np.abs(composed.values - direct.values)):.3g}")
    return composed, direct
