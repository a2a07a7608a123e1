"""
Real-axis representation of kernels whose transforms only exist for mu >= 0 (some nu_i > 1).

For nu_i > 1, exp(-t Psi(mu)) and exp(-x Psi(mu)) grow along every contour reaching into the left
half-plane, so Bromwich contours are unavailable and both kernels are recovered from samples on
the positive real axis.

Subordinator kernel u(t, x): Stehfest weights ln2 * V are corrected by the minimum-norm vector d
such that u(x) = (1/x) sum_k w_k F(k ln2 / x) of any F with F(0) = 1 has total mass 1 and
first moment 0, while d stays orthogonal to k^-j, j < N/2, to keep exactness on the powers
mu^-j. The correction is solved at WEIGHTS_DPS digits.

Time kernels g_k(t, x) with t-transform K_k(mu) exp(-x Psi(mu)) use the plain Stehfest sum.

Both sums cancel weights of size 10^(0.65 N), so they run in a dedicated mpmath context with
N + PSEUDO_GUARD_DIGITS digits, never in the global one, which worker threads share.
"""

from functools import lru_cache
from typing import Tuple

import mpmath
import numpy as np

from fraccomp.laplace.stehfest import stehfest_coefficients
from fraccomp.subordinator.orders import OrderVector
from fraccomp.util.common import parallel_map
from fraccomp.util.config import FCConfig
from fraccomp.util.constants import *
from fraccomp.util.errors import InvalidConfig, InvalidParams, InversionFailure
from fraccomp.util.logging_config import get_logger

logger = get_logger(__name__)


def _check_nodes(nodes: int) -> None:
    if nodes < 8 or nodes > PSEUDO_MAX_NODES or nodes % 2:
        raise InvalidConfig(f"Real-axis kernels need an even number of terms in [8, {PSEUDO_MAX_NODES}], "
                            f"got {nodes}.")


def _finite(values: np.ndarray, label: str) -> np.ndarray:
    bad = np.flatnonzero(~np.isfinite(values))
    if bad.size:
        raise InversionFailure(f"Real-axis {label} is not finite at {bad.size} point(s).")
    return values


@lru_cache(maxsize=None)
def evaluation_context(nodes: int) -> mpmath.MPContext:
    ctx = mpmath.MPContext()
    ctx.dps = max(PSEUDO_DPS, nodes + PSEUDO_GUARD_DIGITS)
    return ctx


@lru_cache(maxsize=None)
def pseudo_weights(nodes: int) -> Tuple[mpmath.mpf, ...]:
    """
    Moment-matched Gaver-Stehfest weights.

    :param nodes: Even number of terms N.
    :return: Weights w_1..w_N at WEIGHTS_DPS digits.
    """
    _check_nodes(nodes)
    ctx = mpmath.MPContext()
    ctx.dps = WEIGHTS_DPS
    half = nodes // 2
    base = ctx.matrix([ctx.ln2 * ctx.mpf(v.numerator) / v.denominator for v in stehfest_coefficients(nodes)])
    ks = [ctx.mpf(k) for k in range(1, nodes + 1)]

    rows = [[ctx.mpf(1)] * nodes, [ctx.log(k) for k in ks], ks]
    targets = [ctx.mpf(0), ctx.mpf(-1), ctx.mpf(0)]
    for j in range(1, half):
        row = [k ** -j for k in ks]
        rows.append(row)
        targets.append(ctx.fsum(r * b for r, b in zip(row, base)))

    a = ctx.matrix(rows)
    residual = ctx.matrix(targets) - a * base
    correction = a.T * ctx.lu_solve(a * a.T, residual)
    weights = base + correction
    logger.debug(f"Pseudo weights N={nodes}: correction norm {ctx.nstr(ctx.norm(correction), 5)}")

    return tuple(weights[i] for i in range(nodes))


@lru_cache(maxsize=None)
def _kernel_weights(nodes: int) -> Tuple[mpmath.mpf, ...]:
    ctx = evaluation_context(nodes)
    return tuple(ctx.mpf(w) for w in pseudo_weights(nodes))


@lru_cache(maxsize=None)
def _stehfest_weights(nodes: int) -> Tuple[mpmath.mpf, ...]:
    # ln2 * V_k
    _check_nodes(nodes)
    ctx = evaluation_context(nodes)
    return tuple(ctx.ln2 * ctx.mpf(v.numerator) / v.denominator for v in stehfest_coefficients(nodes))


@lru_cache(maxsize=None)
def _node_powers(nodes: int, exponent: float) -> Tuple[mpmath.mpf, ...]:
    ctx = evaluation_context(nodes)
    return tuple(ctx.power(k, exponent) for k in range(1, nodes + 1))


def pseudo_kernel(ov: OrderVector, t: float, xs: np.ndarray, nodes: int = None) -> np.ndarray:
    """
    Subordinator kernel u(t, x) with x-transform exp(-t Psi(mu)) from the moment-matched weights.
    Terms are summed as expm1, which the vanishing weight sum leaves unchanged.

    :param ov: Order vector.
    :param t: Time t > 0.
    :param xs: Points x >= 0; u(t, 0) = 0.
    :param nodes: Number of terms, configured pseudo_nodes if None.
    :return: Kernel values.
    """
    nodes = FCConfig().get("pseudo_nodes") if nodes is None else nodes
    ctx = evaluation_context(nodes)
    w = _kernel_weights(nodes)
    powers = [(ctx.mpf(lam), nu, _node_powers(nodes, nu)) for lam, nu in ov.pairs]
    t = ctx.mpf(t)

    def value(x: float) -> float:
        if x <= 0:
            return 0.0
        a = ctx.ln2 / ctx.mpf(x)
        rates = [(-t * lam * ctx.power(a, nu), p) for lam, nu, p in powers]
        total = ctx.fsum(w[j] * ctx.expm1(ctx.fsum(r * p[j] for r, p in rates)) for j in range(nodes))
        return float(total * a / ctx.ln2)

    xs = np.atleast_1d(np.asarray(xs, dtype=float))
    return _finite(np.array(parallel_map(value, xs), dtype=float).reshape(xs.shape), "subordinator kernel")


def pseudo_time_kernel(ov: OrderVector, ts: np.ndarray, xs: np.ndarray, k: int = 0, nodes: int = None) -> np.ndarray:
    """
    Kernel g_k(t, x) with t-transform K_k(mu) exp(-x Psi(mu)), K_k(mu) = sum over nu_i > k of
    lambda_i mu^{nu_i - k - 1}. g_0 is the inverse kernel l(t, x).

    :param ov: Order vector.
    :param ts: Times t > 0.
    :param xs: Points x >= 0, broadcast against ts.
    :param k: Index of the initial condition.
    :param nodes: Number of terms, configured pseudo_nodes if None.
    :return: Kernel values, shape of the broadcast inputs.
    """
    nodes = FCConfig().get("pseudo_nodes") if nodes is None else nodes
    ts, xs = np.broadcast_arrays(np.asarray(ts, dtype=float), np.asarray(xs, dtype=float))
    if np.any(ts <= 0) or np.any(xs < 0):
        raise InvalidParams("Time kernels need t > 0 and x >= 0.")

    ctx = evaluation_context(nodes)
    v = _stehfest_weights(nodes)
    shift = _node_powers(nodes, -(k + 1.0))
    terms = [(ctx.mpf(lam), nu, _node_powers(nodes, nu)) for lam, nu in ov.pairs]
    boundary = [(lam, nu, p) for lam, nu, p in terms if nu > k]
    if not boundary:
        return np.zeros(ts.shape)

    def value(point: Tuple[float, float]) -> float:
        t, x = point
        a = ctx.ln2 / ctx.mpf(t)
        x = ctx.mpf(x)
        rates = [(-x * lam * ctx.power(a, nu), p) for lam, nu, p in terms]
        weights = [(lam * ctx.power(a, nu - k - 1.0), p) for lam, nu, p in boundary]
        total = ctx.fsum(v[j] * shift[j] * ctx.fsum(c * p[j] for c, p in weights)
                         * ctx.exp(ctx.fsum(r * p[j] for r, p in rates)) for j in range(nodes))
        return float(total * a / ctx.ln2)

    values = parallel_map(value, list(zip(ts.ravel(), xs.ravel())))
    return _finite(np.array(values, dtype=float).reshape(ts.shape), f"kernel g_{k}")
