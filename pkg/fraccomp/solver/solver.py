import time
from typing import Callable, Dict, Optional, Sequence, Tuple

import numpy as np

from fraccomp.composition.compose import FCComposable, compose_points
from fraccomp.composition.panels import gauss_legendre
from fraccomp.laplace.hyperbola import sector_angle
from fraccomp.laplace.inversion import invert_in_sector
from fraccomp.laplace.stehfest import stehfest_sum
from fraccomp.laplace.transforms import FCTransform, InversionConfig
from fraccomp.solver.fourier import FourierGrid, build_grid, check_alias, synthesize
from fraccomp.solver.problem import InitialCondition, SolutionField, TimeProblemSpec
from fraccomp.solver.resolvent import resolvent
from fraccomp.solver.symbols import FCSpaceSymbol
from fraccomp.subordinator.densities import default_route, inverse_kernel_values
from fraccomp.subordinator.orders import OrderVector
from fraccomp.subordinator.pseudo import pseudo_time_kernel
from fraccomp.util.enums import Route
from fraccomp.util.errors import InvalidParams, UnsupportedIC
from fraccomp.util.logging_config import get_logger

logger = get_logger(__name__)

# Gauss-Legendre nodes of the memory integral int_0^x exp(-Psi (x - y)) a_k(y) dy
TIME_DATA_NODES = 64

Spectrum = Callable[[float, np.ndarray, np.ndarray], np.ndarray]


def _times(ts: Sequence[float]) -> np.ndarray:
    ts = np.atleast_1d(np.asarray(ts, dtype=float))
    if ts.size == 0 or np.any(ts < 0) or not np.all(np.isfinite(ts)):
        raise InvalidParams("Solution times must be finite and >= 0.")
    return ts


def _spectral_grid(sym: FCSpaceSymbol, ts: np.ndarray, xs: Optional[np.ndarray],
                   grid: Optional[FourierGrid]) -> FourierGrid:
    if grid is None:
        if xs is None:
            raise InvalidParams("Either evaluation points or a spectral grid are needed.")
        positive = ts[ts > 0]
        grid = build_grid(sym, float(positive.min()) if positive.size else 1.0, xs)
    if grid.dim != sym.dim:
        raise InvalidParams(f"Grid dimension {grid.dim} does not match symbol dimension {sym.dim}.")
    return grid


def _synthesize_field(sym: FCSpaceSymbol, ts: np.ndarray, xs: Optional[np.ndarray], grid: FourierGrid,
                      spectrum_at: Spectrum, route: Route, label: str,
                      diagnostics: Optional[Dict] = None) -> SolutionField:
    """
    Evaluates the spectrum time by time and synthesises the field.

    """
    started = time.time()
    gammas = grid.gammas
    sym_values = sym(gammas)
    rows = [np.asarray(spectrum_at(float(t), gammas, sym_values)) for t in ts]
    spectrum = np.array(rows, dtype=complex if any(np.iscomplexobj(r) for r in rows) else float)

    edge = check_alias(grid, spectrum, label)
    xs_out = grid.xs if xs is None else np.atleast_1d(np.asarray(xs, dtype=float))
    values = synthesize(grid, spectrum, xs_out, label)
    zero = 0 if grid.dim == 2 else grid.n // 2

    diagnostics = dict(diagnostics or {})
    diagnostics.update({"grid": grid.describe(), "spectrum_edge": edge, "mass": np.real(spectrum[:, zero]).tolist(),
                        "symbol": sym.describe()})
    logger.info(f"Solved {label} by route {route.value} on {ts.size} time(s) x {xs_out.size} point(s) "
                f"in {time.time() - started:.2f} s")
    return SolutionField(ts, xs_out, values, route, sym.dim, diagnostics, spectrum, grid)


def solve_space(sym: FCSpaceSymbol, g0: InitialCondition, ts: Sequence[float], xs: Optional[np.ndarray] = None,
                grid: Optional[FourierGrid] = None) -> SolutionField:
    """
    Solution of du/dt = O_x u, u(0) = g0, from (F u)(t, gamma) = (F g0)(gamma) exp(t F(gamma)).

    :param sym: Space symbol.
    :param g0: Initial condition.
    :param ts: Times >= 0 (> 0 for a delta).
    :param xs: Evaluation points, the grid points if None.
    :param grid: Spectral grid, built from ts and xs if None.
    :return: Field.
    """
    ts = _times(ts)
    if g0.is_delta and np.any(ts == 0):
        raise InvalidParams("A delta initial condition has no values at t = 0.")
    grid = _spectral_grid(sym, ts, xs, grid)

    def spectrum_at(t: float, gammas: np.ndarray, sym_values: np.ndarray) -> np.ndarray:
        return np.asarray(g0.transform(gammas)) * np.exp(t * sym_values)

    return _synthesize_field(sym, ts, xs, grid, spectrum_at, Route.DirectTransform, "space problem",
                             {"initial": g0.kind})


def _memory_term(ov: OrderVector, mu: np.ndarray, x: np.ndarray, func: Callable, k: int) -> np.ndarray:
    """
    K_k(mu) int_0^x exp(-Psi(mu) (x - y)) a_k(y) dy, one row of mu per x.

    """
    nodes, weights = gauss_legendre(TIME_DATA_NODES)
    half = 0.5 * x.reshape(-1, 1)
    ys = half * (nodes[None, :] + 1.0)
    ws = half * weights[None, :]
    psi = ov.psi(mu)
    kernel = np.exp(-psi[:, :, None] * (x.reshape(-1, 1, 1) - ys[:, None, :]))
    return ov.boundary_kernel(mu, k) * np.sum(kernel * (ws * func(ys))[:, None, :], axis=2)


def time_transform(spec: TimeProblemSpec, x: np.ndarray, include_boundary: bool = True) -> FCTransform:
    """
    t-Laplace transform of the time problem solution,
    exp(-Psi x) L h + sum_k K_k int_0^x exp(-Psi (x - y)) a_k(y) dy, one row per x.

    """
    ov = spec.ov
    x = np.asarray(x, dtype=float).reshape(-1)
    h = spec.boundary_transform()
    data = [(k, d.func) for k, d in enumerate(spec.time_data) if d.func is not None]

    def func(mu: np.ndarray) -> np.ndarray:
        out = np.zeros(mu.shape, dtype=complex)
        if include_boundary:
            out = out + np.exp(-x.reshape(-1, 1) * ov.psi(mu)) * h(mu)
        for k, a_k in data:
            out = out + _memory_term(ov, mu, x, a_k, k)
        return out

    return FCTransform(func)


def time_values(spec: TimeProblemSpec, t: float, xs: np.ndarray, include_boundary: bool = True) -> np.ndarray:
    """
    Time problem solution u_2(t, x) at one time for many x >= 0. With some order > 1 the default
    boundary datum goes through the extended-precision real-axis sum; user data keep the
    double-precision Gaver-Stehfest sum.

    """
    xs = np.atleast_1d(np.asarray(xs, dtype=float))
    ts = np.full(xs.shape, float(t))
    ov = spec.ov
    if not ov.probabilistic and spec.boundary_h is None and not spec.uses_time_data:
        return pseudo_time_kernel(ov, ts, xs) if include_boundary else np.zeros(xs.shape)

    transform = time_transform(spec, xs, include_boundary)
    if ov.probabilistic:
        values, _ = invert_in_sector(transform, ts, sector_angle(ov.max_order))
        return values
    return stehfest_sum(transform, ts, InversionConfig.stehfest().nodes)


def solve_time(spec: TimeProblemSpec, ts: Sequence[float], xs: np.ndarray) -> SolutionField:
    """
    Solution of sum_i lambda_i d^{nu_i} u / dt^{nu_i} + du/dx = 0, u(t, 0) = h(t), with time data a_k,
    by Laplace inversion at each x.

    :param spec: Time problem; h defaults to the inverse kernel boundary datum L h = K_0.
    :param ts: Times > 0.
    :param xs: Points x >= 0.
    :return: Field; for the single order 1 with default h, the point mass at x = t / lambda is
             reported in diagnostics["point_mass"] and values are zero.
    """
    ts = _times(ts)
    xs = np.atleast_1d(np.asarray(xs, dtype=float))
    if np.any(ts == 0) or np.any(xs < 0):
        raise InvalidParams("Time problem needs t > 0 and x >= 0.")
    ov = spec.ov
    diagnostics = {"orders": ov.describe(), "probabilistic": ov.probabilistic}

    if default_route(ov) == Route.PointMass and spec.boundary_h is None and not spec.uses_time_data:
        diagnostics["point_mass"] = (ts / ov.pairs[0][0]).tolist()
        return SolutionField(ts, xs, np.zeros((ts.size, xs.size)), Route.PointMass, 1, diagnostics)

    values = np.array([time_values(spec, t, xs) for t in ts])
    logger.info(f"Solved time problem for {spec.describe()} on {ts.size} x {xs.size} points")
    return SolutionField(ts, xs, values, Route.Inversion, 1, diagnostics)


def solve_direct(sym: FCSpaceSymbol, spec: TimeProblemSpec, ts: Sequence[float], xs: Optional[np.ndarray] = None,
                 grid: Optional[FourierGrid] = None) -> SolutionField:
    """
    Space-time solution from its transform sum_k K_k(mu) (F f_k)(gamma) / (Psi(mu) - F(gamma)),
    inverted in mu frequency by frequency and synthesised in x.

    :param sym: Space symbol.
    :param spec: Time problem carrying the initial conditions.
    :param ts: Times >= 0 (> 0 for a delta).
    :param xs: Evaluation points, the grid points if None.
    :param grid: Spectral grid, built from ts and xs if None.
    :return: Field.
    """
    ts = _times(ts)
    if spec.initial_conditions[0].is_delta and np.any(ts == 0):
        raise InvalidParams("A delta initial condition has no values at t = 0.")
    grid = _spectral_grid(sym, ts, xs, grid)
    ov = spec.ov
    data = {}

    def spectrum_at(t: float, gammas: np.ndarray, sym_values: np.ndarray) -> np.ndarray:
        if not data:
            transforms = spec.space_transforms(sym_values, gammas)
            data.update({k: d for k, d in enumerate(transforms) if np.any(d != 0)})
        if t == 0:
            return data.get(0, np.zeros(gammas.shape))
        out = np.zeros(gammas.shape, dtype=complex if np.iscomplexobj(sym_values) else float)
        for k, d in data.items():
            out = out + d * resolvent(ov, np.full(gammas.shape, t), sym_values, k)
        return out

    return _synthesize_field(sym, ts, xs, grid, spectrum_at, Route.DirectTransform, "space-time problem",
                             {"orders": ov.describe(), "problem": spec.describe()})


def time_kernel(ov: OrderVector, k: int) -> FCComposable:
    """
    Kernel g_k(t, s) with t-Laplace transform K_k(mu) exp(-s Psi(mu)); g_0 is the inverse kernel.

    """
    if k == 0 and default_route(ov) == Route.PointMass:
        lam = ov.pairs[0][0]
        return FCComposable.dirac(lambda t: t / lam, name="inverse kernel")
    if k == 0:
        return FCComposable(lambda t, s: inverse_kernel_values(ov, t, s)[0], decay_hint=ov.inverse_scale,
                            name="inverse kernel")

    def func(t: float, s: np.ndarray) -> np.ndarray:
        s = np.atleast_1d(s)
        return pseudo_time_kernel(ov, np.full(s.shape, t), s, k)

    return FCComposable(func, decay_hint=ov.inverse_scale, name=f"kernel {k}")


def _compose_spectrum(kernel: FCComposable, t: float, sym_values: np.ndarray,
                      outer: Optional[Callable[[np.ndarray], np.ndarray]] = None) -> Tuple[np.ndarray, float]:
    """
    int_0^inf outer(s) g(t, s) ds per frequency, outer(s) = exp(s F(gamma)) by default, with the
    oscillation index of the kernel at gamma = 0.

    """
    gammas_index = np.arange(sym_values.size, dtype=float)
    if outer is None:
        def outer(s: np.ndarray) -> np.ndarray:
            return np.exp(s * sym_values)

    field = FCComposable(lambda s, _: outer(s), name="space transform")
    result = compose_points(field, kernel, t, gammas_index)
    zero = int(np.argmin(np.abs(sym_values)))
    value = abs(result.value[zero])
    index = float(result.l1[zero] / value) if value > 0 else float("inf")
    return result.value, index


def solve_composed(sym: FCSpaceSymbol, spec: TimeProblemSpec, ts: Sequence[float], xs: Optional[np.ndarray] = None,
                   grid: Optional[FourierGrid] = None, superpose: bool = False) -> SolutionField:
    """
    Space-time solution as the stochastic composition of the space solution with the time
    solution, carried out frequency by frequency: (F u)(t, gamma) = int (F u_1)(s, gamma) u_2(t, s) ds.

    Only f_0 nonzero: u_1 starts from f_0 and u_2 is the inverse kernel. With `superpose`, every
    nonzero f_j is composed with the kernel of transform K_j(mu) exp(-s Psi(mu)) and the results
    are summed. With time data a_k, u_1 starts from the delta and u_2 solves the time problem
    with h = 0 and data a_k.

    :param sym: Space symbol.
    :param spec: Time problem carrying the initial conditions.
    :param ts: Times >= 0 (> 0 for a delta).
    :param xs: Evaluation points, the grid points if None.
    :param grid: Spectral grid, built from ts and xs if None.
    :param superpose: Whether to superpose single-condition compositions for f_j, j >= 1.
    :return: Field with the largest kernel oscillation index in diagnostics.
    """
    ts = _times(ts)
    ov = spec.ov
    if spec.initial_conditions[0].is_delta and np.any(ts == 0):
        raise InvalidParams("A delta initial condition has no values at t = 0.")
    nonzero = spec.nonzero_conditions
    if not spec.uses_time_data and any(k > 0 for k in nonzero) and not superpose:
        raise UnsupportedIC(f"Initial conditions f_k with k >= 1 ({list(nonzero)}) need time data a_k "
                            f"or superposition.")
    grid = _spectral_grid(sym, ts, xs, grid)
    indices = []

    if spec.uses_time_data:
        data_kernel = FCComposable(lambda t, s: time_values(spec, t, s, include_boundary=False),
                                   decay_hint=ov.inverse_scale, name="time problem")
        terms = [(None, data_kernel)]
    else:
        terms = [(spec.initial_conditions[k], time_kernel(ov, k)) for k in nonzero]

    def spectrum_at(t: float, gammas: np.ndarray, sym_values: np.ndarray) -> np.ndarray:
        out = np.zeros(gammas.shape, dtype=complex if np.iscomplexobj(sym_values) else float)
        if t == 0:
            return spec.space_transforms(sym_values, gammas)[0]
        for ic, kernel in terms:
            value, index = _compose_spectrum(kernel, t, sym_values)
            indices.append(index)
            out = out + (value if ic is None else np.asarray(ic.transform(gammas)) * value)
        return out

    result = _synthesize_field(sym, ts, xs, grid, spectrum_at, Route.Composition, "composed space-time problem",
                               {"orders": ov.describe(), "problem": spec.describe(), "superpose": superpose})
    result.diagnostics["oscillation_index"] = max(indices) if indices else 1.0
    return result


def solve_resubordinated(sym: FCSpaceSymbol, ov: OrderVector, alpha: float, ts: Sequence[float],
                         xs: Optional[np.ndarray] = None, grid: Optional[FourierGrid] = None) -> SolutionField:
    """
    Delta-started space-time solution for the orders ov, further time-changed by the inverse
    kernel of order alpha: (F u)(t, gamma) = int R_0(s, F(gamma)) l_alpha(t, s) ds. It solves the
    problem with orders alpha ov.

    :param sym: Space symbol.
    :param ov: Orders of the inner problem.
    :param alpha: Order of the outer inverse kernel, 0 < alpha <= 1.
    :param ts: Times > 0.
    :param xs: Evaluation points, the grid points if None.
    :param grid: Spectral grid, built from ts and xs if None.
    :return: Field.
    """
    if not 0 < alpha <= 1:
        raise InvalidParams(f"Resubordination order must be in (0, 1], got {alpha}.")
    ts = _times(ts)
    if np.any(ts == 0):
        raise InvalidParams("A delta initial condition has no values at t = 0.")
    grid = _spectral_grid(sym, ts, xs, grid)
    kernel = time_kernel(OrderVector.single(alpha), 0)

    def spectrum_at(t: float, gammas: np.ndarray, sym_values: np.ndarray) -> np.ndarray:
        def inner(s: np.ndarray) -> np.ndarray:
            ss, zz = np.broadcast_arrays(np.asarray(s, dtype=float), sym_values)
            return resolvent(ov, ss.ravel(), zz.ravel()).reshape(ss.shape)

        value, _ = _compose_spectrum(kernel, t, sym_values, inner)
        return value

    return _synthesize_field(sym, ts, xs, grid, spectrum_at, Route.Composition, "resubordinated problem",
                             {"orders": ov.describe(), "alpha": alpha})


def limit_check_nu_zero(sym: FCSpaceSymbol, f0: InitialCondition, xs: np.ndarray, nu_small: float,
                        lambdas: Sequence[float] = (1.0,), ts: Sequence[float] = (1.0,),
                        grid: Optional[FourierGrid] = None) -> Tuple[SolutionField, SolutionField]:
    """
    Small-order solution next to the stationary limit of the orders going to zero,
    u_0 = F^{-1}[Lambda (F f_0) / (Lambda - F)] with Lambda = sum_i lambda_i, which solves
    Lambda (u - f_0) = O_x u.

    :param sym: Space symbol.
    :param f0: Initial condition.
    :param xs: Evaluation points.
    :param nu_small: Common small order, 0 < nu_small <= 0.05.
    :param lambdas: Weights lambda_i of the orders.
    :param ts: Times > 0.
    :param grid: Spectral grid, built from ts and xs if None.
    :return: Tuple (small-order field, limit field) on the same grid.
    """
    if not 0 < nu_small <= 0.05:
        raise InvalidParams(f"nu_small must be in (0, 0.05], got {nu_small}.")
    ov = OrderVector.from_pairs([(lam, nu_small) for lam in lambdas])
    weight = ov.total_weight
    small = solve_direct(sym, TimeProblemSpec(ov, (f0,)), ts, xs, grid)

    def spectrum_at(t: float, gammas: np.ndarray, sym_values: np.ndarray) -> np.ndarray:
        return weight * np.asarray(f0.transform(gammas)) / (weight - sym_values)

    limit = _synthesize_field(sym, small.ts, xs, small.grid, spectrum_at, Route.ClosedForm, "order-zero limit",
                              {"lambda_total": weight})
    logger.info(f"Order {nu_small:g} field differs from its limit by {small.sup_difference(limit):.3g}")
    return small, limit
