import math

import numpy as np
import pytest
from scipy.special import erf, erfcx

from fraccomp.composition.compose import FCComposable, compose_points
from fraccomp.laplace.inversion import invert_points
from fraccomp.laplace.transforms import FCTransform, principal_power
from fraccomp.solver.fourier import FourierGrid, build_grid, forward_transform, synthesize
from fraccomp.solver.problem import InitialCondition, SolutionField, TimeDatum, TimeProblemSpec
from fraccomp.solver.residual import pde_residual
from fraccomp.solver.resolvent import psi_roots, resolvent
from fraccomp.solver.solver import (limit_check_nu_zero, solve_composed, solve_direct, solve_resubordinated,
                                    solve_space, solve_time)
from fraccomp.solver.symbols import custom_symbol, frac_laplacian_sum, riesz_feller
from fraccomp.specfun.mittag_leffler import MLParams, mittag_leffler
from fraccomp.subordinator.densities import inverse_density, inverse_kernel_values
from fraccomp.subordinator.orders import OrderVector
from fraccomp.util.enums import Route
from fraccomp.util.errors import GridMismatch, InvalidParams, UnsupportedIC

HEAT = frac_laplacian_sum([(1.0, 1.0)])
XS = np.linspace(-5.0, 5.0, 41)
ROUTE_TS = (0.25, 1.0, 2.0)

algebraic_tails = pytest.mark.filterwarnings("ignore::fraccomp.util.errors.AliasWarning")


def levy_inverse(t, s):
    return np.exp(-s ** 2 / (4.0 * t)) / np.sqrt(np.pi * t)


def test_symbol_validation() -> None:
    with pytest.raises(InvalidParams, match="theta"):
        riesz_feller(1.5, 1.2)
    with pytest.raises(InvalidParams, match="alpha \\* theta"):
        riesz_feller(3.0, 0.8)
    with pytest.raises(InvalidParams, match="beta_i"):
        frac_laplacian_sum([(1.0, 1.5)])
    with pytest.raises(InvalidParams, match="Re F < 0"):
        custom_symbol(lambda gamma: gamma ** 2, name="antidiffusion")
    assert riesz_feller(1.5, 0.8).complex_valued
    assert not HEAT.complex_valued


def test_symbol_cutoff() -> None:
    assert HEAT.cutoff(1.0, 1e-12) == pytest.approx(math.sqrt(-math.log(1e-12)), rel=1e-8)
    assert frac_laplacian_sum([(1.0, 0.5)]).cutoff(2.0, 1e-12) == pytest.approx(-math.log(1e-12) / 2.0, rel=1e-8)


def test_grid_needs_min_solve_time() -> None:
    with pytest.raises(InvalidParams, match="min_solve_time"):
        build_grid(HEAT, 1e-4, XS)
    grid = build_grid(HEAT, 0.25, XS)
    assert grid.period == pytest.approx(320.0)
    assert grid.n & (grid.n - 1) == 0
    assert grid.gammas.size == grid.n + 1


def test_synthesis_paths_agree() -> None:
    grid = FourierGrid(64.0, 1024)
    spectrum = np.exp(-grid.gammas ** 2)[None, :]
    on_grid = synthesize(grid, spectrum)
    dense = synthesize(grid, spectrum, grid.xs[::7])
    np.testing.assert_allclose(dense[0], on_grid[0, ::7], rtol=0, atol=1e-12)
    np.testing.assert_allclose(on_grid[0], np.exp(-grid.xs ** 2 / 4.0) / math.sqrt(4.0 * math.pi), atol=1e-12)


def test_grid_initial_condition_transform() -> None:
    xs = np.linspace(-12.0, 12.0, 2401)
    ic = InitialCondition.from_grid(xs, np.exp(-xs ** 2 / 2.0) / math.sqrt(2.0 * math.pi))
    gammas = np.array([0.0, 0.5, 1.0, 2.0])
    np.testing.assert_allclose(ic.transform(gammas), np.exp(-gammas ** 2 / 2.0), atol=1e-9)
    assert ic(np.array([0.0]))[0] == pytest.approx(1.0 / math.sqrt(2.0 * math.pi), rel=1e-6)
    with pytest.raises(UnsupportedIC):
        InitialCondition.delta()(np.array([0.0]))


def test_radial_forward_transform() -> None:
    rs = np.linspace(0.0, 12.0, 2401)
    values = np.exp(-rs ** 2 / 2.0) / (2.0 * math.pi)
    gammas = np.array([0.0, 1.0, 1.5])
    np.testing.assert_allclose(forward_transform(rs, values, gammas, dim=2), np.exp(-gammas ** 2 / 2.0), atol=1e-9)


def test_problem_spec_validation() -> None:
    ov = OrderVector.single(1.5)
    spec = TimeProblemSpec(ov, (InitialCondition.gaussian(0.5),))
    assert len(spec.initial_conditions) == 2
    assert spec.nonzero_conditions == (0,)
    with pytest.raises(InvalidParams, match="takes 1 initial condition"):
        TimeProblemSpec(OrderVector.single(0.5), (InitialCondition.delta(), InitialCondition.zero()))
    with pytest.raises(InvalidParams, match="delta is only allowed"):
        TimeProblemSpec(ov, (InitialCondition.zero(), InitialCondition.delta()))


def test_solution_field_checks() -> None:
    with pytest.raises(GridMismatch):
        SolutionField(np.array([1.0]), np.array([0.0, 1.0]), np.zeros((2, 2)), Route.DirectTransform)
    with pytest.raises(InvalidParams, match="non-finite"):
        SolutionField(np.array([1.0]), np.array([0.0]), np.array([[np.nan]]), Route.DirectTransform)
    field = SolutionField(np.array([1.0, 2.0]), np.array([0.0, 1.0]), np.arange(4.0).reshape(2, 2),
                          Route.ClosedForm)
    np.testing.assert_array_equal(field.at(2.0), [2.0, 3.0])
    assert list(field.to_frame().columns) == ["t", "x", "value"]


def test_resolvent_against_mittag_leffler() -> None:
    ts = np.array([0.5, 1.0, 2.0])
    np.testing.assert_allclose(resolvent(OrderVector.single(1.0), ts, np.full(3, -2.0)), np.exp(-2.0 * ts),
                               rtol=1e-9)
    np.testing.assert_allclose(resolvent(OrderVector.single(0.5), ts, np.full(3, -1.0)), erfcx(np.sqrt(ts)),
                               rtol=1e-8)

    # nu > 1: E_{1.5}(z t^1.5) has poles right of the Talbot contour for large |z|
    ov = OrderVector.single(1.5)
    for z in (-1.0, -20.0):
        expected = [mittag_leffler(MLParams(1.5), z * t ** 1.5) for t in ts]
        np.testing.assert_allclose(resolvent(ov, ts, np.full(3, z)), expected, rtol=1e-7, atol=1e-10)
    expected = [t * mittag_leffler(MLParams(1.5, 2.0), -20.0 * t ** 1.5) for t in ts]
    np.testing.assert_allclose(resolvent(ov, ts, np.full(3, -20.0), k=1), expected, rtol=1e-7, atol=1e-10)

    with pytest.raises(InvalidParams, match="out of range"):
        resolvent(OrderVector.single(0.5), ts, np.full(3, -1.0), k=1)


def test_psi_roots() -> None:
    ov = OrderVector.from_pairs([(1.0, 0.5), (1.0, 1.5)])
    zs = np.array([-40.0 + 0.0j, -30.0 + 10.0j])
    roots = psi_roots(ov, zs)
    for z, row in zip(zs, roots):
        found = row[np.isfinite(row)]
        assert found.size >= 1
        np.testing.assert_allclose(ov.psi(found), z, atol=1e-8)


def test_space_route_heat_kernel() -> None:
    xs = np.linspace(-4.0, 4.0, 17)
    field = solve_space(HEAT, InitialCondition.delta(), [0.5, 1.0], xs)
    for t in (0.5, 1.0):
        np.testing.assert_allclose(field.at(t), np.exp(-xs ** 2 / (4.0 * t)) / math.sqrt(4.0 * math.pi * t),
                                   atol=1e-10)
    np.testing.assert_allclose(field.diagnostics["mass"], 1.0, atol=1e-12)
    with pytest.raises(InvalidParams, match="t = 0"):
        solve_space(HEAT, InitialCondition.delta(), [0.0, 1.0], xs)


def test_space_route_cauchy() -> None:
    xs = np.linspace(-4.0, 4.0, 17)
    field = solve_space(frac_laplacian_sum([(1.0, 0.5)]), InitialCondition.delta(), [1.0], xs)
    np.testing.assert_allclose(field.at(1.0), 1.0 / (math.pi * (1.0 + xs ** 2)), atol=5e-5)


def test_space_route_radial_heat() -> None:
    rs = np.linspace(0.0, 3.0, 7)
    field = solve_space(frac_laplacian_sum([(1.0, 1.0)], dim=2), InitialCondition.delta(), [1.0], rs)
    np.testing.assert_allclose(field.at(1.0), np.exp(-rs ** 2 / 4.0) / (4.0 * math.pi), atol=1e-6)


def test_space_route_gaussian_from_zero() -> None:
    xs = np.linspace(-3.0, 3.0, 13)
    field = solve_space(HEAT, InitialCondition.gaussian(0.5), [0.0, 1.0], xs)
    np.testing.assert_allclose(field.at(0.0), InitialCondition.gaussian(0.5)(xs), atol=1e-10)
    variance = 0.25 + 2.0
    np.testing.assert_allclose(field.at(1.0), np.exp(-xs ** 2 / (2.0 * variance)) / math.sqrt(2.0 * math.pi * variance),
                               atol=1e-10)


def test_direct_route_against_composition_in_space() -> None:
    width = 0.5
    xs = np.linspace(-3.0, 3.0, 13)
    spec = TimeProblemSpec(OrderVector.single(0.5), (InitialCondition.gaussian(width),))
    field = solve_direct(HEAT, spec, [1.0], xs)

    def spread(s, x):
        variance = 2.0 * s + width ** 2
        return np.exp(-x ** 2 / (2.0 * variance)) / np.sqrt(2.0 * np.pi * variance)

    reference = compose_points(FCComposable(spread, name="gaussian"),
                               FCComposable(levy_inverse, decay_hint=math.sqrt, name="l_1/2"), 1.0, xs)
    np.testing.assert_allclose(field.at(1.0), reference.value, atol=1e-6)


@algebraic_tails
def test_direct_route_symmetry_and_mass() -> None:
    xs = np.linspace(-3.0, 3.0, 13)
    field = solve_direct(HEAT, TimeProblemSpec.delta(OrderVector.single(0.5)), [0.5, 1.0], xs)
    np.testing.assert_allclose(field.values, field.values[:, ::-1], atol=1e-10)
    np.testing.assert_allclose(field.diagnostics["mass"], 1.0, atol=1e-8)
    assert field.route == Route.DirectTransform


@algebraic_tails
def test_direct_route_delta_away_from_origin() -> None:
    xs = np.array([1.0, 2.0])
    field = solve_direct(HEAT, TimeProblemSpec.delta(OrderVector.single(0.5)), [1.0], xs)
    transform = FCTransform(lambda mu: np.exp(-xs.reshape(-1, 1) * principal_power(mu, 0.25))
                            / (2.0 * principal_power(mu, 0.75)))
    expected, _ = invert_points(transform, np.ones(xs.size))
    np.testing.assert_allclose(field.at(1.0), expected, atol=2e-3)


@pytest.mark.slow
@algebraic_tails
@pytest.mark.parametrize("sym, pairs, tol", [
    (HEAT, [(1.0, 0.5)], 1e-4),
    (HEAT, [(1.0, 0.5), (1.0, 1.5)], 1e-4),
    (frac_laplacian_sum([(1.0, 0.5)]), [(1.0, 0.5), (1.0, 1.5)], 1e-4),
    (frac_laplacian_sum([(1.0, 0.7)]), [(1.0, 0.7)], 1e-4),
    (riesz_feller(1.5, 0.8), [(1.0, 0.6)], 1e-4),
])
def test_route_equivalence(sym, pairs, tol) -> None:
    spec = TimeProblemSpec.delta(OrderVector.from_pairs(pairs))
    direct = solve_direct(sym, spec, ROUTE_TS, XS)
    composed = solve_composed(sym, spec, ROUTE_TS, XS, grid=direct.grid)
    assert composed.route == Route.Composition
    assert direct.sup_difference(composed) <= tol


@pytest.mark.slow
@algebraic_tails
def test_composed_route_against_space_solution_composed_in_x() -> None:
    # int u_1(s, x) l(t, s) ds with u_1 from the space route, panel quadrature in s
    xs = np.linspace(-3.0, 3.0, 13)
    ic = InitialCondition.gaussian(0.5)
    for pairs in ([(1.0, 0.5)], [(2.0, 0.3), (1.0, 0.8)]):
        spec = TimeProblemSpec(OrderVector.from_pairs(pairs), (ic,))
        composed = solve_composed(HEAT, spec, [1.0], xs)

        def space_solution(s, x):
            return solve_space(HEAT, ic, np.ravel(s), xs, grid=composed.grid).values

        kernel = FCComposable(lambda t, s: inverse_kernel_values(spec.ov, t, s)[0], decay_hint=spec.ov.inverse_scale,
                              name="inverse kernel")
        reference = compose_points(FCComposable(space_solution, name="space solution"), kernel, 1.0, xs)
        np.testing.assert_allclose(composed.at(1.0), reference.value, atol=1e-6)


def test_composed_route_order_one_is_space_route() -> None:
    ov = OrderVector.single(1.0, lam=2.0)
    xs = np.linspace(-3.0, 3.0, 13)
    composed = solve_composed(HEAT, TimeProblemSpec(ov, (InitialCondition.gaussian(0.5),)), [1.0, 2.0], xs)
    space = solve_space(HEAT, InitialCondition.gaussian(0.5), [0.5, 1.0], xs, grid=composed.grid)
    np.testing.assert_allclose(composed.values, space.values, atol=1e-12)


def test_composed_route_needs_superposition() -> None:
    spec = TimeProblemSpec(OrderVector.single(1.5), (InitialCondition.gaussian(0.5), InitialCondition.gaussian(1.0)))
    with pytest.raises(UnsupportedIC, match="superposition"):
        solve_composed(HEAT, spec, [1.0], np.linspace(-2.0, 2.0, 5))


@pytest.mark.slow
def test_superposition_of_initial_conditions() -> None:
    xs = np.linspace(-4.0, 4.0, 17)
    spec = TimeProblemSpec(OrderVector.single(1.5), (InitialCondition.gaussian(0.5), InitialCondition.gaussian(1.0)))
    direct = solve_direct(HEAT, spec, [0.5, 1.0], xs)
    composed = solve_composed(HEAT, spec, [0.5, 1.0], xs, grid=direct.grid, superpose=True)
    assert direct.sup_difference(composed) <= 1e-4


@pytest.mark.slow
@algebraic_tails
def test_time_data_initial_condition() -> None:
    # a_0(y) = e^-y identifies f_0 = F^-1[1 / (1 + gamma^2)] = e^-|x| / 2
    xs = np.linspace(-3.0, 3.0, 13)
    datum = TimeDatum(lambda y: np.exp(-y), lambda z: 1.0 / (1.0 + z))
    spec = TimeProblemSpec(OrderVector.single(0.5), time_data=(datum,))
    direct = solve_direct(HEAT, spec, [1.0], xs)
    composed = solve_composed(HEAT, spec, [1.0], xs, grid=direct.grid)
    assert direct.sup_difference(composed) <= 1e-4


def test_time_route_inverse_kernel() -> None:
    xs = np.linspace(0.0, 4.0, 9)
    field = solve_time(TimeProblemSpec.delta(OrderVector.single(0.5)), [0.5, 1.0], xs)
    for t in (0.5, 1.0):
        np.testing.assert_allclose(field.at(t), levy_inverse(t, xs), atol=1e-8)

    ov = OrderVector.from_pairs([(1.0, 0.3), (0.5, 0.8)])
    field = solve_time(TimeProblemSpec.delta(ov), [1.0], xs)
    np.testing.assert_allclose(field.at(1.0), inverse_density(ov, 1.0, xs).values, atol=1e-8)


def test_time_route_point_mass() -> None:
    field = solve_time(TimeProblemSpec.delta(OrderVector.single(1.0, lam=2.0)), [1.0, 3.0], np.linspace(0.0, 2.0, 5))
    assert field.route == Route.PointMass
    assert field.diagnostics["point_mass"] == [0.5, 1.5]
    assert not field.values.any()


def test_time_route_with_time_data() -> None:
    c = 1.7
    xs = np.linspace(0.0, 3.0, 7)
    spec = TimeProblemSpec(OrderVector.single(0.5), boundary_h=FCTransform(lambda mu: np.zeros(mu.shape)),
                           time_data=(TimeDatum(lambda y: np.full(np.shape(y), c), lambda z: c / z),))
    field = solve_time(spec, [0.5, 2.0], xs)
    for t in (0.5, 2.0):
        np.testing.assert_allclose(field.at(t), c * erf(xs / (2.0 * math.sqrt(t))), atol=1e-7)
    with pytest.raises(InvalidParams, match="x >= 0"):
        solve_time(spec, [1.0], np.array([-1.0]))


@pytest.mark.slow
@algebraic_tails
def test_resubordination_scales_orders() -> None:
    ov = OrderVector.single(0.8)
    xs = np.linspace(-3.0, 3.0, 13)
    direct = solve_direct(HEAT, TimeProblemSpec.delta(ov.scaled(0.5)), [1.0], xs)
    nested = solve_resubordinated(HEAT, ov, 0.5, [1.0], xs, grid=direct.grid)
    assert direct.sup_difference(nested) <= 1e-4
    with pytest.raises(InvalidParams, match="Resubordination order"):
        solve_resubordinated(HEAT, ov, 1.5, [1.0], xs)


@algebraic_tails
def test_small_order_limit() -> None:
    xs = np.linspace(-3.0, 3.0, 25)
    small, limit = limit_check_nu_zero(HEAT, InitialCondition.delta(), xs, 0.01, ts=(1.0, 2.0))
    assert small.sup_difference(limit) <= 0.05
    away = np.abs(xs) >= 0.5
    np.testing.assert_allclose(limit.at(1.0)[away], np.exp(-np.abs(xs[away])) / 2.0, atol=1e-2)
    np.testing.assert_allclose(limit.at(1.0), limit.at(2.0), atol=1e-10)
    with pytest.raises(InvalidParams, match="nu_small"):
        limit_check_nu_zero(HEAT, InitialCondition.delta(), xs, 0.5)


@pytest.mark.slow
def test_pde_residual_of_direct_route() -> None:
    ov = OrderVector.single(0.5)
    ts = np.linspace(0.0, 2.0, 401)
    xs = np.linspace(-3.0, 3.0, 13)
    field = solve_direct(HEAT, TimeProblemSpec(ov, (InitialCondition.gaussian(0.5),)), ts, xs)
    residual = pde_residual(field, HEAT, ov)
    assert np.max(np.abs(residual[ts >= 0.5])) <= 1e-2
    with pytest.raises(InvalidParams, match="orders <= 1"):
        pde_residual(field, HEAT, OrderVector.single(1.5))
