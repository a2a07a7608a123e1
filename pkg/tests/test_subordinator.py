import math

import mpmath
import numpy as np
import pytest
from scipy.integrate import quad
from scipy.special import erfcx, gamma

from fraccomp.laplace.stehfest import stehfest_coefficients
from fraccomp.subordinator.densities import (composition_transform_oracle, inverse_composition_closed,
                                             inverse_composition_transform, inverse_density, inverse_kernel_in_time,
                                             inverse_kernel_values,
                                             inverse_mgf, kernel_moment,
                                             reverse_composition_transform, subordinator_density,
                                             subordinator_kernel_values, subordinator_semigroup, subordinator_t_laplace,
                                             subordinator_t_laplace_quadrature)
from fraccomp.subordinator.orders import OrderVector
from fraccomp.subordinator.pseudo import pseudo_kernel, pseudo_time_kernel, pseudo_weights
from fraccomp.util.enums import KernelKind, Route
from fraccomp.util.errors import InvalidConfig, InvalidParams


def levy_inverse(t, x):
    return np.exp(-x ** 2 / (4.0 * t)) / np.sqrt(np.pi * t)


def levy_subordinator(t, x):
    return t * x ** -1.5 * np.exp(-t ** 2 / (4.0 * x)) / (2.0 * np.sqrt(np.pi))


def test_order_vector_validation() -> None:
    with pytest.raises(InvalidParams, match="nu_i must be > 0"):
        OrderVector.from_pairs([(1.0, -1.0)])
    with pytest.raises(InvalidParams, match="lambda_i must be > 0"):
        OrderVector.from_pairs([(0.0, 0.5)])
    with pytest.raises(InvalidParams):
        OrderVector(())


def test_order_vector_properties() -> None:
    ov = OrderVector.from_pairs([(1.0, 0.5), (2.0, 1.5)])
    assert ov.n_conditions == 2
    assert not ov.probabilistic
    assert ov.psi(np.array(4.0)) == pytest.approx(2.0 + 2.0 * 8.0)
    assert ov.boundary_kernel(np.array(4.0), 0) == pytest.approx(0.5 + 2.0 * 2.0)
    assert ov.boundary_kernel(np.array(4.0), 1) == pytest.approx(1.0)
    assert ov.scaled(0.5).pairs == ((1.0, 0.25), (2.0, 0.75))
    assert OrderVector.single(0.7).probabilistic


def test_inverse_density_half() -> None:
    kernel = inverse_density(OrderVector.single(0.5), 1.0, np.array([1.0]))
    assert kernel.values[0] == pytest.approx(math.exp(-0.25) / math.sqrt(math.pi), rel=1e-12)
    assert kernel.route == Route.Series

    xs = np.linspace(0.0, 5.0, 26)
    for t in (0.5, 2.0):
        values, _ = inverse_kernel_values(OrderVector.single(0.5), t, xs)
        np.testing.assert_allclose(values, levy_inverse(t, xs), rtol=0, atol=1e-12)


def test_inverse_density_weighted_order() -> None:
    # lambda l_nu(t, lambda x)
    xs = np.linspace(0.0, 3.0, 7)
    values, _ = inverse_kernel_values(OrderVector.single(0.5, lam=2.0), 1.0, xs)
    np.testing.assert_allclose(values, 2.0 * levy_inverse(1.0, 2.0 * xs), rtol=0, atol=1e-12)


def test_inverse_density_point_mass() -> None:
    kernel = inverse_density(OrderVector.single(1.0), 2.0, np.linspace(0.0, 5.0, 11))
    assert kernel.is_point_mass
    assert kernel.total_mass == 1.0
    assert kernel.moment(1) == pytest.approx(2.0)
    assert kernel_moment(OrderVector.single(1.0), 2.0, KernelKind.Inverse, 1) == pytest.approx(2.0)
    assert kernel_moment(OrderVector.single(1.0), 2.0, KernelKind.Subordinator, 1) == pytest.approx(2.0)


def test_inverse_density_small_order() -> None:
    xs = np.linspace(0.0, 5.0, 51)
    kernel = inverse_density(OrderVector.single(0.01), 1.0, xs)
    assert np.max(np.abs(kernel.values - np.exp(-xs))) <= 0.05


@pytest.mark.parametrize("nu", [0.3, 0.5, 0.7, 0.9])
def test_wright_matches_inversion(nu: float) -> None:
    xs = np.linspace(0.1, 3.0, 15)
    ov = OrderVector.single(nu)
    series, _ = inverse_kernel_values(ov, 1.0, xs, Route.Series)
    inversion, _ = inverse_kernel_values(ov, 1.0, xs, Route.Inversion)
    assert np.max(np.abs(series - inversion)) <= 1e-8


def test_subordinator_density_half() -> None:
    kernel = subordinator_density(OrderVector.single(0.5), 1.0, np.array([0.0, 1.0]))
    assert kernel.values[0] == 0.0
    assert kernel.values[1] == pytest.approx(math.exp(-0.25) / (2.0 * math.sqrt(math.pi)), rel=1e-12)

    xs = np.geomspace(0.05, 10.0, 20)
    values, _ = subordinator_kernel_values(OrderVector.single(0.5), 2.0, xs)
    np.testing.assert_allclose(values, levy_subordinator(2.0, xs), rtol=1e-10)


def test_subordinator_inversion_matches_series() -> None:
    ov = OrderVector.single(0.6)
    xs = np.linspace(0.2, 3.0, 15)
    series, _ = subordinator_kernel_values(ov, 1.0, xs, Route.Series)
    inversion, _ = subordinator_kernel_values(ov, 1.0, xs, Route.Inversion)
    assert np.max(np.abs(series - inversion)) <= 1e-8


def test_multi_order_probabilistic_kernel_is_density() -> None:
    ov = OrderVector.from_pairs([(2.0, 0.3), (1.0, 0.8)])
    kernel = subordinator_density(ov, 1.0, np.linspace(0.0, 10.0, 101))
    assert kernel.route == Route.Inversion
    # contour rounding only
    assert kernel.min_value >= -1e-9


@pytest.mark.slow
@pytest.mark.parametrize("nu", [0.5, 1.5, 2.5])
@pytest.mark.parametrize("t", [0.5, 1.0, 2.0])
def test_subordinator_normalisation(nu: float, t: float) -> None:
    assert kernel_moment(OrderVector.single(nu), t, KernelKind.Subordinator, 0) == pytest.approx(1.0, abs=1e-6)


@pytest.mark.parametrize("nu", [1.5, 2.5])
def test_pseudo_kernel_structure(nu: float) -> None:
    ov = OrderVector.single(nu)
    assert kernel_moment(ov, 1.0, KernelKind.Subordinator, 0) == pytest.approx(1.0, abs=1e-6)
    assert kernel_moment(ov, 1.0, KernelKind.Subordinator, 1) == pytest.approx(0.0, abs=1e-6)
    kernel = subordinator_density(ov, 1.0, np.linspace(0.0, 20.0, 2001))
    assert kernel.min_value < -1e-3
    assert kernel.diagnostics["method"] == "moment_matched_stehfest"
    assert kernel.diagnostics["nodes"] == 48


def test_pseudo_weights_constraints() -> None:
    ctx = mpmath.MPContext()
    ctx.dps = 200
    w = pseudo_weights(48)
    ks = range(1, 49)
    scale = max(abs(v) for v in w)
    tol = ctx.mpf(10) ** -30
    assert scale > 1e25
    assert abs(ctx.fsum(w)) <= tol
    assert abs(ctx.fsum(v * ctx.log(k) for v, k in zip(w, ks)) + 1) <= tol
    assert abs(ctx.fsum(v * k for v, k in zip(w, ks))) <= tol
    # the correction leaves the sums against k^-j, j < N/2, of ln2 * V unchanged
    base = [ctx.ln2 * ctx.mpf(v.numerator) / v.denominator for v in stehfest_coefficients(48)]
    for j in (1, 5, 23):
        moved = ctx.fsum((v - b) * ctx.mpf(k) ** -j for v, b, k in zip(w, base, ks))
        assert abs(moved) <= tol
    with pytest.raises(InvalidConfig):
        pseudo_weights(47)


@pytest.mark.parametrize("delta,x", [(0.5, 1.0), (0.2, 0.5), (2.0, 1.0), (0.5, 3.0)])
def test_pseudo_kernel_t_laplace_identity(delta: float, x: float) -> None:
    # int e^{-delta t} (1/x) sum_k w_k exp(-t (k a)^nu) dt = (1/x) sum_k w_k / (delta + (k a)^nu), a = ln2 / x
    nu = 1.5
    ctx = mpmath.MPContext()
    ctx.dps = 80
    a = ctx.ln2 / x
    w = pseudo_weights(48)
    transform = ctx.fsum(v / (delta + (k * a) ** nu) for k, v in enumerate(w, start=1)) / x
    assert float(transform) == pytest.approx(subordinator_t_laplace(nu, delta, x), abs=1e-10)


def test_pseudo_kernels_match_configured_nodes(fresh_config) -> None:
    ov = OrderVector.single(1.5)
    xs = np.array([0.5, 1.0, 2.0])
    default = pseudo_kernel(ov, 1.0, xs)
    np.testing.assert_allclose(pseudo_kernel(ov, 1.0, xs, nodes=56), default, rtol=0, atol=1e-5)
    fresh_config.set_precision({"pseudo_nodes": 40})
    np.testing.assert_allclose(pseudo_kernel(ov, 1.0, xs), pseudo_kernel(ov, 1.0, xs, nodes=40), rtol=0, atol=0)
    assert pseudo_kernel(ov, 1.0, np.array([0.0]))[0] == 0.0

    # the inverse kernel is g_0 and only orders above k feed g_k
    ts = np.array([0.5, 1.0, 2.0])
    np.testing.assert_allclose(pseudo_time_kernel(ov, ts, 1.0), inverse_kernel_in_time(ov, ts, 1.0), rtol=0, atol=0)
    assert not pseudo_time_kernel(ov, ts, 1.0, k=2).any()
    with pytest.raises(InvalidParams):
        pseudo_time_kernel(ov, ts, -1.0)


@pytest.mark.parametrize("nu", [0.5, 1.5])
@pytest.mark.parametrize("c", [0.5, 2.0])
def test_scaling(nu: float, c: float) -> None:
    ov = OrderVector.single(nu)
    xs = np.linspace(0.05, 4.0, 40)
    lhs, _ = subordinator_kernel_values(ov, 1.0, xs)
    rhs, _ = subordinator_kernel_values(ov, 1.0 / c, xs * c ** (-1.0 / nu))
    assert np.max(np.abs(lhs - c ** (-1.0 / nu) * rhs)) <= 1e-6


def test_inverse_mgf() -> None:
    ov = OrderVector.single(0.5)
    assert inverse_mgf(ov, 1.0, 0.0) == pytest.approx(1.0, abs=1e-14)
    assert inverse_mgf(ov, 1.0, 1.0) == pytest.approx(erfcx(1.0), abs=1e-12)
    assert inverse_mgf(OrderVector.single(1.0), 2.0, 0.5, Route.Integral) == pytest.approx(math.exp(-1.0))


def test_inverse_mgf_routes_agree() -> None:
    ov = OrderVector.single(0.7)
    closed = inverse_mgf(ov, 2.0, 0.3)
    assert closed == pytest.approx(inverse_mgf(ov, 2.0, 0.3, Route.Integral), abs=1e-6)


def test_inverse_mgf_multi_order_mass() -> None:
    ov = OrderVector.from_pairs([(2.0, 0.3), (1.0, 0.8)])
    assert inverse_mgf(ov, 1.0, 0.0) == pytest.approx(1.0, abs=1e-6)


@pytest.mark.slow
def test_inverse_mgf_above_order_one() -> None:
    # E_{1.5}(-delta t^1.5) against the integral of the real-axis inverse kernel
    ov = OrderVector.single(1.5)
    for t, delta in ((1.0, 0.5), (2.0, 0.2)):
        assert inverse_mgf(ov, t, delta, Route.Integral) == pytest.approx(inverse_mgf(ov, t, delta), abs=1e-6)


def test_subordinator_t_laplace_examples() -> None:
    assert subordinator_t_laplace(1.0, 1.0, 2.0) == pytest.approx(math.exp(-2.0), abs=1e-12)
    # E_{1/2,1/2}(z) = 1/sqrt(pi) + z E_{1/2,1}(z)
    expected = 1.0 / math.sqrt(math.pi) - erfcx(1.0)
    assert subordinator_t_laplace(0.5, 1.0, 1.0) == pytest.approx(expected, abs=1e-12)
    with pytest.raises(InvalidParams):
        subordinator_t_laplace(0.5, 0.0, 1.0)


@pytest.mark.slow
@pytest.mark.parametrize("nu,tol", [(0.4, 1e-6), (0.8, 1e-6), (1.5, 1e-6)])
def test_subordinator_t_laplace_quadrature(nu: float, tol: float) -> None:
    ov = OrderVector.single(nu)
    delta, x = 0.5, 1.0
    assert subordinator_t_laplace_quadrature(ov, delta, x) == pytest.approx(subordinator_t_laplace(nu, delta, x),
                                                                            abs=tol)


def test_inverse_composition_identity() -> None:
    rng = np.random.default_rng(7)
    mus = rng.uniform(0.2, 5.0, 20)
    xs = rng.uniform(0.1, 3.0, 20)
    for ov in (OrderVector.from_pairs([(1.0, 0.5), (2.0, 0.8)]), OrderVector.from_pairs([(1.0, 0.5), (1.0, 1.5)])):
        for mu, x in zip(mus, xs):
            closed = inverse_composition_closed(ov, 0.6, mu, x)
            oracle = float(composition_transform_oracle(ov, 0.6, np.array(mu), x))
            assert closed == pytest.approx(oracle, rel=1e-8)


@pytest.mark.slow
def test_inverse_composition_quadrature() -> None:
    ov = OrderVector.from_pairs([(2.0, 0.3), (1.0, 0.8)])
    for mu, x in ((0.5, 0.5), (1.0, 1.0), (3.0, 0.3)):
        quadrature, closed = inverse_composition_transform(ov, 0.5, mu, x)
        assert quadrature == pytest.approx(closed, rel=1e-6)


@pytest.mark.slow
def test_reverse_composition_quadrature() -> None:
    ov = OrderVector.from_pairs([(1.0, 0.5), (1.0, 0.9)])
    for mu, x in ((0.7, 0.5), (2.0, 1.0)):
        quadrature, closed = reverse_composition_transform(ov, 0.5, mu, x)
        assert quadrature == pytest.approx(closed, rel=1e-6)


@pytest.mark.slow
def test_duality() -> None:
    ov = OrderVector.single(0.7)

    def inverse_cdf(t: float, x: float) -> float:
        return quad(lambda y: inverse_kernel_values(ov, t, [y])[0][0], 0.0, x, epsabs=1e-10)[0]

    def subordinator_tail(x: float, t: float) -> float:
        return 1.0 - quad(lambda y: subordinator_kernel_values(ov, x, [y])[0][0], 0.0, t, epsabs=1e-10, limit=200)[0]

    points = [(0.5, 0.3), (0.5, 1.0), (0.5, 2.5), (1.0, 0.2), (1.0, 0.6), (1.0, 1.2), (1.0, 3.0),
              (2.0, 0.3), (2.0, 1.0), (2.0, 2.5)]
    for t, x in points:
        assert inverse_cdf(t, x) == pytest.approx(subordinator_tail(x, t), abs=1e-4)


def test_mollified_point_mass() -> None:
    xs = np.linspace(0.0, 4.0, 4001)
    kernel = inverse_density(OrderVector.single(1.0), 2.0, xs).mollified(0.05)
    assert not kernel.is_point_mass
    assert kernel.total_mass == pytest.approx(1.0, abs=1e-8)
    assert kernel.moment(1) == pytest.approx(2.0, abs=1e-8)


def test_invalid_kernel_time() -> None:
    with pytest.raises(InvalidParams):
        inverse_density(OrderVector.single(0.5), 0.0, np.array([1.0]))


def test_mean_of_inverse_subordinator() -> None:
    # E L_nu(t) = t^nu / Gamma(1 + nu)
    ov = OrderVector.single(0.6)
    assert kernel_moment(ov, 2.0, KernelKind.Inverse, 1) == pytest.approx(2.0 ** 0.6 / gamma(1.6), rel=1e-8)


@pytest.mark.slow
def test_semigroup_in_order() -> None:
    xs = np.linspace(0.2, 3.0, 8)
    composed, direct = subordinator_semigroup(0.5, 0.5, 1.0, xs)
    assert composed.route == Route.Composition
    np.testing.assert_allclose(composed.values, direct.values, rtol=0, atol=1e-4)


def test_semigroup_with_order_one() -> None:
    xs = np.linspace(0.5, 4.0, 5)
    composed, direct = subordinator_semigroup(0.5, 1.0, 2.0, xs)
    np.testing.assert_allclose(composed.values, levy_subordinator(2.0, xs), rtol=1e-10)
    np.testing.assert_allclose(direct.values, levy_subordinator(2.0, xs), rtol=1e-10)
    composed, _ = subordinator_semigroup(1.0, 0.5, 2.0, xs)
    np.testing.assert_allclose(composed.values, levy_subordinator(2.0, xs), rtol=1e-10)
    with pytest.raises(InvalidParams, match="Semigroup orders"):
        subordinator_semigroup(1.5, 0.5, 1.0, xs)
