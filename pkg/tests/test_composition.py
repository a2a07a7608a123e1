import math

import numpy as np
import pytest
from scipy.integrate import simpson
from scipy.special import gamma

from fraccomp.composition.compose import FCComposable, compose, compose_grid, compose_points
from fraccomp.composition.grid import GridFunction
from fraccomp.composition.panels import panel_integral
from fraccomp.laplace.inversion import invert
from fraccomp.laplace.transforms import FCTransform, principal_power
from fraccomp.subordinator.densities import inverse_density, inverse_kernel_values, subordinator_density
from fraccomp.subordinator.orders import OrderVector
from fraccomp.util.errors import GridMismatch, TailDivergence


def levy_inverse(t, s):
    return np.exp(-s ** 2 / (4.0 * t)) / np.sqrt(np.pi * t)


def levy_subordinator(t, x):
    t, x = np.broadcast_arrays(np.asarray(t, dtype=float), np.asarray(x, dtype=float))
    with np.errstate(divide="ignore", invalid="ignore"):
        values = t * x ** -1.5 * np.exp(-t ** 2 / (4.0 * x)) / (2.0 * np.sqrt(np.pi))
    return np.where((x > 0) & (t > 0), values, 0.0)


def heat(s, x):
    with np.errstate(divide="ignore", invalid="ignore"):
        values = np.exp(-x ** 2 / (4.0 * s)) / np.sqrt(4.0 * np.pi * s)
    return np.where(s > 0, values, 0.0)


HALF_INVERSE = FCComposable(levy_inverse, decay_hint=lambda t: math.sqrt(t), name="l_1/2")


def test_dirac_pass_through() -> None:
    f = FCComposable(lambda s, x: np.exp(-s) + 0.0 * x, name="exp")
    g = FCComposable.dirac(lambda t: t)

    assert compose(f, g, 0.7, 0.0) == math.exp(-0.7)
    assert compose(f, g, 2.0, 3.0) == math.exp(-2.0)


def test_point_mass_without_values() -> None:
    with pytest.raises(ValueError):
        FCComposable.dirac(lambda t: t)(np.array([1.0]), np.array([1.0]))
    with pytest.raises(ValueError):
        FCComposable()


def test_mean_of_inverse_stable() -> None:
    ov = OrderVector.single(0.6)
    f = FCComposable(lambda s, x: s + 0.0 * x, name="identity")
    g = FCComposable(lambda t, s: inverse_kernel_values(ov, t, s)[0], decay_hint=lambda t: t ** 0.6, name="l_0.6")

    assert compose(f, g, 1.0, 0.0) == pytest.approx(1.0 / gamma(1.6), rel=1e-8)
    assert compose(f, g, 2.0, 0.0) == pytest.approx(2.0 ** 0.6 / gamma(1.6), rel=1e-8)


@pytest.mark.parametrize("x", [0.5, 1.0, 2.0])
def test_heat_composed_with_inverse_half(x: float) -> None:
    f = FCComposable(heat, name="heat")
    transform = FCTransform(lambda mu: np.exp(-x * principal_power(mu, 0.25)) / (2.0 * principal_power(mu, 0.75)))

    assert compose(f, HALF_INVERSE, 1.0, x) == pytest.approx(invert(transform, 1.0), abs=1e-7)


def test_compose_points_matches_single_points() -> None:
    f = FCComposable(heat, name="heat")
    xs = np.array([0.25, 1.0, 3.0])
    result = compose_points(f, HALF_INVERSE, 1.5, xs)

    assert result.value.shape == (3,)
    for x, value in zip(xs, result.value):
        assert compose(f, HALF_INVERSE, 1.5, x) == pytest.approx(value, abs=1e-10)
    assert result.oscillation_index == pytest.approx(1.0)


def test_mass_preservation() -> None:
    def gaussian(s, x):
        var = 2.0 * s + 1.0
        return np.exp(-x ** 2 / (2.0 * var)) / np.sqrt(2.0 * np.pi * var)

    xs = np.linspace(-60.0, 60.0, 2401)
    for t in (0.5, 1.0, 2.0):
        result = compose_points(FCComposable(gaussian), HALF_INVERSE, t, xs)
        assert simpson(result.value, x=xs) == pytest.approx(1.0, abs=1e-6)


def test_bilinearity() -> None:
    f1 = FCComposable(heat)
    f2 = FCComposable(lambda s, x: np.exp(-s) * np.cos(x))
    f12 = FCComposable(lambda s, x: 2.0 * heat(s, x) - 0.5 * np.exp(-s) * np.cos(x))
    g2 = FCComposable(lambda t, s: np.exp(-s / t) / t, decay_hint=lambda t: t)
    g12 = FCComposable(lambda t, s: 3.0 * levy_inverse(t, s) + np.exp(-s / t) / t, decay_hint=lambda t: t)

    t, x = 1.2, 0.8
    assert compose(f12, HALF_INVERSE, t, x) == pytest.approx(
        2.0 * compose(f1, HALF_INVERSE, t, x) - 0.5 * compose(f2, HALF_INVERSE, t, x), abs=1e-10)
    assert compose(f1, g12, t, x) == pytest.approx(
        3.0 * compose(f1, HALF_INVERSE, t, x) + compose(f1, g2, t, x), abs=1e-10)


def test_tail_divergence() -> None:
    ones = FCComposable(lambda a, b: np.ones(np.broadcast(a, b).shape))

    with pytest.raises(TailDivergence):
        compose(ones, ones, 1.0, 0.0)


def test_oscillation_index() -> None:
    damped = panel_integral(lambda s: np.cos(s) * np.exp(-s / 5.0), 1.0)

    assert damped.value == pytest.approx(0.2 / (0.04 + 1.0), abs=1e-7)
    assert damped.oscillation_index > 5.0


def test_compose_grid_semigroup() -> None:
    s = np.linspace(0.0, 30.0, 30001)
    xs = np.linspace(0.2, 5.0, 25)
    f = GridFunction.sample(levy_subordinator, s, xs, names=("s", "x"))
    g = GridFunction.sample(levy_subordinator, np.array([1.0, 2.0]), s, names=("t", "s"))
    composed = compose_grid(f, g)

    assert composed.values.shape == (2, xs.size)
    assert composed.names == ("t", "x")
    quarter = OrderVector.single(0.25)
    for row, t in zip(composed.values, composed.first):
        expected = subordinator_density(quarter, t, xs).values
        np.testing.assert_allclose(row, expected, rtol=0, atol=1e-4)
    assert composed.diagnostics["error_estimate"] < 1e-4


def test_compose_grid_sharp_peak() -> None:
    s = np.linspace(0.0, 4.0, 4001)
    xs = np.linspace(-2.0, 2.0, 9)
    f = GridFunction.sample(lambda s, x: np.exp(-s) * np.cos(x), s, xs)
    kernel = inverse_density(OrderVector.single(1.0), 1.0, s)
    assert kernel.is_point_mass

    outer = FCComposable(lambda s, x: np.exp(-s) * np.cos(x))
    symbolic = compose_points(outer, FCComposable.dirac(lambda t: t), 1.0, xs)
    for width in (0.05, 0.02):
        smooth = kernel.mollified(width)
        g = GridFunction(np.array([1.0]), s, smooth.values[None, :], names=("t", "s"))
        composed = compose_grid(f, g)
        assert np.max(np.abs(composed.values[0] - symbolic.value)) <= width ** 2


def test_compose_grid_mismatch() -> None:
    s = np.linspace(0.0, 1.0, 11)
    f = GridFunction.sample(lambda s, x: s + x, s, np.array([0.0, 1.0]))
    g = GridFunction.sample(lambda t, s: t * s, np.array([1.0]), np.linspace(0.0, 1.0, 21), names=("t", "s"))

    with pytest.raises(GridMismatch):
        compose_grid(f, g)
    with pytest.raises(GridMismatch):
        GridFunction(s, np.array([0.0, 1.0]), np.zeros((3, 2)))


def test_grid_function_frame() -> None:
    grid = GridFunction.sample(lambda t, x: t * x, np.array([1.0, 2.0]), np.array([0.5, 1.0, 1.5]), names=("t", "x"))
    frame = grid.to_frame()

    assert list(frame.columns) == ["t", "x", "value"]
    assert len(frame) == 6
    assert frame["value"].iloc[-1] == pytest.approx(3.0)
    np.testing.assert_allclose(grid.integrate_second(), [1.0, 2.0])
