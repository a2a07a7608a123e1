import math
from fractions import Fraction

import numpy as np
import pytest
from scipy.special import erfc, erfcx

from fraccomp.laplace.hyperbola import hyperbola_parameters, sector_angle
from fraccomp.laplace.inversion import invert, invert_grid, invert_in_sector, invert_points, richardson_diagnostic
from fraccomp.laplace.stehfest import stehfest_coefficients, stehfest_sum
from fraccomp.laplace.transforms import FCTransform, InversionConfig, principal_power
from fraccomp.util.enums import InversionMethod
from fraccomp.util.errors import ContourFailure, InvalidConfig, InversionFailure, NumericalError

# Transform / inverse pairs with closed-form inverses
PAIRS = [
    ("1/mu", lambda m: 1.0 / m, lambda t: np.ones_like(t)),
    ("1/mu^2", lambda m: 1.0 / m ** 2, lambda t: t),
    ("1/(mu+1)", lambda m: 1.0 / (m + 1.0), lambda t: np.exp(-t)),
    ("1/(mu+1)^2", lambda m: 1.0 / (m + 1.0) ** 2, lambda t: t * np.exp(-t)),
    ("1/(mu+3)", lambda m: 1.0 / (m + 3.0), lambda t: np.exp(-3.0 * t)),
    ("1/(mu^2+1)", lambda m: 1.0 / (m ** 2 + 1.0), np.sin),
    ("mu/(mu^2+1)", lambda m: m / (m ** 2 + 1.0), np.cos),
    ("mu^-1/2", lambda m: principal_power(m, -0.5), lambda t: 1.0 / np.sqrt(np.pi * t)),
    ("exp(-sqrt mu)", lambda m: np.exp(-principal_power(m, 0.5)),
     lambda t: np.exp(-1.0 / (4.0 * t)) / (2.0 * np.sqrt(np.pi) * t ** 1.5)),
    ("exp(-sqrt mu)/mu", lambda m: np.exp(-principal_power(m, 0.5)) / m, lambda t: erfc(1.0 / (2.0 * np.sqrt(t)))),
]

TS = np.array([0.5, 1.0, 2.0, 5.0])


def test_invert_examples() -> None:
    assert invert(FCTransform(lambda m: 1.0 / m), 2.0) == pytest.approx(1.0, abs=1e-8)
    assert invert(FCTransform(lambda m: 1.0 / (m + 1.0)), 1.0) == pytest.approx(math.exp(-1.0), abs=1e-8)
    half = FCTransform(lambda m: principal_power(m, -0.5) * np.exp(-principal_power(m, 0.5)))
    assert invert(half, 1.0) == pytest.approx(math.exp(-0.25) / math.sqrt(math.pi), abs=1e-8)


@pytest.mark.parametrize("name,func,inverse", PAIRS, ids=[p[0] for p in PAIRS])
def test_oracle_battery(name, func, inverse) -> None:
    values = invert_grid(FCTransform(func), TS)
    assert np.max(np.abs(values - inverse(TS))) <= 1e-8


def test_grid_matches_pointwise() -> None:
    f = FCTransform(lambda m: 1.0 / (m + 1.0) ** 2)
    grid = invert_grid(f, TS)
    pointwise = np.array([invert(f, t) for t in TS])
    np.testing.assert_allclose(grid, pointwise, rtol=0, atol=1e-14)


# Inverses without exponential factors, where 14 Gaver-Stehfest terms reach six digits
SMOOTH_PAIRS = [
    ("mu^-3/2", lambda m: 0.5 * math.sqrt(math.pi) * principal_power(m, -1.5), np.sqrt),
    ("mu^-1/2", lambda m: principal_power(m, -0.5), lambda t: 1.0 / np.sqrt(np.pi * t)),
    ("log(mu)/mu", lambda m: np.log(m) / m, lambda t: -np.log(t) - np.euler_gamma),
    ("1/(mu (sqrt mu + 1))", lambda m: 1.0 / (m * (principal_power(m, 0.5) + 1.0)),
     lambda t: 1.0 - erfcx(np.sqrt(t))),
]


@pytest.mark.parametrize("name,func,inverse", SMOOTH_PAIRS, ids=[p[0] for p in SMOOTH_PAIRS])
def test_methods_agree(name, func, inverse) -> None:
    ts = np.geomspace(0.1, 10.0, 9)
    talbot = invert_grid(FCTransform(func), ts)
    stehfest = invert_grid(FCTransform(func), ts, InversionConfig(InversionMethod.GaverStehfest, 14))
    assert np.max(np.abs(talbot - inverse(ts))) <= 1e-8
    assert np.max(np.abs(talbot - stehfest)) <= 1e-6


def test_linearity() -> None:
    f = FCTransform(lambda m: 1.0 / (m + 1.0))
    g = FCTransform(lambda m: principal_power(m, -0.5))
    a, b = 2.5, -0.75
    combined = invert_grid(f.scaled(a) + g.scaled(b), TS)
    separate = a * invert_grid(f, TS) + b * invert_grid(g, TS)
    assert np.max(np.abs(combined - separate)) <= 1e-10


def test_complex_valued_transform() -> None:
    # e^{i t} has transform 1 / (mu - i)
    f = FCTransform(lambda m: 1.0 / (m - 1j), complex_valued=True)
    values = invert_grid(f, TS)
    np.testing.assert_allclose(values, np.exp(1j * TS), rtol=0, atol=1e-8)


def test_contour_failure_reports_indices() -> None:
    f = FCTransform(lambda m: np.exp(m * m))
    with pytest.raises(ContourFailure) as excinfo:
        invert_grid(f, TS)
    assert excinfo.value.indices == [0, 1, 2, 3]


def test_stehfest_fallback_flags_points() -> None:
    f = FCTransform(lambda m: np.exp(m * m))
    _, diagnostics = invert_points(f, TS, stehfest_fallback=True)
    assert diagnostics["stehfest_points"] == 4


def test_invalid_configs() -> None:
    with pytest.raises(InvalidConfig):
        InversionConfig(InversionMethod.Talbot, 4)
    with pytest.raises(InvalidConfig):
        InversionConfig(InversionMethod.GaverStehfest, 15)
    with pytest.raises(InvalidConfig):
        InversionConfig(InversionMethod.GaverStehfest, 20)
    with pytest.raises(InvalidConfig):
        invert(FCTransform(lambda m: 1.0 / m), -1.0)


def test_stehfest_coefficients() -> None:
    assert stehfest_coefficients(4) == (-2, 26, -48, 24)
    for n in (8, 14, 18, 48):
        assert sum(stehfest_coefficients(n)) == 0
    v = stehfest_coefficients(14)
    assert v[0] == Fraction(1, 360)
    assert v[1] == Fraction(-461, 72)
    assert all(isinstance(c, Fraction) for c in v)
    with pytest.raises(InvalidConfig):
        stehfest_coefficients(13)


def test_stehfest_sum_rejects_non_finite_values() -> None:
    f = FCTransform(lambda m: np.where(m > 1.0, np.nan, 1.0 / m))
    with pytest.raises(InversionFailure, match="not finite at 2 point") as excinfo:
        stehfest_sum(f, np.array([0.5, 1.0, 20.0]), 14)
    assert isinstance(excinfo.value, NumericalError)


@pytest.mark.parametrize("name,func,inverse", PAIRS[7:], ids=[p[0] for p in PAIRS[7:]])
def test_hyperbola_in_half_order_sector(name, func, inverse) -> None:
    values, diagnostics = invert_in_sector(FCTransform(func), TS, sector_angle(0.5))
    assert diagnostics["method"] == "hyperbola"
    assert diagnostics["stehfest_points"] == 0
    assert np.max(np.abs(values - inverse(TS))) <= 1e-10


def test_hyperbola_needs_a_sector_wider_than_half_plane() -> None:
    assert sector_angle(0.5) == pytest.approx(math.pi)
    assert sector_angle(0.9) == pytest.approx(math.pi / 1.8)
    with pytest.raises(ContourFailure):
        hyperbola_parameters(0.5 * math.pi)
    a, h, n = hyperbola_parameters(sector_angle(0.9))
    assert 0 < a < sector_angle(0.9) - 0.5 * math.pi
    assert n * h > 5.0

    # exp(-sqrt mu) / mu with a degenerate sector goes through Talbot
    func, inverse = PAIRS[9][1], PAIRS[9][2]
    values, diagnostics = invert_in_sector(FCTransform(func), TS, 0.5 * math.pi)
    assert diagnostics["method"] == "talbot"
    assert np.max(np.abs(values - inverse(TS))) <= 1e-8


def test_talbot_config_reads_overrides(fresh_config) -> None:
    fresh_config.set_precision({"talbot_nodes": 48})
    assert InversionConfig.talbot().nodes == 48


def test_richardson_diagnostic() -> None:
    report = richardson_diagnostic(FCTransform(lambda m: 1.0 / (m + 1.0)), TS)
    assert report["nodes"] == (32, 40)
    assert report["error_estimate"] < 1e-8
