"""
Spectral synthesis of fields from their Fourier transforms.

Fields live on a periodic grid of `n` points over one period. One-dimensional synthesis sums
u(x) = (1 / P) sum_k w_k U(gamma_k) exp(-i gamma_k x) over gamma_k = 2 pi k / P, |k| <= n/2, with
half weights at the two Nyquist frequencies; radial fields in the plane use the Hankel form
u(r) = (1 / 2 pi) int_0^inf U(k) J_0(k r) k dk on the nonnegative half of the same frequencies.
"""

import math
import warnings
from dataclasses import dataclass
from typing import Optional

import numpy as np
from scipy.integrate import simpson
from scipy.special import j0

from fraccomp.solver.symbols import FCSpaceSymbol
from fraccomp.util.config import FCConfig
from fraccomp.util.constants import *
from fraccomp.util.errors import AliasWarning, ImaginaryResidueError, InvalidParams
from fraccomp.util.logging_config import get_logger

logger = get_logger(__name__)


@dataclass(frozen=True)
class FourierGrid:
    """
    Periodic spatial grid and its frequencies.

    Attributes:
        period: Length P of the period.
        n: Number of spatial points, a power of two.
        dim: 1, or 2 for radial fields.

    """
    period: float
    n: int
    dim: int = 1

    @property
    def dx(self) -> float:
        return self.period / self.n

    @property
    def xs(self) -> np.ndarray:
        return (np.arange(self.n) - self.n // 2) * self.dx

    @property
    def gammas(self) -> np.ndarray:
        """
        Frequencies 2 pi k / P for k = -n/2..n/2, or k = 0..n/2 for radial grids.

        """
        half = self.n // 2
        k = np.arange(-half, half + 1) if self.dim == 1 else np.arange(half + 1)
        return 2.0 * np.pi * k / self.period

    @property
    def gamma_max(self) -> float:
        return np.pi * self.n / self.period

    def describe(self) -> str:
        return f"periodic n={self.n} period={self.period:g} gamma_max={self.gamma_max:.6g}"


def build_grid(sym: FCSpaceSymbol, t_min: float, xs: np.ndarray) -> FourierGrid:
    """
    Spectral grid resolving every field of the space problem from time t_min on.
    The period is PERIOD_FACTOR times the largest requested |x|, at least MIN_PERIOD; the
    frequencies reach the point where |exp(t_min F(gamma))| falls below the spectral cutoff.

    :param sym: Space symbol.
    :param t_min: Smallest positive solved time.
    :param xs: Requested points (radii in 2-D).
    :return: Grid.
    """
    config = FCConfig()
    if t_min < config.get("min_solve_time"):
        raise InvalidParams(f"Smallest solved time {t_min:g} is below min_solve_time "
                            f"{config.get('min_solve_time'):g}, the field is not resolvable.")

    extent = float(np.max(np.abs(xs))) if np.size(xs) else 0.0
    period = max(PERIOD_FACTOR * extent, MIN_PERIOD)
    gamma_cut = sym.cutoff(t_min, config.get("spectral_cutoff"))
    needed = max(2, math.ceil(period * gamma_cut / np.pi))
    n = max(config.get("min_grid_points"), 2 ** math.ceil(math.log2(needed)))
    if n > MAX_GRID_POINTS:
        warnings.warn(AliasWarning(f"Spectral cutoff {gamma_cut:.4g} needs {n} points, clipped to {MAX_GRID_POINTS}."))
        n = MAX_GRID_POINTS

    grid = FourierGrid(period, n, sym.dim)
    logger.debug(f"Spectral grid for {sym.describe()} from t={t_min:g}: {grid.describe()}")
    return grid


def check_alias(grid: FourierGrid, spectrum: np.ndarray, label: str) -> float:
    """
    Warns when the spectrum is not negligible at the edge of the frequency grid.

    :param grid: Grid.
    :param spectrum: Transforms, shape (times, frequencies).
    :param label: Name of the field in the warning.
    :return: Largest magnitude at the edge frequencies.
    """
    edges = np.abs(spectrum[:, -1]) if grid.dim == 2 else np.abs(spectrum[:, [0, -1]])
    edge = float(np.max(edges)) if edges.size else 0.0
    if edge > ALIAS_TOL:
        warnings.warn(AliasWarning(f"{label}: spectrum is {edge:.3g} at gamma_max={grid.gamma_max:.6g}."))
    return edge


def _real_part(values: np.ndarray, label: str) -> np.ndarray:
    if not np.iscomplexobj(values):
        return values
    residue = float(np.max(np.abs(values.imag))) if values.size else 0.0
    if residue > IMAG_RESIDUE_TOL:
        raise ImaginaryResidueError(f"{label}: imaginary residue {residue:.3g} after inversion "
                                    f"exceeds {IMAG_RESIDUE_TOL:g}.")
    return values.real


def synthesize(grid: FourierGrid, spectrum: np.ndarray, xs: Optional[np.ndarray] = None,
               label: str = "field") -> np.ndarray:
    """
    Fields at the requested points from their transforms on the grid frequencies.
    Requests equal to the grid points of a 1-D grid are served by one FFT per time.

    :param grid: Grid.
    :param spectrum: Transforms, shape (times, len(grid.gammas)).
    :param xs: Points (radii in 2-D), the grid points if None.
    :param label: Name of the field in error messages.
    :return: Real values, shape (times, len(xs)).
    """
    spectrum = np.atleast_2d(spectrum)
    gammas = grid.gammas
    if xs is None:
        xs = grid.xs
    xs = np.atleast_1d(np.asarray(xs, dtype=float))

    if grid.dim == 2:
        k_weights = simpson_weights(gammas.size, gammas[1] - gammas[0]) * gammas / (2.0 * np.pi)
        out = np.empty((spectrum.shape[0], xs.size), dtype=spectrum.dtype)
        for start in range(0, xs.size, SYNTHESIS_CHUNK):
            rs = xs[start:start + SYNTHESIS_CHUNK]
            out[:, start:start + SYNTHESIS_CHUNK] = spectrum @ (j0(np.outer(gammas, rs)) * k_weights[:, None])
        return _real_part(out, label)

    coeffs = spectrum / grid.period
    coeffs[:, [0, -1]] *= 0.5
    if xs.size == grid.n and np.allclose(xs, grid.xs, rtol=0, atol=1e-12 * grid.period):
        folded = coeffs[:, :-1].copy()
        folded[:, 0] += coeffs[:, -1]
        k = np.arange(-(grid.n // 2), grid.n // 2)
        signs = np.where(k % 2 == 0, 1.0, -1.0)
        out = np.fft.fft(np.fft.ifftshift(folded * signs, axes=1), axis=1)
        return _real_part(out, label)

    out = np.empty((spectrum.shape[0], xs.size), dtype=complex)
    for start in range(0, xs.size, SYNTHESIS_CHUNK):
        phase = np.exp(-1j * np.outer(xs[start:start + SYNTHESIS_CHUNK], gammas))
        out[:, start:start + SYNTHESIS_CHUNK] = coeffs @ phase.T
    return _real_part(out, label)


def simpson_weights(count: int, h: float) -> np.ndarray:
    """
    Composite Simpson weights of an odd number of equally spaced points.

    """
    if count < 3 or count % 2 == 0:
        raise InvalidParams(f"Simpson weights need an odd number of at least 3 points, got {count}.")
    weights = np.ones(count)
    weights[1:-1:2] = 4.0
    weights[2:-1:2] = 2.0
    return weights * h / 3.0


def forward_transform(xs: np.ndarray, values: np.ndarray, gammas: np.ndarray, dim: int = 1) -> np.ndarray:
    """
    Fourier transform of sampled data, int e^{i gamma x} f(x) dx, or
    2 pi int_0^inf f(r) J_0(gamma r) r dr for radial data in the plane, by Simpson's rule.

    :param xs: Sample points (radii in 2-D), increasing.
    :param values: Samples.
    :param gammas: Frequencies.
    :param dim: 1 or 2.
    :return: Transform at the frequencies.
    """
    xs = np.asarray(xs, dtype=float)
    values = np.asarray(values, dtype=float)
    out = np.empty(gammas.shape, dtype=float if dim == 2 else complex)
    for start in range(0, gammas.size, SYNTHESIS_CHUNK):
        block = gammas[start:start + SYNTHESIS_CHUNK]
        if dim == 2:
            integrand = 2.0 * np.pi * j0(np.outer(block, xs)) * (xs * values)[None, :]
        else:
            integrand = np.exp(1j * np.outer(block, xs)) * values[None, :]
        out[start:start + SYNTHESIS_CHUNK] = simpson(integrand, x=xs, axis=1)

    return out
