import math
from typing import Any, Callable, Dict, Optional, Sequence, Tuple

import numpy as np
from scipy.optimize import brentq

from fraccomp.util.enums import SymbolKind
from fraccomp.util.errors import InvalidParams, NonConvergence

# Frequencies where a custom symbol is checked for Re F < 0
PROBE_FREQUENCIES = np.geomspace(1e-3, 1e3, 61)


class FCSpaceSymbol:
    """
    Fourier multiplier of a space operator, (F O_x u)(gamma) = F(gamma) (F u)(gamma), with the
    convention (F u)(gamma) = int e^{i gamma x} u(x) dx.

    Attributes:
        func: Vectorised callable of the frequency; receives |gamma| for radial 2-D symbols.
        dim: Space dimension, 1 or 2.
        kind: Built-in descriptor or custom.
        params: Descriptor parameters, used in output headers.
        symmetric: Whether F is real and even, so that solutions with even data are even.

    """

    def __init__(self, func: Callable[[np.ndarray], np.ndarray], dim: int = 1, kind: SymbolKind = SymbolKind.Custom,
                 params: Optional[Dict[str, Any]] = None, symmetric: bool = False) -> None:
        if dim not in (1, 2):
            raise InvalidParams(f"Space dimension must be 1 or 2, got {dim}.")
        self.func = func
        self.dim = dim
        self.kind = kind
        self.params = {} if params is None else dict(params)
        self.symmetric = symmetric

    def __call__(self, gamma: np.ndarray) -> np.ndarray:
        return np.asarray(self.func(np.asarray(gamma, dtype=float)))

    @property
    def complex_valued(self) -> bool:
        return np.iscomplexobj(self(PROBE_FREQUENCIES)) and not self.symmetric

    def check_dissipative(self) -> None:
        """
        Checks Re F(gamma) < 0 away from gamma = 0 on a range of probe frequencies.

        """
        probes = PROBE_FREQUENCIES if self.dim == 2 or self.symmetric else np.concatenate((-PROBE_FREQUENCIES,
                                                                                            PROBE_FREQUENCIES))
        values = self(probes)
        if not np.all(np.isfinite(values)):
            raise InvalidParams(f"Symbol {self.describe()} is not finite on the probe frequencies.")
        bad = np.real(values) >= 0
        if np.any(bad):
            raise InvalidParams(f"Symbol {self.describe()} must have Re F < 0 for gamma != 0, "
                                f"violated at gamma={probes[bad][0]:.4g}.")

    def cutoff(self, t_min: float, level: float) -> float:
        """
        Frequency beyond which |exp(t_min F(gamma))| < level.

        :param t_min: Smallest solved time.
        :param level: Spectral cutoff level in (0, 1).
        :return: gamma_max > 0.
        """
        target = math.log(level)

        def excess(gamma: float) -> float:
            probes = np.array([gamma, -gamma]) if self.dim == 1 else np.array([gamma])
            return t_min * float(np.real(self(probes)).max()) - target

        hi = 1.0
        while excess(hi) > 0:
            hi *= 2.0
            if hi > 1e12:
                raise NonConvergence(f"Symbol {self.describe()} does not decay fast enough for a spectral cutoff.")
        lo = hi / 2.0
        while lo > 1e-12 and excess(lo) <= 0:
            lo /= 2.0

        return float(brentq(excess, lo, hi, xtol=1e-10))

    def describe(self) -> str:
        if not self.params:
            return self.kind.value
        return self.kind.value + "(" + ", ".join(f"{k}={v}" for k, v in self.params.items()) + ")"


def frac_laplacian_sum(terms: Sequence[Tuple[float, float]], dim: int = 1) -> FCSpaceSymbol:
    """
    Multi-term fractional Laplacian, F(gamma) = -sum_i lambda_i |gamma|^(2 beta_i).

    :param terms: Pairs (lambda_i, beta_i), lambda_i > 0, 0 < beta_i <= 1.
    :param dim: Space dimension; in 2-D the symbol is radial.
    :return: Symbol.
    """
    terms = tuple((float(lam), float(beta)) for lam, beta in terms)
    if not terms:
        raise InvalidParams("frac_laplacian_sum needs at least one term.")
    for lam, beta in terms:
        if not lam > 0:
            raise InvalidParams(f"lambda_i must be > 0, got {lam}.")
        if not 0 < beta <= 1:
            raise InvalidParams(f"beta_i must be in (0, 1], got {beta}.")

    def func(gamma: np.ndarray) -> np.ndarray:
        magnitude = np.abs(gamma)
        return -sum(lam * magnitude ** (2.0 * beta) for lam, beta in terms)

    return FCSpaceSymbol(func, dim, SymbolKind.FracLaplacianSum, {"terms": [list(t) for t in terms]}, symmetric=True)


def riesz_feller(alpha: float, theta: float) -> FCSpaceSymbol:
    """
    Riesz-Feller operator of order alpha theta and skewness theta,
    F(gamma) = -|gamma|^(alpha theta) exp(i sgn(gamma) pi theta / 2).

    :param alpha: alpha > 0 with 0 < alpha theta <= 2.
    :param theta: 0 < theta < 1.
    :return: One-dimensional symbol.
    """
    if not 0 < theta < 1:
        raise InvalidParams(f"theta must be in (0, 1), got {theta}.")
    if not 0 < alpha * theta <= 2:
        raise InvalidParams(f"alpha * theta must be in (0, 2], got {alpha * theta}.")
    order = alpha * theta

    def func(gamma: np.ndarray) -> np.ndarray:
        return -np.abs(gamma) ** order * np.exp(1j * np.sign(gamma) * np.pi * theta / 2.0)

    return FCSpaceSymbol(func, 1, SymbolKind.RieszFeller, {"alpha": alpha, "theta": theta})


def custom_symbol(func: Callable[[np.ndarray], np.ndarray], dim: int = 1, symmetric: bool = False,
                  name: str = "") -> FCSpaceSymbol:
    """
    User supplied symbol, checked for Re F < 0 on probe frequencies.

    """
    symbol = FCSpaceSymbol(func, dim, SymbolKind.Custom, {"name": name} if name else None, symmetric)
    symbol.check_dissipative()

    return symbol


def symbol_from_params(params: Dict[str, Any]) -> FCSpaceSymbol:
    """
    Builds a built-in symbol from validated job parameters.

    """
    if params["kind"] == SymbolKind.FracLaplacianSum.value:
        return frac_laplacian_sum(params["terms"], params.get("dim", 1))
    return riesz_feller(params["alpha"], params["theta"])
