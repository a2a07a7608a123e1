from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from fraccomp.util.config import FCConfig
from fraccomp.util.constants import *
from fraccomp.util.enums import InversionMethod
from fraccomp.util.errors import InvalidConfig


def principal_power(mu: np.ndarray, nu: float) -> np.ndarray:
    """
    Principal branch of mu^nu, exp(nu Log mu) with Log the principal logarithm.
    Real nonnegative input stays real.

    :param mu: Points of the complex plane (or nonnegative reals).
    :param nu: Exponent.
    :return: mu^nu.
    """
    mu = np.asarray(mu)
    if not np.iscomplexobj(mu):
        with np.errstate(divide="ignore"):
            return np.power(mu.astype(float), nu)

    with np.errstate(divide="ignore", invalid="ignore"):
        return np.exp(nu * np.log(mu))


class FCTransform:
    """
    One-sided Laplace transform of a function, as a vectorised callable.

    Attributes:
        func: Callable evaluated on arrays of Laplace variables. When inverting at several
              points, it receives an array of shape (n_points, n_nodes) whose row i belongs to
              point i, and must broadcast accordingly.
        domain_note: Branch cut and analyticity notes.
        complex_valued: Whether the original is complex valued (no conjugate symmetry).

    """

    def __init__(self, func: Callable[[np.ndarray], np.ndarray], domain_note: str = "principal branch of mu^nu, "
                 "cut on the negative real axis", complex_valued: bool = False) -> None:
        self.func = func
        self.domain_note = domain_note
        self.complex_valued = complex_valued

    def __call__(self, mu: np.ndarray) -> np.ndarray:
        return self.func(mu)

    def __add__(self, other: "FCTransform") -> "FCTransform":
        return FCTransform(lambda mu: self.func(mu) + other.func(mu), self.domain_note,
                           self.complex_valued or other.complex_valued)

    def scaled(self, factor: float) -> "FCTransform":
        return FCTransform(lambda mu: factor * self.func(mu), self.domain_note, self.complex_valued)


@dataclass(frozen=True)
class InversionConfig:
    """
    Method and parameters of a numerical Laplace inversion.

    Attributes:
        method: Talbot or Gaver-Stehfest.
        nodes: Number of contour nodes (Talbot) or terms (Gaver-Stehfest).
        contour_scale: Multiplier of the Talbot contour size r = scale * 2 M / (5 t).
        tol: Largest admissible rounding error estimate of a Talbot sum.

    """
    method: InversionMethod = InversionMethod.Talbot
    nodes: int = TALBOT_NODES
    contour_scale: float = TALBOT_SCALE
    tol: float = TALBOT_TOL

    def __post_init__(self) -> None:
        if self.method == InversionMethod.Talbot:
            if self.nodes < TALBOT_MIN_NODES:
                raise InvalidConfig(f"Talbot needs at least {TALBOT_MIN_NODES} nodes, got {self.nodes}.")
            if not self.contour_scale > 0:
                raise InvalidConfig(f"Contour scale must be > 0, got {self.contour_scale}.")
        elif self.method == InversionMethod.GaverStehfest:
            if self.nodes % 2 or not 2 <= self.nodes <= STEHFEST_MAX_NODES:
                raise InvalidConfig(f"Gaver-Stehfest needs an even number of terms <= {STEHFEST_MAX_NODES}, "
                                    f"got {self.nodes}.")
        else:
            raise InvalidConfig(f"Unknown inversion method {self.method}.")

    @classmethod
    def talbot(cls, nodes: Optional[int] = None, contour_scale: Optional[float] = None) -> "InversionConfig":
        """
        Talbot config with defaults resolved from the run configuration.

        """
        config = FCConfig()
        return cls(InversionMethod.Talbot,
                   config.get("talbot_nodes") if nodes is None else nodes,
                   config.get("talbot_scale") if contour_scale is None else contour_scale,
                   config.get("talbot_tol"))

    @classmethod
    def stehfest(cls, nodes: Optional[int] = None) -> "InversionConfig":
        config = FCConfig()
        return cls(InversionMethod.GaverStehfest, config.get("stehfest_nodes") if nodes is None else nodes)
