import math
from dataclasses import dataclass
from typing import Iterable, Tuple

import numpy as np

from fraccomp.laplace.transforms import FCTransform, principal_power
from fraccomp.util.errors import InvalidParams


@dataclass(frozen=True)
class OrderVector:
    """
    Weighted orders of a multi-term time-fractional operator sum_i lambda_i d^{nu_i}/dt^{nu_i}.

    Attributes:
        pairs: Nonempty tuple of (lambda_i, nu_i), all positive.

    """
    pairs: Tuple[Tuple[float, float], ...]

    def __post_init__(self) -> None:
        if not self.pairs:
            raise InvalidParams("Order vector must contain at least one (lambda, nu) pair.")
        for lam, nu in self.pairs:
            if not lam > 0:
                raise InvalidParams(f"lambda_i must be > 0, got {lam}.")
            if not nu > 0:
                raise InvalidParams(f"nu_i must be > 0, got {nu}.")

    @classmethod
    def single(cls, nu: float, lam: float = 1.0) -> "OrderVector":
        return cls(((float(lam), float(nu)),))

    @classmethod
    def from_pairs(cls, pairs: Iterable[Tuple[float, float]]) -> "OrderVector":
        return cls(tuple((float(lam), float(nu)) for lam, nu in pairs))

    @property
    def lambdas(self) -> np.ndarray:
        return np.array([lam for lam, _ in self.pairs])

    @property
    def nus(self) -> np.ndarray:
        return np.array([nu for _, nu in self.pairs])

    @property
    def is_single(self) -> bool:
        return len(self.pairs) == 1

    @property
    def max_order(self) -> float:
        return float(self.nus.max())

    @property
    def probabilistic(self) -> bool:
        """
        Whether every order is <= 1, so that kernels are genuine probability densities.

        """
        return bool(np.all(self.nus <= 1.0))

    @property
    def n_conditions(self) -> int:
        """
        Number of initial conditions, max_i ceil(nu_i).

        """
        return max(math.ceil(nu) for nu in self.nus)

    @property
    def total_weight(self) -> float:
        return float(self.lambdas.sum())

    def scaled(self, alpha: float) -> "OrderVector":
        """
        Orders multiplied by alpha, (lambda_i, alpha nu_i).

        """
        if not alpha > 0:
            raise InvalidParams(f"Order scaling must be > 0, got {alpha}.")
        return OrderVector(tuple((lam, alpha * nu) for lam, nu in self.pairs))

    def decay_scale(self, t: float) -> float:
        """
        Typical size of the subordinator at time t, max_i (lambda_i t)^(1/nu_i).

        """
        return float(max((lam * t) ** (1.0 / nu) for lam, nu in self.pairs))

    def psi(self, mu: np.ndarray) -> np.ndarray:
        """
        Laplace exponent Psi(mu) = sum_i lambda_i mu^{nu_i}, principal branch.

        """
        return sum(lam * principal_power(mu, nu) for lam, nu in self.pairs)

    def psi_derivative(self, mu: np.ndarray) -> np.ndarray:
        return sum(lam * nu * principal_power(mu, nu - 1.0) for lam, nu in self.pairs)

    def inverse_scale(self, t: float) -> float:
        """
        Typical size of the inverse subordinator at time t, 1 / Psi(1 / t).

        """
        return float(1.0 / self.psi(np.array(1.0 / t)))

    def boundary_kernel(self, mu: np.ndarray, k: int) -> np.ndarray:
        """
        Weight of the k-th initial condition in the transformed problem,
        sum over nu_i > k of lambda_i mu^{nu_i - k - 1}.

        """
        mu = np.asarray(mu)
        terms = [lam * principal_power(mu, nu - k - 1.0) for lam, nu in self.pairs if nu > k]
        if not terms:
            return np.zeros_like(mu)
        return sum(terms)

    def boundary_transform(self, x: np.ndarray, k: int) -> FCTransform:
        """
        t-Laplace transform K_k(mu) exp(-x Psi(mu)) of the kernel carrying the k-th initial
        condition, one row per x.

        """
        x = np.asarray(x, dtype=float).reshape(-1, 1)
        return FCTransform(lambda mu: self.boundary_kernel(mu, k) * np.exp(-x * self.psi(mu)))

    def inverse_transform(self, x: np.ndarray) -> FCTransform:
        """
        t-Laplace transform of the inverse kernel, K_0(mu) exp(-x Psi(mu)), one row per x.

        """
        return self.boundary_transform(x, 0)

    def describe(self) -> str:
        return ";".join(f"{lam:g}:{nu:g}" for lam, nu in self.pairs)
