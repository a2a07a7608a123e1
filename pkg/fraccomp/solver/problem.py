from dataclasses import dataclass, field
from typing import Any, Callable, Dict, Optional, Sequence, Tuple

import numpy as np
import pandas as pd

from fraccomp.laplace.transforms import FCTransform
from fraccomp.solver.fourier import FourierGrid, forward_transform
from fraccomp.subordinator.orders import OrderVector
from fraccomp.util.enums import Route
from fraccomp.util.errors import GridMismatch, InvalidParams, UnsupportedIC


@dataclass(frozen=True)
class InitialCondition:
    """
    Initial datum f(x) of a space-time problem, carried by its Fourier transform.

    Attributes:
        transform: Callable gamma -> (F f)(gamma); receives |gamma| for radial data in the plane.
        kind: "delta", "zero", "gaussian", "grid" or "custom".
        func: Optional pointwise values f(x), unavailable for the delta.
        params: Parameters, used in output headers.

    """
    transform: Callable[[np.ndarray], np.ndarray]
    kind: str = "custom"
    func: Optional[Callable[[np.ndarray], np.ndarray]] = None
    params: Dict[str, Any] = field(default_factory=dict)

    @classmethod
    def delta(cls) -> "InitialCondition":
        return cls(lambda gamma: np.ones(np.shape(gamma)), "delta")

    @classmethod
    def zero(cls) -> "InitialCondition":
        return cls(lambda gamma: np.zeros(np.shape(gamma)), "zero", lambda x: np.zeros(np.shape(x)))

    @classmethod
    def gaussian(cls, width: float, dim: int = 1) -> "InitialCondition":
        """
        Centred normal density with standard deviation `width` in each coordinate.

        """
        if not width > 0:
            raise InvalidParams(f"Gaussian width must be > 0, got {width}.")

        def func(x: np.ndarray) -> np.ndarray:
            x = np.asarray(x, dtype=float)
            return np.exp(-0.5 * (x / width) ** 2) / (np.sqrt(2.0 * np.pi) * width) ** dim

        return cls(lambda gamma: np.exp(-0.5 * (width * np.asarray(gamma)) ** 2), "gaussian", func,
                   {"width": width, "dim": dim})

    @classmethod
    def from_grid(cls, xs: np.ndarray, values: np.ndarray, dim: int = 1) -> "InitialCondition":
        """
        Sampled datum, transformed by Simpson's rule and interpolated linearly in x.

        """
        xs = np.asarray(xs, dtype=float)
        values = np.asarray(values, dtype=float)
        if xs.shape != values.shape or xs.size < 3 or np.any(np.diff(xs) <= 0):
            raise InvalidParams("Grid initial condition needs at least three increasing points with values.")

        return cls(lambda gamma: forward_transform(xs, values, np.atleast_1d(np.asarray(gamma, dtype=float)), dim),
                   "grid", lambda x: np.interp(x, xs, values, left=0.0, right=0.0), {"points": xs.size})

    @property
    def is_delta(self) -> bool:
        return self.kind == "delta"

    @property
    def is_zero(self) -> bool:
        return self.kind == "zero"

    def __call__(self, x: np.ndarray) -> np.ndarray:
        if self.func is None:
            raise UnsupportedIC(f"Initial condition '{self.kind}' has no pointwise values.")
        return self.func(x)


@dataclass(frozen=True)
class TimeDatum:
    """
    Initial datum a_k(y) of the time problem, y >= 0.

    Attributes:
        func: Vectorised values a_k(y), needed to solve the time problem.
        laplace: Laplace transform (L a_k)(z) for Re z >= 0, needed to identify the space datum
                 f_k through (L a_k)(-F(gamma)) = (F f_k)(gamma).

    """
    func: Optional[Callable[[np.ndarray], np.ndarray]] = None
    laplace: Optional[Callable[[np.ndarray], np.ndarray]] = None


@dataclass(frozen=True)
class TimeProblemSpec:
    """
    Time part of a space-time problem.

    Attributes:
        ov: Order vector of sum_i lambda_i d^{nu_i}/dt^{nu_i}.
        initial_conditions: Space data f_0, f_1, ... (missing ones are zero).
        boundary_h: Laplace transform of the boundary datum h(t) = u(t, 0) of the time problem,
                    K_0(mu) if None (the problem solved by the inverse kernel).
        time_data: Data a_0, a_1, ... of the time problem, if given (missing ones are zero).

    """
    ov: OrderVector
    initial_conditions: Tuple[InitialCondition, ...] = (InitialCondition.delta(),)
    boundary_h: Optional[FCTransform] = None
    time_data: Tuple[TimeDatum, ...] = ()

    def __post_init__(self) -> None:
        n = self.ov.n_conditions
        ics = tuple(self.initial_conditions)
        if len(ics) > n:
            raise InvalidParams(f"{self.ov.describe()} takes {n} initial condition(s), got {len(ics)}.")
        if any(ic.is_delta for ic in ics[1:]):
            raise InvalidParams("A delta is only allowed as the first initial condition.")
        if len(self.time_data) > n:
            raise InvalidParams(f"{self.ov.describe()} takes {n} time datum(s), got {len(self.time_data)}.")
        object.__setattr__(self, "initial_conditions", ics + (InitialCondition.zero(),) * (n - len(ics)))

    @classmethod
    def delta(cls, ov: OrderVector) -> "TimeProblemSpec":
        return cls(ov, (InitialCondition.delta(),))

    @property
    def nonzero_conditions(self) -> Tuple[int, ...]:
        return tuple(k for k, ic in enumerate(self.initial_conditions) if not ic.is_zero)

    @property
    def uses_time_data(self) -> bool:
        return any(d.func is not None or d.laplace is not None for d in self.time_data)

    def boundary_transform(self) -> FCTransform:
        if self.boundary_h is not None:
            return self.boundary_h
        return FCTransform(lambda mu: self.ov.boundary_kernel(mu, 0))

    def space_transforms(self, sym_values: np.ndarray, gammas: np.ndarray) -> Tuple[np.ndarray, ...]:
        """
        Fourier transforms of the space data at the given frequencies; with time data they are
        (L a_k)(-F(gamma)).

        :param sym_values: F(gamma).
        :param gammas: gamma.
        :return: One array per initial condition.
        """
        if not self.uses_time_data:
            return tuple(np.asarray(ic.transform(gammas)) for ic in self.initial_conditions)

        out = []
        for k in range(self.ov.n_conditions):
            datum = self.time_data[k] if k < len(self.time_data) else TimeDatum()
            if datum.laplace is None:
                if datum.func is not None:
                    raise UnsupportedIC(f"Time datum a_{k} needs its Laplace transform.")
                out.append(np.zeros(np.shape(gammas)))
            else:
                out.append(np.asarray(datum.laplace(-sym_values)))
        return tuple(out)

    def describe(self) -> str:
        kinds = ",".join(ic.kind for ic in self.initial_conditions)
        return f"orders={self.ov.describe()} ics={kinds}" + (" time_data" if self.uses_time_data else "")


@dataclass
class SolutionField:
    """
    Solution u(t, x) sampled on a grid.

    Attributes:
        ts: Times.
        xs: Points (radii for radial fields in the plane).
        values: Samples, shape (len(ts), len(xs)).
        route: How the field was computed.
        dim: Space dimension.
        diagnostics: Error estimates, masses, oscillation indices, grid descriptions.
        spectrum: Fourier transforms at the grid frequencies, shape (len(ts), frequencies), if any.
        grid: Spectral grid the field was synthesised on, if any.

    """
    ts: np.ndarray
    xs: np.ndarray
    values: np.ndarray
    route: Route
    dim: int = 1
    diagnostics: Dict[str, Any] = field(default_factory=dict)
    spectrum: Optional[np.ndarray] = None
    grid: Optional[FourierGrid] = None

    def __post_init__(self) -> None:
        self.ts = np.atleast_1d(np.asarray(self.ts, dtype=float))
        self.xs = np.atleast_1d(np.asarray(self.xs, dtype=float))
        self.values = np.asarray(self.values, dtype=float)
        if self.values.shape != (self.ts.size, self.xs.size):
            raise GridMismatch(f"Field values of shape {self.values.shape} do not match grids "
                               f"({self.ts.size}, {self.xs.size}).")
        if not np.all(np.isfinite(self.values)):
            raise InvalidParams(f"Field computed by route {self.route.value} has non-finite values.")

    def at(self, t: float) -> np.ndarray:
        index = int(np.argmin(np.abs(self.ts - t)))
        if not np.isclose(self.ts[index], t, rtol=1e-12, atol=0):
            raise GridMismatch(f"Time {t} is not on the field grid.")
        return self.values[index]

    def sup_difference(self, other: "SolutionField", ts: Optional[Sequence[float]] = None) -> float:
        """
        Largest absolute difference to another field on the same grid, optionally on a subset of times.

        """
        if self.values.shape != other.values.shape or not (np.allclose(self.ts, other.ts)
                                                           and np.allclose(self.xs, other.xs)):
            raise GridMismatch("Fields are sampled on different grids.")
        rows = slice(None) if ts is None else np.isin(self.ts, np.asarray(ts, dtype=float))
        return float(np.max(np.abs(self.values[rows] - other.values[rows])))

    def to_frame(self) -> pd.DataFrame:
        t, x = np.meshgrid(self.ts, self.xs, indexing="ij")
        return pd.DataFrame({"t": t.ravel(), "x": x.ravel(), "value": self.values.ravel()})
