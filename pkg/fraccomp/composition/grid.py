from dataclasses import dataclass, field
from typing import Any, Callable, Dict, Tuple

import numpy as np
import pandas as pd
from scipy.integrate import simpson

from fraccomp.util.errors import GridMismatch


@dataclass
class GridFunction:
    """
    Function of two variables sampled on a tensor grid.

    Attributes:
        first: Grid of the first variable (s for f(s, x), t for g(t, s)).
        second: Grid of the second variable.
        values: Samples, shape (len(first), len(second)).
        names: Names of the two variables, used as column names.
        diagnostics: Error estimates and other details of how the samples were obtained.

    """
    first: np.ndarray
    second: np.ndarray
    values: np.ndarray
    names: Tuple[str, str] = ("s", "x")
    diagnostics: Dict[str, Any] = field(default_factory=dict)

    def __post_init__(self) -> None:
        self.first = np.atleast_1d(np.asarray(self.first, dtype=float))
        self.second = np.atleast_1d(np.asarray(self.second, dtype=float))
        self.values = np.asarray(self.values)
        if self.values.shape != (self.first.size, self.second.size):
            raise GridMismatch(f"Values of shape {self.values.shape} do not match grids "
                               f"({self.first.size}, {self.second.size}).")

    @classmethod
    def sample(cls, func: Callable[[np.ndarray, np.ndarray], np.ndarray], first: np.ndarray, second: np.ndarray,
               names: Tuple[str, str] = ("s", "x")) -> "GridFunction":
        """
        Samples a vectorised func(first, second) on the tensor grid.

        """
        first = np.atleast_1d(np.asarray(first, dtype=float))
        second = np.atleast_1d(np.asarray(second, dtype=float))
        values = np.broadcast_to(func(first[:, None], second[None, :]), (first.size, second.size))
        return cls(first, second, np.array(values), names)

    def integrate_second(self) -> np.ndarray:
        """
        Simpson integral over the second variable, one value per first-grid point.

        """
        return simpson(self.values, x=self.second, axis=1)

    def to_frame(self) -> pd.DataFrame:
        first, second = np.meshgrid(self.first, self.second, indexing="ij")
        return pd.DataFrame({self.names[0]: first.ravel(), self.names[1]: second.ravel(),
                             "value": np.real(self.values).ravel()})
