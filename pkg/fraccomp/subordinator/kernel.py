from typing import Any, Dict, Optional

import numpy as np
import pandas as pd
from scipy.integrate import simpson

from fraccomp.util.config import FCConfig
from fraccomp.util.enums import KernelKind, Route
from fraccomp.util.errors import InsufficientGrid


class FCSignedKernel:
    """
    Time-change kernel sampled on an x-grid at a fixed time.

    Attributes:
        xs: Nonnegative increasing grid.
        t: Time.
        values: Kernel values at xs (zeros for a point mass).
        kind: Subordinator or inverse kernel.
        route: How the values were computed.
        point_mass: Location of the atom when the kernel is a Dirac mass (order 1), else None.
        total_mass: Integral of the values over the grid (1 for a point mass).
        mass_tol: Tolerance against which the mass is judged.
        diagnostics: Method specific details (inversion method, nodes, ...).

    """

    def __init__(self, xs: np.ndarray, t: float, values: np.ndarray, kind: KernelKind, route: Route,
                 point_mass: Optional[float] = None, diagnostics: Optional[Dict[str, Any]] = None) -> None:
        self.xs = np.asarray(xs, dtype=float)
        self.t = float(t)
        self.values = np.asarray(values, dtype=float)
        self.kind = kind
        self.route = route
        self.point_mass = point_mass
        self.mass_tol = FCConfig().get("mass_tol")
        self.diagnostics = {} if diagnostics is None else dict(diagnostics)
        if self.point_mass is not None:
            self.total_mass = 1.0
        elif self.xs.size >= 2:
            self.total_mass = float(simpson(self.values, x=self.xs))
        else:
            self.total_mass = float("nan")

    @property
    def is_point_mass(self) -> bool:
        return self.point_mass is not None

    @property
    def min_value(self) -> float:
        return float(self.values.min()) if self.values.size else 0.0

    @property
    def mass_ok(self) -> bool:
        return abs(self.total_mass - 1.0) <= self.mass_tol

    def moment(self, order: int) -> float:
        """
        Moment of the sampled kernel over its grid, exact for a point mass.

        """
        if self.is_point_mass:
            return self.point_mass ** order
        return float(simpson(self.xs ** order * self.values, x=self.xs))

    def mollified(self, width: float) -> "FCSignedKernel":
        """
        Kernel convolved with a centred Gaussian of the given width. A point mass becomes
        the Gaussian itself, sampled grids must be uniform.

        :param width: Standard deviation of the Gaussian.
        :return: New kernel on the same grid.
        """
        if self.is_point_mass:
            values = np.exp(-0.5 * ((self.xs - self.point_mass) / width) ** 2) / (np.sqrt(2.0 * np.pi) * width)
        else:
            steps = np.diff(self.xs)
            if not np.allclose(steps, steps.mean(), rtol=1e-9, atol=0):
                raise InsufficientGrid("Mollifying a sampled kernel needs a uniform grid.")
            h = steps.mean()
            half = int(np.ceil(8.0 * width / h))
            offsets = np.arange(-half, half + 1) * h
            bump = np.exp(-0.5 * (offsets / width) ** 2)
            bump /= bump.sum()
            values = np.convolve(self.values, bump, mode="same")

        diagnostics = dict(self.diagnostics, mollified=width)
        return FCSignedKernel(self.xs, self.t, values, self.kind, self.route, diagnostics=diagnostics)

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame({"t": np.full(self.xs.shape, self.t), "x": self.xs, "value": self.values})
