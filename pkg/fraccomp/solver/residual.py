import numpy as np

from fraccomp.caputo.derivative import CaputoOrder, SampledFn, caputo_on_grid
from fraccomp.solver.fourier import synthesize
from fraccomp.solver.problem import SolutionField
from fraccomp.solver.symbols import FCSpaceSymbol
from fraccomp.subordinator.orders import OrderVector
from fraccomp.util.errors import InsufficientGrid, InvalidParams
from fraccomp.util.logging_config import get_logger

logger = get_logger(__name__)


def pde_residual(field: SolutionField, sym: FCSpaceSymbol, ov: OrderVector) -> np.ndarray:
    """
    Pointwise residual sum_i lambda_i D^{nu_i} u - O_x u of a solved field, with Caputo
    derivatives by the L1 scheme along the time grid and O_x u synthesised from F(gamma) (F u).

    :param field: Field solved on a uniform time grid starting at 0, carrying its spectrum.
    :param sym: Space symbol the field was solved with.
    :param ov: Orders with every nu_i <= 1.
    :return: Residual, shaped like field.values; the row t = 0 is zero.
    """
    if not ov.probabilistic:
        raise InvalidParams(f"Residual check needs orders <= 1, got {ov.describe()}.")
    if field.spectrum is None or field.grid is None:
        raise InvalidParams(f"Field from route {field.route.value} carries no spectrum.")
    if field.ts[0] != 0:
        raise InsufficientGrid("Residual check needs the field at t = 0.")

    samples = SampledFn(field.ts, field.values)
    time_part = sum(lam * caputo_on_grid(samples, CaputoOrder(nu)) for lam, nu in ov.pairs)
    space_part = synthesize(field.grid, sym(field.grid.gammas)[None, :] * field.spectrum, field.xs, "O_x u")

    residual = time_part - space_part
    residual[0] = 0.0
    logger.debug(f"Largest residual {np.max(np.abs(residual[1:])):.3g} over {field.ts.size - 1} time steps")
    return residual
