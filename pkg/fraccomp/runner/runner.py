"""
Runs one job: loads and validates the YAML spec, dispatches to the numerical modules and writes
result grids with their metadata headers.
"""

from dataclasses import dataclass, field
from pathlib import Path
import time
from typing import Any, Callable, Dict, List, Optional, Tuple

from marshmallow import ValidationError
import numpy as np
import pandas as pd
import yaml

from fraccomp.montecarlo.compound import compound_poisson_mgf, theoretical_mgf_chain
from fraccomp.montecarlo.config import McConfig
from fraccomp.solver.problem import InitialCondition, SolutionField, TimeProblemSpec
from fraccomp.solver.solver import limit_check_nu_zero, solve_composed, solve_direct
from fraccomp.solver.symbols import symbol_from_params
from fraccomp.specfun.mittag_leffler import MLParams, mittag_leffler_grid
from fraccomp.specfun.wright import WrightParams, wright_grid
from fraccomp.subordinator.densities import inverse_density, subordinator_density, subordinator_semigroup
from fraccomp.subordinator.kernel import FCSignedKernel
from fraccomp.subordinator.orders import OrderVector
from fraccomp.util.common import git_describe, line_of, load_job_file, write_result
from fraccomp.util.config import FCConfig
from fraccomp.util.constants import *
from fraccomp.util.enums import Estimator, McRegime, OutputFormat, Route, RunMode
from fraccomp.util.errors import InvalidSpec
from fraccomp.util.logging_config import get_logger
from fraccomp.util.validation import PARAMS_SCHEMAS, JobSpecSchema, flatten_messages, validate_request_data

logger = get_logger(__name__)

# Names of the computed quantities, first header line of every result; job specs may add
# their own `tag` next to it
QUANTITIES = {
    RunMode.EvalML.value: "mittag-leffler",
    RunMode.EvalWright.value: "wright",
    RunMode.Density.value: "subordinator-density",
    RunMode.InverseDensity.value: "inverse-subordinator-density",
    RunMode.Solve.value: "space-time-solution",
    RunMode.ComposeCheck.value: "subordinator-semigroup",
    RunMode.McLimit.value: "compound-poisson-mgf",
    RunMode.LimitCheck.value: "order-zero-limit",
}


@dataclass
class FCJob:
    """
    Validated job.

    Attributes:
        command: Command to run.
        params: Validated command parameters.
        path: Output path without the format suffix.
        fmt: Output format.
        precision: Precision overrides.
        tag: Caller label of the computed quantity, written next to the built-in quantity name.

    """
    command: str
    params: Dict[str, Any]
    path: Path
    fmt: str
    precision: Dict[str, Any] = field(default_factory=dict)
    tag: Optional[str] = None


@dataclass
class FCResult:
    """
    One result grid of a job.

    Attributes:
        frame: Rows to write.
        meta: Command specific header entries (route, grid, diagnostics).
        suffix: Appended to the output file name when a job writes several grids.

    """
    frame: pd.DataFrame
    meta: Dict[str, Any]
    suffix: str = ""


def _invalid(error: ValidationError, node: yaml.Node, prefix: Tuple[Any, ...] = ()) -> InvalidSpec:
    """
    Maps the first marshmallow error to a line-precise spec error.

    """
    path, message = flatten_messages(error.messages)[0]
    path = prefix + tuple(path)
    where = ".".join(str(p) for p in path)
    return InvalidSpec(f"{where}: {message}" if where else message, line_of(node, path))


def load_job(command: str, spec_path: Path, out: Optional[str] = None, fmt: Optional[str] = None) -> FCJob:
    """
    Loads and validates a job spec. Command line values of the output path and format take
    precedence over the spec's.

    :param command: Command given on command line.
    :param spec_path: Path to the YAML spec.
    :param out: Output path override.
    :param fmt: Output format override.
    :return: Validated job.
    """
    data, node = load_job_file(spec_path)
    try:
        job = validate_request_data(JobSpecSchema(), data)
    except ValidationError as e:
        raise _invalid(e, node)
    if job["command"] is not None and job["command"] != command:
        raise InvalidSpec(f"spec is for command '{job['command']}', not '{command}'", line_of(node, ("command",)))

    try:
        params = validate_request_data(PARAMS_SCHEMAS[command](), job["params"])
    except ValidationError as e:
        raise _invalid(e, node, ("params",))

    path = out or job["output"]["path"] or f"{RESULTS_DIR}{command}"
    fmt = fmt or job["output"]["format"]
    p = Path(path)
    if p.suffix.lstrip(".") in [f.value for f in OutputFormat]:
        p = p.with_suffix("")

    return FCJob(command, params, p, fmt, job["precision"], job["tag"])


def _grid(name: str, values: np.ndarray) -> str:
    values = np.asarray(values, dtype=float)
    return f"{name}: {values.size} points in [{values.min():.17g}, {values.max():.17g}]"


def _scalars(diagnostics: Dict[str, Any]) -> Dict[str, Any]:
    """
    Diagnostics that fit a header line.

    """
    out = {}
    for key, value in diagnostics.items():
        if isinstance(value, (np.floating, np.integer)):
            value = value.item()
        if isinstance(value, (bool, int, float, str)):
            out[key] = value
    return out


def _orders(params: Dict[str, Any]) -> OrderVector:
    return OrderVector.from_pairs([(pair["lam"], pair["nu"]) for pair in params["orders"]])


def _initial(params: Dict[str, Any], dim: int) -> InitialCondition:
    if params["kind"] == "gaussian":
        return InitialCondition.gaussian(params["width"], dim)
    return InitialCondition.delta()


def _field_result(field_: SolutionField, suffix: str = "", **extra: Any) -> FCResult:
    meta = {"route": field_.route.value,
            "grid": f"{_grid('t', field_.ts)}; {_grid('x', field_.xs)}"
                    + (f"; {field_.grid.describe()}" if field_.grid is not None else "")}
    meta.update(_scalars(field_.diagnostics))
    meta.update(extra)
    return FCResult(field_.to_frame(), meta, suffix)


def run_eval_ml(params: Dict[str, Any]) -> List[FCResult]:
    zs = params["zs"]
    values = mittag_leffler_grid(MLParams(params["alpha"], params["beta"]), zs)
    meta = {"route": "automatic", "grid": _grid("z", zs), "alpha": params["alpha"], "beta": params["beta"]}
    return [FCResult(pd.DataFrame({"z": zs, "value": values}), meta)]


def run_eval_wright(params: Dict[str, Any]) -> List[FCResult]:
    zs = params["zs"]
    values = wright_grid(WrightParams(params["alpha"], params["beta"]), zs)
    meta = {"route": "automatic", "grid": _grid("z", zs), "alpha": params["alpha"], "beta": params["beta"]}
    return [FCResult(pd.DataFrame({"z": zs, "value": values}), meta)]


def _kernel_result(kernel: FCSignedKernel) -> List[FCResult]:
    meta = {"route": kernel.route.value, "grid": f"t: {kernel.t:.17g}; {_grid('x', kernel.xs)}",
            "total_mass": kernel.total_mass, "mass_ok": kernel.mass_ok}
    if kernel.is_point_mass:
        meta["point_mass"] = kernel.point_mass
    meta.update(_scalars(kernel.diagnostics))
    return [FCResult(kernel.to_frame(), meta)]


def run_density(params: Dict[str, Any]) -> List[FCResult]:
    return _kernel_result(subordinator_density(_orders(params), params["t"], params["xs"]))


def run_inverse_density(params: Dict[str, Any]) -> List[FCResult]:
    return _kernel_result(inverse_density(_orders(params), params["t"], params["xs"]))


def run_solve(params: Dict[str, Any]) -> List[FCResult]:
    """
    Solves the space-time problem by the requested routes. With both routes the composed field
    is synthesised on the direct field's spectral grid and the sup difference goes to both headers.

    """

    sym = symbol_from_params(params["symbol"])
    spec = TimeProblemSpec(_orders(params), (_initial(params["initial"], sym.dim),))
    routes = params["routes"]
    ts, xs = params["ts"], params["xs"]

    if routes == "direct":
        return [_field_result(solve_direct(sym, spec, ts, xs))]
    if routes == "composed":
        return [_field_result(solve_composed(sym, spec, ts, xs))]

    direct = solve_direct(sym, spec, ts, xs)
    composed = solve_composed(sym, spec, ts, xs, grid=direct.grid)
    difference = direct.sup_difference(composed)
    logger.info(f"Routes direct and composed differ by {difference:.3g} (sup over the grid)")
    return [_field_result(direct, "_direct", sup_difference=difference),
            _field_result(composed, "_composed", sup_difference=difference)]


def run_compose_check(params: Dict[str, Any]) -> List[FCResult]:
    nu1, nu2 = params["nu1"], params["nu2"]
    composed, direct = subordinator_semigroup(nu1, nu2, params["t"], params["xs"])
    difference = float(np.max(np.abs(composed.values - direct.values)))
    result = _kernel_result(composed)[0]
    result.meta.update({"reference": f"subordinator kernel of order {nu1 * nu2:.17g}",
                        "sup_difference": difference})
    return [result]


def run_mc_limit(params: Dict[str, Any]) -> List[FCResult]:
    """
    Monte Carlo MGF of the compound Poisson sum at each mu, next to the exact value before the
    limit and the limit itself.

    """

    seed = FCConfig().seed
    cfg = McConfig(nu=params["nu"], beta=params["beta"], delta_cutoff=params["delta_cutoff"],
                   poisson_rate=params["poisson_rate"], t=params["t"], samples=params["samples"],
                   seed=params["seed"] if seed is None else seed, regime=McRegime(params["regime"]),
                   estimator=Estimator(params["estimator"]), scaling_exponent=params["scaling_exponent"])

    mus = params["mus"]
    estimates = [compound_poisson_mgf(cfg, mu) for mu in mus]
    frame = pd.DataFrame({"t": np.full(mus.shape, cfg.t), "mu": mus,
                          "value": [e[0] for e in estimates], "stderr": [e[1] for e in estimates],
                          "chain": [theoretical_mgf_chain(cfg, mu) for mu in mus],
                          "target": [cfg.target(mu) for mu in mus]})
    meta = {"route": Route.MonteCarlo.value, "grid": _grid("mu", mus), "seed": cfg.seed,
            "samples": cfg.samples, "alpha": cfg.alpha, "mean_jumps": cfg.jump_rate(), "config": cfg.describe()}
    return [FCResult(frame, meta)]


def run_limit_check(params: Dict[str, Any]) -> List[FCResult]:

    sym = symbol_from_params(params["symbol"])
    small, limit = limit_check_nu_zero(sym, _initial(params["initial"], sym.dim), params["xs"], params["nu_small"],
                                       params["lambdas"], params["ts"])
    difference = small.sup_difference(limit)
    return [_field_result(small, "_small", nu_small=params["nu_small"], sup_difference=difference),
            _field_result(limit, "_limit", nu_small=params["nu_small"], sup_difference=difference)]


HANDLERS: Dict[str, Callable[[Dict[str, Any]], List[FCResult]]] = {
    RunMode.EvalML.value: run_eval_ml,
    RunMode.EvalWright.value: run_eval_wright,
    RunMode.Density.value: run_density,
    RunMode.InverseDensity.value: run_inverse_density,
    RunMode.Solve.value: run_solve,
    RunMode.ComposeCheck.value: run_compose_check,
    RunMode.McLimit.value: run_mc_limit,
    RunMode.LimitCheck.value: run_limit_check,
}


def _header(command: str, result: FCResult, tag: Optional[str] = None) -> Dict[str, Any]:
    """
    Header of a result file. The thread count is left out, results do not depend on it.

    """
    config = FCConfig()
    meta = {"quantity": QUANTITIES[command], "tag": tag or QUANTITIES[command], "command": command}
    meta.update(result.meta)
    meta["git_describe"] = git_describe()
    meta.setdefault("seed", config.seed)
    meta.update({k: v for k, v in config.resolved().items() if k not in ("threads", "seed")})
    return meta


def _target(base: Path, suffix: str) -> Path:
    return base.with_name(f"{base.name}{suffix}")


def run(command: str, spec_path: Path, out: Optional[str] = None, fmt: Optional[str] = None) -> List[Path]:
    """
    Runs one job and writes its result files.

    :param command: One of the RunMode values.
    :param spec_path: Path to the YAML job spec.
    :param out: Output path override.
    :param fmt: Output format override.
    :return: Paths written.
    """
    if command not in HANDLERS:
        raise InvalidSpec(f"Unknown command '{command}'.")
    job = load_job(command, spec_path, out, fmt)
    FCConfig().set_precision(job.precision)
    logger.debug(f"Job {command}: params {job.params}, precision {FCConfig().precision}")

    started = time.time()
    results = HANDLERS[command](job.params)

    paths = [write_result(r.frame, _header(command, r, job.tag), _target(job.path, r.suffix), job.fmt) for r in results]
    for p in paths:
        logger.info(f"Written '{p}'")
    logger.info(f"Command {command} finished in {time.time() - started:.2f} s")
    return paths
