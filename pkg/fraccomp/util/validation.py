"""
Input validation of job specifications
"""

from typing import Any, Dict, List, Mapping

import numpy as np
from marshmallow import Schema, fields, validate, validates_schema, ValidationError, RAISE

from fraccomp.util.constants import PSEUDO_MAX_NODES
from fraccomp.util.enums import McRegime, Estimator, OutputFormat, RunMode, SymbolKind


class GridField(fields.Field):
    """
    Grid given either as an explicit list of numbers or as {start, stop, num} (linspace).
    Deserializes into a 1-D float array.

    """

    def _deserialize(self, value: Any, attr: str, data: Mapping[str, Any], **kwargs) -> np.ndarray:
        if isinstance(value, (int, float)) and not isinstance(value, bool):
            return np.array([float(value)])
        if isinstance(value, list):
            if not value or not all(isinstance(v, (int, float)) and not isinstance(v, bool) for v in value):
                raise ValidationError("grid must be a nonempty list of numbers")
            return np.asarray(value, dtype=float)
        if isinstance(value, dict):
            loaded = LinspaceSchema().load(value)
            return np.linspace(loaded["start"], loaded["stop"], loaded["num"])
        raise ValidationError("grid must be a list of numbers or {start, stop, num}")


class LinspaceSchema(Schema):
    class Meta:
        unknown = RAISE

    start = fields.Float(required=True)
    stop = fields.Float(required=True)
    num = fields.Int(required=True, validate=validate.Range(min=1, max=1_000_000))


class OrderPairSchema(Schema):
    """Schema for one (lambda_i, nu_i) pair of an order vector"""
    class Meta:
        unknown = RAISE

    lam = fields.Float(data_key="lambda", load_default=1.0,
                       validate=validate.Range(min=0, min_inclusive=False, error="lambda_i must be > 0"))
    nu = fields.Float(required=True,
                      validate=validate.Range(min=0, min_inclusive=False, error="nu_i must be > 0"))


class SymbolSchema(Schema):
    """Schema for a built-in space symbol"""
    class Meta:
        unknown = RAISE

    kind = fields.Str(required=True, validate=validate.OneOf([SymbolKind.FracLaplacianSum.value,
                                                              SymbolKind.RieszFeller.value]))
    terms = fields.List(fields.List(fields.Float(), validate=validate.Length(equal=2)), load_default=None)
    alpha = fields.Float(load_default=None)
    theta = fields.Float(load_default=None)
    dim = fields.Int(load_default=1, validate=validate.OneOf([1, 2]))

    @validates_schema
    def check_kind(self, data: Dict[str, Any], **kwargs) -> None:
        if data["kind"] == SymbolKind.FracLaplacianSum.value:
            if not data.get("terms"):
                raise ValidationError("frac_laplacian_sum needs terms [[lambda, beta], ...]", "terms")
            for lam, beta in data["terms"]:
                if lam <= 0:
                    raise ValidationError("lambda_i must be > 0", "terms")
                if not 0 < beta <= 1:
                    raise ValidationError("beta_i must be in (0, 1]", "terms")
        else:
            if data.get("alpha") is None or data.get("theta") is None:
                raise ValidationError("riesz_feller needs alpha and theta", "kind")
            if not 0 < data["theta"] < 1:
                raise ValidationError("theta must be in (0, 1)", "theta")
            if not 0 < data["alpha"] * data["theta"] <= 2:
                raise ValidationError("alpha * theta must be in (0, 2]", "alpha")
            if data["dim"] != 1:
                raise ValidationError("riesz_feller is one-dimensional", "dim")


class InitialSchema(Schema):
    """Schema for the initial condition of a solve"""
    class Meta:
        unknown = RAISE

    kind = fields.Str(load_default="delta", validate=validate.OneOf(["delta", "gaussian"]))
    width = fields.Float(load_default=0.5, validate=validate.Range(min=0, min_inclusive=False))


class OutputSchema(Schema):
    class Meta:
        unknown = RAISE

    path = fields.Str(load_default=None)
    format = fields.Str(load_default=OutputFormat.CSV.value, validate=validate.OneOf([f.value for f in OutputFormat]))


class PrecisionSchema(Schema):
    class Meta:
        unknown = RAISE

    talbot_nodes = fields.Int(validate=validate.Range(min=8))
    talbot_scale = fields.Float(validate=validate.Range(min=0, min_inclusive=False))
    talbot_tol = fields.Float(validate=validate.Range(min=0, min_inclusive=False))
    stehfest_nodes = fields.Int(validate=validate.Range(min=2, max=18))
    pseudo_nodes = fields.Int(validate=validate.Range(min=8, max=PSEUDO_MAX_NODES))
    gauss_nodes = fields.Int(validate=validate.Range(min=2, max=100))
    panel_tol = fields.Float(validate=validate.Range(min=0, min_inclusive=False))
    s_max = fields.Float(validate=validate.Range(min=0, min_inclusive=False))
    spectral_cutoff = fields.Float(validate=validate.Range(min=0, max=1, min_inclusive=False, max_inclusive=False))
    min_grid_points = fields.Int(validate=validate.Range(min=64))
    min_solve_time = fields.Float(validate=validate.Range(min=0, min_inclusive=False))
    mass_tol = fields.Float(validate=validate.Range(min=0, min_inclusive=False))
    oscillation_bound = fields.Float(validate=validate.Range(min=1))

    @validates_schema
    def check_stehfest_even(self, data: Dict[str, Any], **kwargs) -> None:
        if data.get("stehfest_nodes", 2) % 2:
            raise ValidationError("stehfest_nodes must be even", "stehfest_nodes")
        if data.get("pseudo_nodes", 2) % 2:
            raise ValidationError("pseudo_nodes must be even", "pseudo_nodes")


def positive(name: str) -> validate.Range:
    return validate.Range(min=0, min_inclusive=False, error=f"{name} must be > 0")


class SpecialFunctionParamsSchema(Schema):
    """Params of eval-ml and eval-wright"""
    class Meta:
        unknown = RAISE

    alpha = fields.Float(required=True)
    beta = fields.Float(load_default=1.0)
    zs = GridField(required=True)


class KernelParamsSchema(Schema):
    """Params of density and inverse-density"""
    class Meta:
        unknown = RAISE

    orders = fields.List(fields.Nested(OrderPairSchema), required=True, validate=validate.Length(min=1))
    t = fields.Float(required=True, validate=positive("t"))
    xs = GridField(required=True)

    @validates_schema
    def check_xs(self, data: Dict[str, Any], **kwargs) -> None:
        xs = data["xs"]
        if np.any(xs < 0) or np.any(np.diff(xs) <= 0):
            raise ValidationError("xs must be nonnegative and increasing", "xs")


class SolveParamsSchema(Schema):
    """Params of solve"""
    class Meta:
        unknown = RAISE

    symbol = fields.Nested(SymbolSchema, required=True)
    orders = fields.List(fields.Nested(OrderPairSchema), required=True, validate=validate.Length(min=1))
    ts = GridField(required=True)
    xs = GridField(required=True)
    routes = fields.Str(load_default="direct", validate=validate.OneOf(["direct", "composed", "both"]))
    initial = fields.Nested(InitialSchema, load_default=lambda: {"kind": "delta", "width": 0.5})

    @validates_schema
    def check_grids(self, data: Dict[str, Any], **kwargs) -> None:
        if np.any(data["ts"] <= 0):
            raise ValidationError("ts must be > 0", "ts")
        if data["symbol"]["dim"] == 2 and np.any(data["xs"] < 0):
            raise ValidationError("xs are radii for dim 2 and must be >= 0", "xs")


class ComposeCheckParamsSchema(Schema):
    """Params of compose-check"""
    class Meta:
        unknown = RAISE

    nu1 = fields.Float(required=True, validate=validate.Range(min=0, max=1, min_inclusive=False))
    nu2 = fields.Float(required=True, validate=validate.Range(min=0, max=1, min_inclusive=False))
    t = fields.Float(load_default=1.0, validate=positive("t"))
    xs = GridField(required=True)

    @validates_schema
    def check_xs(self, data: Dict[str, Any], **kwargs) -> None:
        xs = data["xs"]
        if np.any(xs < 0) or np.any(np.diff(xs) <= 0):
            raise ValidationError("xs must be nonnegative and increasing", "xs")


class McParamsSchema(Schema):
    """Params of mc-limit"""
    class Meta:
        unknown = RAISE

    nu = fields.Float(required=True, validate=positive("nu"))
    beta = fields.Float(required=True, validate=positive("beta"))
    delta_cutoff = fields.Float(required=True, validate=positive("delta_cutoff"))
    poisson_rate = fields.Float(load_default=1.0, validate=positive("poisson_rate"))
    t = fields.Float(load_default=1.0, validate=positive("t"))
    samples = fields.Int(load_default=100_000, validate=validate.Range(min=10_000))
    seed = fields.Int(load_default=0, validate=validate.Range(min=0, max=2**64 - 1))
    regime = fields.Str(load_default=McRegime.Nu.value, validate=validate.OneOf([r.value for r in McRegime]))
    scaling_exponent = fields.Float(load_default=None, validate=positive("scaling_exponent"))
    estimator = fields.Str(load_default=Estimator.Weighted.value,
                           validate=validate.OneOf([e.value for e in Estimator]))
    mus = GridField(required=True)

    @validates_schema
    def check_beta(self, data: Dict[str, Any], **kwargs) -> None:
        if not data["beta"] < data["nu"]:
            raise ValidationError("beta must be < nu", "beta")
        if np.any(data["mus"] < 0):
            raise ValidationError("mus must be >= 0", "mus")


class LimitCheckParamsSchema(Schema):
    """Params of limit-check"""
    class Meta:
        unknown = RAISE

    symbol = fields.Nested(SymbolSchema, required=True)
    nu_small = fields.Float(required=True, validate=validate.Range(min=0, max=0.05, min_inclusive=False))
    lambdas = fields.List(fields.Float(validate=positive("lambda_i")), load_default=lambda: [1.0])
    ts = GridField(load_default=lambda: np.array([1.0]))
    xs = GridField(required=True)
    initial = fields.Nested(InitialSchema, load_default=lambda: {"kind": "gaussian", "width": 0.5})


PARAMS_SCHEMAS = {
    RunMode.EvalML.value: SpecialFunctionParamsSchema,
    RunMode.EvalWright.value: SpecialFunctionParamsSchema,
    RunMode.Density.value: KernelParamsSchema,
    RunMode.InverseDensity.value: KernelParamsSchema,
    RunMode.Solve.value: SolveParamsSchema,
    RunMode.ComposeCheck.value: ComposeCheckParamsSchema,
    RunMode.McLimit.value: McParamsSchema,
    RunMode.LimitCheck.value: LimitCheckParamsSchema,
}


class JobSpecSchema(Schema):
    """Top level of a job spec file"""
    class Meta:
        unknown = RAISE

    command = fields.Str(load_default=None, validate=validate.OneOf([m.value for m in RunMode]))
    params = fields.Dict(required=True)
    output = fields.Nested(OutputSchema, load_default=lambda: {"path": None, "format": OutputFormat.CSV.value})
    precision = fields.Nested(PrecisionSchema, load_default=dict)
    tag = fields.Str(load_default=None, validate=validate.Regexp(r"^[A-Za-z0-9][A-Za-z0-9._-]*$",
                                                                 error="tag must be a single word of letters, digits, . _ -"))


def validate_request_data(schema: Schema, data: Dict[str, Any]) -> Dict[str, Any]:
    """
    Validate data against schema

    :param schema: Marshmallow schema
    :param data: Data to validate
    :return: Validated data
    :raises: ValidationError if validation fails
    """
    return schema.load(data)


def flatten_messages(messages: Any, path: tuple = ()) -> List[tuple]:
    """
    Flattens nested marshmallow error messages into (path, message) pairs.

    :param messages: Marshmallow `messages` structure.
    :param path: Path prefix.
    :return: List of (path, message).
    """
    if isinstance(messages, dict):
        out = []
        for key, value in messages.items():
            sub = path if key == "_schema" else path + (key,)
            out.extend(flatten_messages(value, sub))
        return out
    if isinstance(messages, list):
        out = []
        for m in messages:
            out.extend(flatten_messages(m, path))
        return out

    return [(path, str(messages))]
