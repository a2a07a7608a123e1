from enum import Enum


class RunMode(Enum):
    """
    Available commands of program to run.

    """
    EvalML = "eval-ml"
    EvalWright = "eval-wright"
    Density = "density"
    InverseDensity = "inverse-density"
    Solve = "solve"
    ComposeCheck = "compose-check"
    McLimit = "mc-limit"
    LimitCheck = "limit-check"


class InversionMethod(Enum):
    """
    Numerical Laplace inversion methods.

    """
    Talbot = "talbot"
    GaverStehfest = "gaver_stehfest"
    Hyperbola = "hyperbola"


class KernelKind(Enum):
    """
    Kinds of time-change kernels.

    """
    Subordinator = "subordinator"
    Inverse = "inverse"


class Route(Enum):
    """
    Ways of computing a solution field or a kernel.

    """
    DirectTransform = "direct_transform"
    Composition = "composition"
    Series = "series"
    Integral = "integral"
    Inversion = "inversion"
    PointMass = "point_mass"
    ClosedForm = "closed_form"
    MonteCarlo = "monte_carlo"


class SymbolKind(Enum):
    """
    Built-in space symbols.

    """
    FracLaplacianSum = "frac_laplacian_sum"
    RieszFeller = "riesz_feller"
    Custom = "custom"


class McRegime(Enum):
    """
    Scaling exponent choice of the compound Poisson sum.

    """
    Beta = "beta"
    Nu = "nu"


class Estimator(Enum):
    """
    Monte Carlo estimators of the compound Poisson MGF.

    """
    Weighted = "weighted"
    Conditional = "conditional"


class OutputFormat(Enum):
    """
    Formats of result files.

    """
    CSV = "csv"
    JSON = "json"
