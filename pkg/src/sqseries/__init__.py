"""Square series generating functions via Gaussian-kernel integrals."""

from .errors import *  # noqa: F401,F403
from .quadrature import DEFAULT_CONFIG, EvalResult, QuadratureConfig, gauss_double, gauss_halfline, hermite_rule

__version__ = "0.1.0"
