"""Numerical toolkit for the circle family of q-special functions.

Layers, bottom up: exact q-arithmetic and Jackson calculus (``qcalc``),
Jacobi theta evaluation and the circle measure (``theta``), shared quadrature
(``numerics``), the polynomial family with its integral representations
(``polynomials``), the orthonormal circle functions with weight, kernel and
q-derivative identities (``rsfunctions``), the deformed ladder algebra
(``operators``), coherent and phase states (``states``), moments and
uncertainty relations (``observables``), and a verification CLI (``cli``).

Hot series kernels run on a compiled core when built, with a numpy fallback
selected at import (see ``rs_toolkit.BACKEND``).
"""

from ._backend import BACKEND
from .errors import (
    ConfigError,
    DegenerateLabel,
    DomainError,
    NonConvergence,
    QuadratureFailure,
    RSToolkitError,
    SingularPoint,
    TruncationWarning,
)
from .qcalc import (
    DEFAULT_POLICY,
    QParameter,
    SeriesValue,
    TruncationPolicy,
    jackson_q_derivative,
    jackson_q_integral,
    q_binomial,
    q_exponential,
    q_factorial,
    q_number,
    q_pochhammer_finite,
    q_pochhammer_infinite,
)
from .theta import CirclePoint, measure_decomposition, ramanujan_f, szego_measure, theta1, theta3

__version__ = "0.1.0"

__all__ = [
    "BACKEND",
    "__version__",
    "QParameter",
    "TruncationPolicy",
    "SeriesValue",
    "DEFAULT_POLICY",
    "CirclePoint",
    "q_pochhammer_finite",
    "q_pochhammer_infinite",
    "q_binomial",
    "q_number",
    "q_factorial",
    "q_exponential",
    "jackson_q_derivative",
    "jackson_q_integral",
    "theta1",
    "theta3",
    "szego_measure",
    "measure_decomposition",
    "ramanujan_f",
    "RSToolkitError",
    "DomainError",
    "NonConvergence",
    "SingularPoint",
    "QuadratureFailure",
    "ConfigError",
    "DegenerateLabel",
    "TruncationWarning",
]
