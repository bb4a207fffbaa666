"""Exact computations with quantized Borcherds-Bozec algebras.

The package builds Lusztig's bilinear form on the free algebra over a
Borcherds-Cartan datum, the negative half as the quotient by the radical,
primitive generators, Kashiwara operators, crystal bases of the algebra
and of highest weight modules, integral forms, and global bases, all in
exact arithmetic at a bounded height.
"""

from .cartan import BorcherdsCartanDatum, DatumError, weights_up_to_height
from .crystal import (
    CrystalBasis,
    CrystalVertex,
    ModuleCrystalBasis,
    crystal_graph_dot,
    crystal_graph_json,
)
from .freealg import FormConfig, FreeAlgebra, FreeElement
from .globalbasis import GlobalBasis
from .highest_weight import HighestWeightModule
from .parsing import ParseError, parse_dominant_weight, parse_scalar, parse_weight
from .scalars import (
    LaurentPolynomial,
    Q,
    RadicalRational,
    RationalFunction,
    q_factorial,
    q_integer,
    qbinom,
)
from .uminus import UMinus
from .verify import Report, SUITE_NAMES, run_verification

__version__ = "0.1.0"

__all__ = [
    "BorcherdsCartanDatum",
    "CrystalBasis",
    "CrystalVertex",
    "DatumError",
    "FormConfig",
    "FreeAlgebra",
    "FreeElement",
    "GlobalBasis",
    "HighestWeightModule",
    "LaurentPolynomial",
    "ModuleCrystalBasis",
    "ParseError",
    "Q",
    "RadicalRational",
    "RationalFunction",
    "Report",
    "SUITE_NAMES",
    "UMinus",
    "crystal_graph_dot",
    "crystal_graph_json",
    "parse_dominant_weight",
    "parse_scalar",
    "parse_weight",
    "q_factorial",
    "q_integer",
    "qbinom",
    "run_verification",
    "weights_up_to_height",
    "__version__",
]
