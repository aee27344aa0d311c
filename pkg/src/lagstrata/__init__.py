"""Exact computations around Lagrangian degeneracy strata on G(3,6)."""

__version__ = "0.1.0"

from .fields import QQ, GF                                       # noqa: F401
from .exterior import MultiVector, wedge, contract, volume, eta  # noqa: F401
from .linalg import LinearSubspace, intersect, annihilator       # noqa: F401
from .lagrangian import (tangent_space, f_space,                 # noqa: F401
                         lagrangian_from_graph, graph_of, is_decomposable)
from .strata import (stratum, census, sigma_probe,               # noqa: F401
                     delta_witnesses, gamma_witnesses, sample_lg1)
