"""Exact truncated operator power series and higher-derivation calculus over Q.

The layers, bottom to top: finite co-ideals of N^p (`coideal`), sparse exact
polynomials (`poly`), the free noncommutative oracle (`freealg`), differential
operators and matrices of them (`weyl`, `rings`), truncated series with the
logarithmic-derivative maps (`series`), substitution maps and their actions
(`subst`), higher derivations with characteristic-0 integration (`hs`), flat
connections and the module structures they induce (`connection`), plus JSON
formats (`serialize`), verification suites (`suites`) and the `hs` CLI (`cli`).
"""

from .coideal import CoIdeal, MultiIndex
from .poly import Poly
from .freealg import NCPoly
from .weyl import MatOp, WeylOp
from .rings import (CoefficientRing, FreeRing, MatRing, OppositeRing, PolyRing,
                    WeylRing)
from .series import (EpsilonFamily, OpSeries, epsilon, epsilon_bar,
                     epsilon_family, filtration_check, is_derivation_family, xi)
from .subst import (SubstMap, bullet_left, bullet_right, make_iota, make_scalar,
                    make_sigma, make_sigma_i, pair_embeddings)
from . import hs
from .connection import (Connection, connection_make, delement_check,
                         psi_construct, psi_extract_connection,
                         psi_substitution_check, random_flat_connection,
                         trivial_connection)

__all__ = [
    "CoIdeal", "MultiIndex", "Poly", "NCPoly", "MatOp", "WeylOp",
    "CoefficientRing", "FreeRing", "MatRing", "OppositeRing", "PolyRing",
    "WeylRing", "EpsilonFamily", "OpSeries", "epsilon", "epsilon_bar",
    "epsilon_family", "filtration_check", "is_derivation_family", "xi",
    "SubstMap", "bullet_left", "bullet_right", "make_iota", "make_scalar",
    "make_sigma", "make_sigma_i", "pair_embeddings", "hs", "Connection",
    "connection_make", "delement_check", "psi_construct",
    "psi_extract_connection", "psi_substitution_check",
    "random_flat_connection", "trivial_connection",
]

__version__ = "0.1.0"
