"""Quiver representations over F_p, vertex-split recollements and transfer of subcategories."""

__version__ = "0.1.0"

from .backend import NAME as BACKEND  # noqa: E402
from .errors import (BoundExceeded, ClosureInconclusive, DecomposeInconclusive,  # noqa: E402
                     HypothesisFailed, Inconclusive, IsoTestInconclusive, QrecError,
                     UniverseIncomplete)
from .homology import (decompose, euler_pairing, ext_dim, ext_middle_terms, hom_basis,  # noqa: E402
                       hom_dim, is_brick, is_isomorphic)
from .linalg import FpMat  # noqa: E402
from .quiver import Quiver, Rep, RepMor, direct_sum  # noqa: E402
from .recollement import Recollement, VertexSplit, build  # noqa: E402
from .subcat import (Subcat, close, enumerate_subcats, find_violation, is_epibrick,  # noqa: E402
                     is_ice, is_monobrick, is_torsion, is_wide)
from .transfer import Setting, glue_bricks, transfer, verify_bijection, verify_sub_recollement  # noqa: E402
from .universe import Universe, all_indecomposables  # noqa: E402

__all__ = [
    "BACKEND", "BoundExceeded", "ClosureInconclusive", "DecomposeInconclusive", "FpMat",
    "HypothesisFailed", "Inconclusive", "IsoTestInconclusive", "QrecError", "Quiver",
    "Recollement", "Rep", "RepMor", "Setting", "Subcat", "Universe", "UniverseIncomplete",
    "VertexSplit", "all_indecomposables", "build", "close", "decompose", "direct_sum",
    "enumerate_subcats", "euler_pairing", "ext_dim", "ext_middle_terms", "find_violation",
    "glue_bricks", "hom_basis", "hom_dim", "is_brick", "is_epibrick", "is_ice",
    "is_isomorphic", "is_monobrick", "is_torsion", "is_wide", "transfer", "verify_bijection",
    "verify_sub_recollement",
]
