"""Exact verification of ternary codes from symplectic groups over GF(3**r)
and of power moments of Kloosterman sums with square arguments.

Everything is computed in exact arithmetic (integers, rationals, and the
Eisenstein integers for character sums); every identity the package
implements is cross-checked against an independent brute-force route
with zero tolerance.
"""

from .charsum import Eisenstein, delta_count, kloosterman, mk, sk
from .codes import CodeSpec, WeightDistribution
from .gf import FieldCtx, FieldElement, field_new
from .moments import moment_report
from .symp import GroupTable, enumerate_sp2, enumerate_sp4, order_sp

__version__ = "0.1.0"

__all__ = [
    "CodeSpec",
    "Eisenstein",
    "FieldCtx",
    "FieldElement",
    "GroupTable",
    "WeightDistribution",
    "delta_count",
    "enumerate_sp2",
    "enumerate_sp4",
    "field_new",
    "kloosterman",
    "mk",
    "moment_report",
    "order_sp",
    "sk",
    "__version__",
]
