"""Compensated quotient-difference (qd) algorithm.

Error-free transformations, double-double arithmetic, the classical,
compensated and double-double qd tables, an exact rational oracle, error
analysis and the usual applications (C-fractions, poles, polynomial zeros).
"""

from .errors import (BreakdownError, ConvergenceError, DDError, EFTError,
                     OracleError, ParseError, QDError)
from .qdtable import (CompQdTable, QdTable, SeriesInput, build, build_compqd,
                      build_ddqd, build_qd)
from .progressive import PolyInput, comp_proqd, proqd

__version__ = "0.1.0"

__all__ = [
    "BreakdownError", "ConvergenceError", "DDError", "EFTError",
    "OracleError", "ParseError", "QDError",
    "CompQdTable", "QdTable", "SeriesInput", "build", "build_compqd",
    "build_ddqd", "build_qd",
    "PolyInput", "comp_proqd", "proqd",
]
