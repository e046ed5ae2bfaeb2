"""Exact minimal-degree polynomial expressions over prime fields.

The library builds the unique per-variable-degree-below-p polynomial of
comparison-style functions (max, min, argmax digits, ismax, nummax, digit
carry), cross-checks every closed form against brute-force interpolation of
the integer semantics, and lowers polynomials to arithmetic circuits with
multiplication-count and multiplicative-depth reports.
"""

from .ff import PrimeField, is_prime
from .polyring import (DEFAULT_MAX_TABLE_SIZE, Polynomial, PolyRing,
                       RingMismatchError, SizeGuardError, format_terms)
from .oracle import FunctionSpec, TruthTable, interpolate, tabulate
from .formulas import (CATALOG, FormulaParamError, build_formula,
                       involution_conjugate, verify_formula)
from .circuit import (Circuit, CircuitBuilder, CostReport, cost,
                      eliminate_common_subexpressions, lower, run, run_all)

__all__ = [
    "PrimeField", "is_prime",
    "DEFAULT_MAX_TABLE_SIZE", "Polynomial", "PolyRing",
    "RingMismatchError", "SizeGuardError", "format_terms",
    "FunctionSpec", "TruthTable", "interpolate", "tabulate",
    "CATALOG", "FormulaParamError", "build_formula",
    "involution_conjugate", "verify_formula",
    "Circuit", "CircuitBuilder", "CostReport", "cost",
    "eliminate_common_subexpressions", "lower", "run", "run_all",
]

__version__ = "0.1.0"
