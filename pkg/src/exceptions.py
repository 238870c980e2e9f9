"""
Exception hierarchy shared by the engine, the check layer and the CLI
"""


class QOnsagerError(Exception):
    """Base class for every error raised by the toolkit"""


class AlgebraIdError(QOnsagerError, ValueError):
    """Malformed or inadmissible affine algebra identifier"""


class AlgebraIdSyntaxError(AlgebraIdError):
    """Identifier does not follow <series><rank>^<twist>"""


class InadmissibleAlgebraError(AlgebraIdError):
    """Well-formed identifier naming no affine type"""


class CartanError(QOnsagerError):
    """Constructed Cartan data violates an affine invariant"""


class CoefficientError(QOnsagerError, ValueError):
    """Invalid argument to a q-number, q-binomial or field conversion"""


class EvaluationError(QOnsagerError):
    """Numeric evaluation impossible (missing symbol or vanishing denominator)"""


class FreeAlgebraError(QOnsagerError, ValueError):
    """Invalid noncommutative polynomial operation"""


class ReductionError(QOnsagerError):
    """Rewriting failed (foreign letter or step bound exceeded)"""


class RelationError(QOnsagerError, ValueError):
    """Structure constant requested outside its index range"""


class HomomorphismError(QOnsagerError):
    """Structure constants could not be solved consistently"""


class OracleGateError(QOnsagerError):
    """Matrix oracle failed one of its own defining relations"""


class PaperTableError(QOnsagerError):
    """No tabulated boundary-condition families for this type"""


class PaperMismatchError(QOnsagerError):
    """A tabulated family is contained in no computed family"""


class UsageError(QOnsagerError):
    """Invalid command-line request"""
