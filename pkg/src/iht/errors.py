"""Exception hierarchy.

Two broad families matter to callers (and to the CLI exit codes): problems
with the input data itself (``DataError``) and numerical degeneracies that
arise during computation (``NumericError``).
"""


class IhtError(Exception):
    """Base class for all errors raised by this package."""


class DataError(IhtError):
    """Input data is unusable: missing file, bad cell, violated constraint."""


class ParseError(DataError):
    """A cell failed to parse. Carries 1-based row/column of the offender."""

    def __init__(self, message, row=None, column=None):
        super().__init__(message)
        self.row = row
        self.column = column


class ValidationError(DataError):
    """A dataset constraint is violated (shape, finiteness, constant column)."""

    def __init__(self, message, constraint=None):
        super().__init__(message)
        self.constraint = constraint


class NumericError(IhtError):
    """Computation cannot proceed or meet its accuracy contract."""


class SingularCovarianceError(NumericError):
    """Covariance (or other SPD input) is numerically singular.

    ``eigenvalue`` and ``index`` identify the offending eigenvalue within the
    ascending spectrum.
    """

    def __init__(self, message, eigenvalue=None, index=None):
        super().__init__(message)
        self.eigenvalue = eigenvalue
        self.index = index


class DegenerateScalingError(NumericError):
    """The test-statistic scaling constant is non-positive."""


class AccuracyError(NumericError):
    """Quadrature failed to reach the requested tolerance.

    ``achieved`` is the error estimate actually attained.
    """

    def __init__(self, message, achieved=None):
        super().__init__(message)
        self.achieved = achieved
