"""Exception hierarchy shared by the library and the command-line front end."""


class DualRecordError(Exception):
    """Base class for every error raised by this package."""

    exit_code = 1


class DataParseError(DualRecordError):
    exit_code = 3


class ConfigurationError(DualRecordError):
    exit_code = 4


class DegenerateDataError(DualRecordError):
    """The observed table cannot support the requested computation."""

    exit_code = 5


class EstimatorUndefined(DegenerateDataError):
    """A closed-form estimator has no finite, positive value for this table."""

    def __init__(self, estimator, reason):
        self.estimator = estimator
        self.reason = reason
        super().__init__(f"{estimator} is undefined for this table: {reason}")


class DomainError(DualRecordError, ValueError):
    exit_code = 4


class NumericalUnderflowError(DualRecordError, ArithmeticError):
    exit_code = 6


class ChainFailure(DualRecordError):
    exit_code = 6


class StudyError(DualRecordError):
    exit_code = 6


class DegenerateDiagnosticError(DualRecordError):
    """A convergence diagnostic is undefined, e.g. every chain is constant."""

    exit_code = 5
