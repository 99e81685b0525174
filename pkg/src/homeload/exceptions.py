"""Exception hierarchy.

All errors raised on purpose derive from :class:`HomeloadError`; most are also
``ValueError`` so that sklearn-style callers catching ``ValueError`` keep
working.
"""


class HomeloadError(Exception):
    """Base class for every error raised by this package."""


class DataError(HomeloadError, ValueError):
    pass


class MissingColumn(DataError):
    def __init__(self, name):
        super().__init__(f"missing column {name!r}")
        self.name = name


class NonMonotonicTimestamp(DataError):
    def __init__(self, row):
        super().__init__(f"timestamp does not increase at data row {row}")
        self.row = row


class IrregularStep(DataError):
    def __init__(self, row):
        super().__init__(f"timestamp step differs from the nominal step at data row {row}")
        self.row = row


class ParseError(DataError):
    def __init__(self, row, col):
        super().__init__(f"cannot parse value at data row {row}, column {col!r}")
        self.row = row
        self.col = col


class IncompatiblePeriod(DataError):
    pass


class AllInputsDropped(DataError):
    pass


class EmptyFrame(DataError):
    pass


class SchemaMismatch(DataError):
    pass


class DegenerateColumn(DataError):
    def __init__(self, name):
        super().__init__(f"column {name!r} is constant and cannot be inverted")
        self.name = name


class FrameTooShort(DataError):
    pass


class TooShortForHorizon(DataError):
    pass


class TooShortForLookback(DataError):
    pass


class DimensionMismatch(HomeloadError, ValueError):
    pass


ShapeMismatch = DimensionMismatch


class DegenerateData(HomeloadError, ValueError):
    pass


class NonFiniteValue(HomeloadError, ValueError):
    pass


class EmptyData(HomeloadError, ValueError):
    pass


class FewerPointsThanClusters(HomeloadError, ValueError):
    pass


class EmptyBatch(HomeloadError, ValueError):
    pass


EmptySet = EmptyBatch


class LengthMismatch(HomeloadError, ValueError):
    pass


class EmptyInput(HomeloadError, ValueError):
    pass


class EmptyReport(HomeloadError, ValueError):
    pass


class ConfigError(HomeloadError, ValueError):
    pass


class UnknownKey(ConfigError):
    def __init__(self, name):
        super().__init__(f"unknown configuration key {name!r}")
        self.name = name


class TypeMismatch(ConfigError):
    def __init__(self, key, message=""):
        super().__init__(f"invalid value for {key!r}" + (f": {message}" if message else ""))
        self.key = key
