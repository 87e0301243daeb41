"""Exception hierarchy shared across the package."""


class RankModError(Exception):
    """Base class for domain errors raised by this package."""


class IndexOutOfRange(RankModError, IndexError):
    pass


class InvalidPermutation(RankModError, ValueError):
    pass


class WeightTooHigh(RankModError, ValueError):
    pass


class DimensionMismatch(RankModError, ValueError):
    pass


class IllegalState(RankModError, ValueError):
    """Raised when a cell state does not demodulate to a valid permutation."""


class RankOutOfRange(RankModError, IndexError):
    pass


class SpecMismatch(RankModError, ValueError):
    pass


class PreconditionViolated(RankModError, ValueError):
    pass


class DomainError(RankModError, ValueError):
    pass


class ParamError(RankModError, ValueError):
    pass


class InstanceTooLarge(RankModError, ValueError):
    pass


class NotAPartition(RankModError, ValueError):
    pass


class DegreeMismatch(RankModError, ValueError):
    pass


class ShapeMismatch(RankModError, ValueError):
    pass


class NotPowerOfTwo(RankModError, ValueError):
    pass


class CodebookViolation(RankModError, ValueError):
    pass


class ConfigError(RankModError, ValueError):
    pass


class EncodeFailure(RankModError):
    """An ingredient encoder could not produce a valid codeword.

    ``violations`` is a dict describing what went wrong (for example the
    number of cells written outside the state support).
    """

    def __init__(self, message, violations=None):
        super().__init__(message)
        self.violations = dict(violations or {})


class InnerEncodeFailure(EncodeFailure):
    pass


class NoEncoding(EncodeFailure):
    pass


class RewriteFailure(EncodeFailure):
    """A rewriting code could not encode because an ingredient failed."""
