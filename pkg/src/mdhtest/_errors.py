"""Exception hierarchy for mdhtest."""


class MdhError(ValueError):
    """Base class for all errors raised by mdhtest."""


class NonFiniteInput(MdhError):
    pass


class LagOutOfRange(MdhError):
    pass


class SeriesTooShort(MdhError):
    pass


class DegenerateSeries(MdhError):
    pass


class BadMomentOrder(MdhError):
    pass


class BadBandwidthParams(MdhError):
    pass


class ExplosiveSample(MdhError):
    pass


class ParseError(MdhError):
    """Input file could not be parsed; ``line`` is 1-based when known."""

    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class NonPositivePrice(MdhError):
    pass
