"""Exception types shared across the package."""


class DdcatError(Exception):
    """Base class for all errors raised by this package."""


class ParseError(DdcatError):
    def __init__(self, message, position=None):
        if position is not None:
            message = "%s (at position %d)" % (message, position)
        super().__init__(message)
        self.position = position


class ValidationError(DdcatError):
    pass


class RangeError(DdcatError):
    pass


class UnknownGenerator(DdcatError):
    pass


class CompositionError(DdcatError):
    pass


class GenerationError(DdcatError):
    pass


class TypeMismatch(DdcatError):
    def __init__(self, message, level=None, position=None):
        super().__init__(message)
        self.level = level
        self.position = position


class NotSwappable(DdcatError):
    def __init__(self, index, kind):
        super().__init__("levels %d and %d cannot be swapped (%s)" % (index, index + 1, kind))
        self.index = index
        self.kind = kind


class SignatureMismatch(DdcatError):
    pass


class OracleOverflow(DdcatError):
    def __init__(self, cap):
        super().__init__("equivalence class exceeds oracle cap %d" % cap)
        self.cap = cap


class AnchorMismatch(DdcatError):
    pass


class IllegalPosition(DdcatError):
    pass


class NotAdmissible(DdcatError):
    pass


class NotRectangular(DdcatError):
    pass
