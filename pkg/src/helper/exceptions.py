"""
Custom exceptions for socodes
"""


class SocodesError(Exception):
    """Base class for all socodes errors"""
    pass


class ConfigurationError(SocodesError):
    """Raised when configuration is missing or invalid"""
    pass


class FieldError(SocodesError):
    """Raised for invalid field parameters, reducible moduli or zero inversion"""
    pass


class ParameterError(SocodesError):
    """Raised when an operation is called outside its parameter range"""
    pass


class DimensionMismatchError(SocodesError):
    """Raised when codes, matrices or schemes do not fit together"""
    pass


class EnumerationCapError(SocodesError):
    """Raised when exhaustive enumeration would exceed the configured cap"""

    def __init__(self, message: str, limit: int):
        self.limit = limit
        super().__init__(f"{message} (limit: {limit})")


class CodeFileError(SocodesError):
    """Raised when a code file cannot be parsed"""

    def __init__(self, message: str, line: int = 0):
        self.line = line
        super().__init__(f"line {line}: {message}" if line else message)


class VerificationError(SocodesError):
    """Raised when a constructed object fails its verified postcondition"""
    pass


class SearchExhaustedError(SocodesError):
    """Raised when a bounded search finds no verified result"""
    pass


class FormulaDefectError(SocodesError):
    """Raised when a printed formula does not evaluate exactly"""
    pass
