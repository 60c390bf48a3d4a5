class TamExtractError(Exception):
    """Base class for every error raised by tam_extract."""


class FeatureStructureError(TamExtractError, ValueError):
    pass


class LexiconSyntaxError(TamExtractError, ValueError):
    def __init__(self, message: str, line_number: int) -> None:
        super().__init__(f"line {line_number}: {message}")
        self.line_number = line_number


class LexiconFormatError(TamExtractError, ValueError):
    pass


class GrammarSyntaxError(TamExtractError, ValueError):
    def __init__(self, message: str, line: int, column: int) -> None:
        super().__init__(f"{line}:{column}: {message}")
        self.line = line
        self.column = column


class UnknownFunctionError(TamExtractError, KeyError):
    def __str__(self) -> str:
        return f"Unknown functional operator '{self.args[0]}'"


class CategoryError(TamExtractError, ValueError):
    pass


class PackError(TamExtractError, RuntimeError):
    pass


class PackValidationError(PackError):
    def __init__(self, violations: list[str]) -> None:
        super().__init__(f"{len(violations)} pack violation(s):\n" + "\n".join(f"  - {v}" for v in violations))
        self.violations = violations


class FilterExpressionError(TamExtractError, ValueError):
    pass
