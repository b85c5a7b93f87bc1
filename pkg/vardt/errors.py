#!/usr/bin/env python3
"""
Exception hierarchy for the VarDT toolkit.

Library code raises these; the CLI and the corpus evaluator catch them,
log them and turn them into exit codes or per-bug failure records.
"""

from typing import Optional


class VarDTError(Exception):
    """Base class for every error raised by the toolkit."""

    exit_code = 3


class MiniLangSyntaxError(VarDTError):
    """Source text is not valid MiniLang."""

    exit_code = 1

    def __init__(self, message: str, line: int = 0, column: int = 0):
        self.message = message
        self.line = line
        self.column = column
        super().__init__(f"{line}:{column}: {message}" if line else message)


class DuplicateMethodError(MiniLangSyntaxError):
    """Two methods share a name."""


class SuiteError(VarDTError):
    """The test suite is empty or has duplicate test ids."""

    exit_code = 1


class NothingToLocalizeError(VarDTError):
    exit_code = 2

    def __init__(self, message: str = "nothing to localize"):
        super().__init__(message)


class InsufficientTestsError(VarDTError):
    """A method or table fails the three-test / mixed-label gate."""

    exit_code = 2

    def __init__(self, message: str = "insufficient tests", method: Optional[str] = None):
        self.method = method
        super().__init__(message)


class MethodUnreachedError(VarDTError):
    """The failed run never executed the method being sliced."""

    exit_code = 2

    def __init__(self, method: str):
        self.method = method
        super().__init__(f"method unreached: {method}")


class UnobservedVariableError(VarDTError):
    def __init__(self, variable: str):
        self.variable = variable
        super().__init__(f"variable {variable} is unobserved in every row")


class PatchFormatError(VarDTError):
    exit_code = 1


class GroundTruthFormatError(VarDTError):
    exit_code = 1


class SliceMergeError(VarDTError):
    """Slices of different methods, or none at all, were handed to a merge."""
