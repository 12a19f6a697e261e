"""Custom exception hierarchy for plansim.

This module defines all custom exceptions used throughout the package,
providing specific error types for different failure scenarios. Each class
carries the process exit code the CLI reports for it.
"""

from typing import Any, List, Optional

EXIT_OK = 0
EXIT_VALIDATION = 1
EXIT_USAGE = 2
EXIT_IO = 3


class PlansimException(Exception):
    """Base exception class for all plansim errors.

    Attributes:
        message: Human-readable error message
        details: Optional dictionary containing additional error details
    """

    exit_code: int = EXIT_VALIDATION

    def __init__(self, message: str, details: Optional[dict] = None) -> None:
        """Initialize the exception.

        Args:
            message: Human-readable error message
            details: Optional dictionary containing additional error details
        """
        self.message = message
        self.details = details or {}
        super().__init__(self.message)

    def __str__(self) -> str:
        """String representation of the exception."""
        if self.details:
            details_str = ", ".join(f"{k}={v}" for k, v in self.details.items())
            return f"{self.message} ({details_str})"
        return self.message


class GraphValidationError(PlansimException):
    """Raised when a precinct dual graph is malformed or violates an invariant.

    Attributes:
        node_id: Offending precinct id, when a single one is responsible
    """

    def __init__(
        self,
        message: str,
        node_id: Optional[str] = None,
        details: Optional[dict] = None,
    ) -> None:
        self.node_id = node_id

        error_details = details or {}
        if node_id is not None:
            error_details["node_id"] = node_id

        super().__init__(message, error_details)


class PlanValidationError(PlansimException):
    """Raised when an operation that needs a valid plan receives an invalid one.

    Attributes:
        violations: The violation records found by plan validation
    """

    def __init__(
        self,
        message: str,
        violations: Optional[List[Any]] = None,
        details: Optional[dict] = None,
    ) -> None:
        self.violations = list(violations or [])

        error_details = details or {}
        if self.violations:
            error_details["violations"] = len(self.violations)

        super().__init__(message, error_details)


class AssignmentError(PlansimException):
    """Raised for invalid intersection matrices or assignment shapes."""


class GenerationError(PlansimException):
    """Raised when plan generation cannot proceed (seeding, trees, chain steps)."""


class SummaryError(PlansimException, ValueError):
    """Raised when a score list cannot be summarized."""


class SynthError(PlansimException):
    """Raised for invalid synthetic geometry parameters."""

    exit_code = EXIT_USAGE


class PlansimConfigError(PlansimException):
    """Raised for invalid run configuration or manifest mismatches."""

    exit_code = EXIT_USAGE


class PlansimFileError(PlansimException):
    """Exception raised for file operation errors.

    Attributes:
        file_path: Path to the file that caused the error
        operation: The file operation that failed (e.g., 'read', 'write')
        original_exception: The original exception that caused this error
    """

    exit_code = EXIT_IO

    def __init__(
        self,
        message: str,
        file_path: Optional[str] = None,
        operation: Optional[str] = None,
        original_exception: Optional[Exception] = None,
        details: Optional[dict] = None,
    ) -> None:
        """Initialize the file error.

        Args:
            message: Human-readable error message
            file_path: Path to the file
            operation: File operation that failed
            original_exception: Original exception that caused this error
            details: Optional additional error details
        """
        self.file_path = file_path
        self.operation = operation
        self.original_exception = original_exception

        error_details = details or {}
        if file_path:
            error_details["file_path"] = file_path
        if operation:
            error_details["operation"] = operation
        if original_exception:
            error_details["original_error"] = str(original_exception)

        super().__init__(message, error_details)


class UsageError(PlansimConfigError):
    """Raised for malformed command lines."""
