"""
Base Service Class

Provides common functionality for all verification services:
logging, operation tracking and the typed error hierarchy.
"""

import logging
from typing import Any, Dict, Iterable


class ServiceError(Exception):
    """Base exception for service layer errors"""
    pass


class ValidationError(ServiceError):
    """Raised when an argument fails validation"""
    pass


class ConfigurationError(ServiceError):
    """Raised when a run configuration is inconsistent (e.g. generator counts)"""
    pass


class InputError(ServiceError):
    """Raised when an input violates a precondition (Majorana, parity, registry)"""
    pass


class SingularSystemError(ServiceError):
    """Raised when an exact linear system has no (unique) solution"""
    pass


class DegenerateFrameError(SingularSystemError):
    """Raised when a vielbein frame fails the nondegeneracy guard"""
    pass


class ParseError(ServiceError):
    """Raised when expression text does not match the grammar"""

    def __init__(self, message: str, offset: int):
        super().__init__(f"{message} at offset {offset}")
        self.offset = offset


class TermCeilingError(ServiceError):
    """Raised when an expression grows past the configured term ceiling"""

    def __init__(self, size: int, ceiling: int, context: str = ""):
        super().__init__(f"term ceiling exceeded ({size} > {ceiling}) {context}".strip())
        self.size = size
        self.ceiling = ceiling


class UnknownSuiteError(ServiceError):
    """Raised when a suite name is not registered"""
    pass


class UnknownIdentityError(ServiceError):
    """Raised when an identity id is not in the registered list"""
    pass


class RuleTableGapError(ServiceError):
    """Raised when a substitution map has no rule for a symbol it must cover"""
    pass


class UnmatchedVariationError(ServiceError):
    """Raised when a Hamiltonian vector field cannot match some variation"""

    def __init__(self, field_name: str, detail: str = ""):
        super().__init__(f"unmatched variation of '{field_name}' {detail}".strip())
        self.field_name = field_name


class BaseService:
    """
    Base class for all services

    Provides:
    - Logging
    - Common error handling
    - Operation tracking
    """

    def __init__(self):
        """Initialize base service"""
        self._logger = logging.getLogger(self.__class__.__name__)
        self._operation_count = 0

    def _log_operation(self, operation: str, **kwargs: Any) -> None:
        """
        Log a service operation

        Args:
            operation: Name of the operation
            **kwargs: Additional context to log
        """
        self._operation_count += 1
        self._logger.info(f"Operation #{self._operation_count}: {operation}", extra=kwargs)

    def _log_debug(self, message: str, **kwargs: Any) -> None:
        """Log debug message"""
        self._logger.debug(message, extra=kwargs)

    def _log_warning(self, message: str, **kwargs: Any) -> None:
        """Log warning message"""
        self._logger.warning(message, extra=kwargs)

    def _log_error(self, message: str, **kwargs: Any) -> None:
        """Log error message"""
        self._logger.error(message, extra=kwargs)

    def _handle_error(self, error: Exception, context: str) -> None:
        """
        Centralized error handling

        Typed service errors propagate unchanged; anything else is logged
        and wrapped.

        Args:
            error: The exception that occurred
            context: Description of what was being done

        Raises:
            ServiceError: Wraps the original error
        """
        if isinstance(error, ServiceError):
            raise error
        self._log_error(f"Error in {context}: {str(error)}", error_type=type(error).__name__)
        raise ServiceError(f"{context} failed: {str(error)}") from error

    def _validate_required(self, data: Dict[str, Any], required_fields: Iterable[str]) -> None:
        """
        Validate required fields are present

        Args:
            data: Dictionary to validate
            required_fields: Names that must be keys of data

        Raises:
            ValidationError: If any required field is missing
        """
        missing = [name for name in required_fields if name not in data]
        if missing:
            raise ValidationError(f"Missing required fields: {', '.join(missing)}")

    def _validate_range(self, label: str, value: int, low: int, high: int) -> None:
        """
        Validate an integer parameter lies in [low, high]

        Raises:
            ValidationError: If value is outside the range
        """
        if not isinstance(value, int) or value < low or value > high:
            raise ValidationError(f"{label} must be in [{low}, {high}], got {value!r}")

    def get_stats(self) -> Dict[str, Any]:
        """
        Get service statistics

        Returns:
            Dictionary with service stats
        """
        return {
            'service_name': self.__class__.__name__,
            'operations_processed': self._operation_count,
        }
