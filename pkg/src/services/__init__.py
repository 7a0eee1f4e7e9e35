"""
Service Layer Package

Exact verification services: scalars and Grassmann algebra, the Clifford
representation, fiber exterior algebra, unique decompositions, the
symbolic functional calculus and the cylinder constructions. Services are
framework-agnostic; the CLI is one client.
"""

from src.services.base_service import (
    BaseService,
    ConfigurationError,
    DegenerateFrameError,
    InputError,
    ParseError,
    RuleTableGapError,
    ServiceError,
    SingularSystemError,
    TermCeilingError,
    UnknownIdentityError,
    UnknownSuiteError,
    UnmatchedVariationError,
    ValidationError,
)
from src.services.clifford_service import CliffordService
from src.services.decomposition_service import DecompositionService
from src.services.fiber_service import FiberService
from src.services.models import (
    CheckItem,
    MapCertificate,
    Parity,
    ReportFormat,
    SplitResult,
    Status,
    SuiteConfig,
    VerificationReport,
)
from src.services.verification_service import VerificationService

__all__ = [
    # Services
    'BaseService',
    'CliffordService',
    'DecompositionService',
    'FiberService',
    'VerificationService',
    # Exceptions
    'ServiceError',
    'ValidationError',
    'ConfigurationError',
    'InputError',
    'SingularSystemError',
    'DegenerateFrameError',
    'ParseError',
    'TermCeilingError',
    'UnknownSuiteError',
    'UnknownIdentityError',
    'RuleTableGapError',
    'UnmatchedVariationError',
    # Models
    'CheckItem',
    'MapCertificate',
    'Parity',
    'ReportFormat',
    'SplitResult',
    'Status',
    'SuiteConfig',
    'VerificationReport',
]
