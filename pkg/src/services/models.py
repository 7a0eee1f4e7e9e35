"""
Data Transfer Objects (DTOs) for Service Layer

These objects carry verification results between services, the suite
runner and the report adapter.
"""

from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Dict, List, Optional

from src.services.base_service import ConfigurationError


class Status(str, Enum):
    """Outcome of a check or a whole suite"""
    PASS = "pass"
    FAIL = "fail"


class Parity(str, Enum):
    """Grassmann parity of a homogeneous (or not) quantity"""
    EVEN = "even"
    ODD = "odd"
    MIXED = "mixed"

    @property
    def bit(self) -> int:
        if self is Parity.MIXED:
            raise ValueError("mixed parity has no bit")
        return 0 if self is Parity.EVEN else 1

    @classmethod
    def from_bit(cls, bit: int) -> "Parity":
        return cls.ODD if bit % 2 else cls.EVEN


class ReportFormat(str, Enum):
    TEXT = "text"
    JSON = "json"


@dataclass
class CheckItem:
    """One verified claim with the anchor it reproduces"""
    check_id: str
    anchor: str
    status: Status
    witness: Optional[str] = None
    details: Dict[str, Any] = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return self.status is Status.PASS

    def to_dict(self) -> dict:
        """Convert to dictionary (stable key order)"""
        result = {
            'check_id': self.check_id,
            'anchor': self.anchor,
            'status': self.status.value,
        }
        if self.witness is not None:
            result['witness'] = self.witness
        if self.details:
            result['details'] = {k: self.details[k] for k in sorted(self.details)}
        return result


@dataclass
class VerificationReport:
    """Result of a suite (or a sub-verification) run"""
    suite: str
    items: List[CheckItem] = field(default_factory=list)
    metadata: Dict[str, Any] = field(default_factory=dict)
    elapsed_ms: Optional[float] = None

    @property
    def status(self) -> Status:
        if self.items and all(item.passed for item in self.items):
            return Status.PASS
        return Status.FAIL

    @property
    def passed(self) -> bool:
        return self.status is Status.PASS

    def add(self, check_id: str, anchor: str, ok: bool,
            witness: Optional[str] = None, **details: Any) -> CheckItem:
        """Append a check item and return it"""
        item = CheckItem(
            check_id=check_id,
            anchor=anchor,
            status=Status.PASS if ok else Status.FAIL,
            witness=None if ok else witness,
            details=details,
        )
        self.items.append(item)
        return item

    def extend(self, other: "VerificationReport") -> None:
        """Merge another report's items into this one"""
        self.items.extend(other.items)

    def failures(self) -> List[CheckItem]:
        return [item for item in self.items if not item.passed]

    def to_dict(self) -> dict:
        """
        Convert to dictionary

        Wall-clock timing is left out: the JSON form
        depends only on (suite, seed, trials).
        """
        return {
            'suite': self.suite,
            'status': self.status.value,
            'metadata': {k: self.metadata[k] for k in sorted(self.metadata)},
            'summary': {
                'total': len(self.items),
                'passed': sum(1 for item in self.items if item.passed),
                'failed': len(self.failures()),
            },
            'items': [item.to_dict() for item in self.items],
        }


@dataclass
class SuiteConfig:
    """Configuration of one suite run"""
    suite: str
    seed: int = 1
    trials: int = 100
    report_format: ReportFormat = ReportFormat.TEXT
    term_ceiling: int = 10 ** 6
    num_generators: int = 16
    epsilon_sign: int = 1

    def validate(self) -> None:
        if not self.suite:
            raise ConfigurationError("suite name is required")
        if not isinstance(self.trials, int) or self.trials < 1:
            raise ConfigurationError(f"trials must be >= 1, got {self.trials!r}")
        if not 0 <= self.seed < 2 ** 64:
            raise ConfigurationError(f"seed must be a 64-bit unsigned integer, got {self.seed!r}")
        if self.term_ceiling < 1:
            raise ConfigurationError("term ceiling must be positive")
        if self.num_generators < 1:
            raise ConfigurationError("need at least one Grassmann generator")
        if self.epsilon_sign not in (1, -1):
            raise ConfigurationError("epsilon sign must be +1 or -1")

    def to_dict(self) -> dict:
        return {
            'suite': self.suite,
            'seed': self.seed,
            'trials': self.trials,
            'report_format': self.report_format.value,
            'term_ceiling': self.term_ceiling,
            'num_generators': self.num_generators,
            'epsilon_sign': self.epsilon_sign,
        }


@dataclass
class MapCertificate:
    """
    Checkable form of a fiberwise linear map.

    `matrix` is stored row-major in the monomial bases of the source and
    target fibers; `kernel_basis` and `image_basis` hold coefficient vectors
    in those same bases.
    """
    name: str
    source_dim: int
    target_dim: int
    matrix: List[List[Any]]
    rank: int
    kernel_basis: List[List[Any]] = field(default_factory=list)
    image_basis: List[List[Any]] = field(default_factory=list)

    @property
    def injective(self) -> bool:
        return self.rank == self.source_dim

    @property
    def surjective(self) -> bool:
        return self.rank == self.target_dim

    @property
    def bijective(self) -> bool:
        return self.injective and self.surjective

    @property
    def kernel_dim(self) -> int:
        return self.source_dim - self.rank

    def to_dict(self) -> dict:
        return {
            'name': self.name,
            'source_dim': self.source_dim,
            'target_dim': self.target_dim,
            'rank': self.rank,
            'kernel_dim': self.kernel_dim,
            'injective': self.injective,
            'surjective': self.surjective,
        }


@dataclass
class SplitResult:
    """Named parts of a unique decomposition plus its residual"""
    name: str
    parts: Dict[str, Any] = field(default_factory=dict)
    residual: Any = None

    @property
    def exact(self) -> bool:
        return self.residual is not None and self.residual.is_zero()

    def __getitem__(self, key: str) -> Any:
        return self.parts[key]
