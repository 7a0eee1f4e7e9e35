"""
Pytest Configuration and Shared Fixtures

This file is automatically loaded by pytest and provides
shared fixtures available to all test modules.
"""

import random
import sys
from pathlib import Path

import pytest

# Add the repository root so that `src.*` imports resolve
root_path = Path(__file__).parent.parent
sys.path.insert(0, str(root_path))

from src.services.clifford_service import CliffordService  # noqa: E402
from src.services.decomposition_service import DecompositionService  # noqa: E402
from src.services.fiber_service import FiberService, random_frame, standard_frame  # noqa: E402
from src.services.symbolic.registry import boundary_registry, bulk_registry  # noqa: E402


# ============================================================================
# RANDOMNESS
# ============================================================================

@pytest.fixture
def rng():
    """
    Fixture: seeded random generator.

    Every randomized test draws from this so that failures reproduce.
    """
    return random.Random(1)


# ============================================================================
# SERVICE LAYER FIXTURES
# ============================================================================

@pytest.fixture(scope="session")
def clifford():
    """Fixture: CliffordService with the default orientation"""
    return CliffordService()


@pytest.fixture(scope="session")
def fibers(clifford):
    """Fixture: FiberService sharing the Clifford representation"""
    return FiberService(clifford.basis)


@pytest.fixture(scope="session")
def decompositions(clifford):
    """Fixture: DecompositionService sharing the Clifford representation"""
    return DecompositionService(clifford.basis)


# ============================================================================
# FRAMES
# ============================================================================

@pytest.fixture
def bulk_frame():
    """Fixture: random nondegenerate bulk vielbein (seed 7)"""
    return random_frame(random.Random(7), 4)


@pytest.fixture
def boundary_frame():
    """Fixture: random nondegenerate boundary vielbein with ε_n (seed 7)"""
    return random_frame(random.Random(7), 3)


@pytest.fixture
def standard_bulk_frame():
    """Fixture: identity vielbein"""
    return standard_frame(4)


@pytest.fixture
def standard_boundary_frame():
    """Fixture: e_m = v_{m+1}, ε_n = v_0"""
    return standard_frame(3)


# ============================================================================
# SYMBOLIC FIXTURES
# ============================================================================

@pytest.fixture(scope="session")
def boundary_fields():
    """Fixture: boundary field registry"""
    return boundary_registry()


@pytest.fixture(scope="session")
def bulk_fields():
    """Fixture: bulk field registry"""
    return bulk_registry()
