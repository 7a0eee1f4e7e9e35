"""
Unit Tests for SymbolicService

Constraint functionals, constraint lookup and the facade
validation. Jet-level bracket checks run through the suite runner.
"""

import pytest

from src.services import InputError, UnmatchedVariationError, ValidationError
from src.services.symbolic.constraints import SPINOR_FIELDS
from src.services.symbolic.service import SymbolicService

pytestmark = pytest.mark.symbolic


@pytest.fixture(scope="module")
def symbolic():
    return SymbolicService()


class TestSymbolicServiceSetup:
    """Test facade construction"""

    def test_jet_order_range(self):
        """Test that the jet order is bounded"""
        with pytest.raises(ValidationError, match="jet order"):
            SymbolicService(order=0)

        with pytest.raises(ValidationError, match="jet order"):
            SymbolicService(order=9)

    def test_parse_by_domain(self, symbolic):
        """Test that the domain selects the registry"""
        assert not symbolic.parse("xi_dag", "bulk").is_zero()
        assert symbolic.registry("bulk").base_dim == 4


class TestConstraints:
    """Test the boundary constraint functionals"""

    def test_constraint_names(self, symbolic):
        """Test L, P, M, H are built"""
        assert set(symbolic.build_constraints()) == {"L", "P", "M", "H"}

    def test_constraints_have_ghost_number_one(self, symbolic):
        """Test that H_λ is a ghost-number-one top form"""
        assert symbolic.build_constraints()["H"].ghost_number() == 1

    def test_unregistered_reference(self, symbolic):
        """Test that the reference connection must be a symbol"""
        with pytest.raises(InputError, match="is not registered"):
            symbolic.build_constraints(reference="w9")

    def test_pure_gravity_truncation(self, symbolic):
        """Test that dropping gravitino terms removes M_χ"""
        constraints = symbolic.build_constraints(pure_gravity=True)
        assert "M" not in constraints
        assert "L" in constraints
        for functional in constraints.values():
            assert not SPINOR_FIELDS & set(functional.integrand.symbols())


class TestVectorFields:
    """Test vector field lookup by constraint name"""

    def test_check_unknown_constraint(self, symbolic):
        """Test that only boundary constraints are checked"""
        with pytest.raises(UnmatchedVariationError, match="is not a boundary constraint") as excinfo:
            symbolic.check_vector_field("Q")
        assert excinfo.value.field_name == "Q"

    def test_bracket_of_unknown_constraint(self, symbolic):
        """Test that brackets resolve both constraint names"""
        with pytest.raises(UnmatchedVariationError, match="is not a boundary constraint"):
            symbolic.poisson_bracket("L", "Q")
