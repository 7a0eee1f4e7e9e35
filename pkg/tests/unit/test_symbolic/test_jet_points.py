"""
Unit Tests for Jets and Jet Points

Truncated products, sampled environments, the structural constraint
fix and the affine linear solver.
"""

import random

import pytest

from src.services import SingularSystemError, ValidationError
from src.services.clifford_service import GammaBasis
from src.services.scalars import gq
from src.services.symbolic.compiler import unknown_forms, sample_environment, solve_affine
from src.services.symbolic.constraints import sample_boundary_point, structural_form
from src.services.symbolic.functional import pointwise_residual
from src.services.symbolic.jets import Jet, JetContext
from src.services.symbolic.registry import bulk_registry

pytestmark = pytest.mark.symbolic

SCALAR = ((), (), None)


def monomial(ctx, exponent, value=1):
    return Jet(ctx, {((), (exponent,), ()): gq(value)})


class TestJetProducts:
    """Test truncation of jet products"""

    def test_product_keeps_terms_up_to_order(self):
        """Test that x·x survives and x·x·x is cut at order 2"""
        ctx = JetContext(1, 2)
        x = monomial(ctx, 1)
        assert (x * x).terms == {((), (2,), ()): gq(1)}
        assert (x * x * x).is_zero()

    def test_product_with_constant(self):
        """Test that constants multiply every degree"""
        ctx = JetContext(1, 3)
        series = monomial(ctx, 0, 2) + monomial(ctx, 3, 5)
        product = series * monomial(ctx, 0, 3)
        assert product.terms == {((), (0,), ()): gq(6), ((), (3,), ()): gq(15)}

    def test_formal_factor_cap(self):
        """Test that monomials with too many formal factors are dropped"""
        ctx = JetContext(1, 1, max_formal=1)
        a = Jet.formal(ctx, "a", (), False)
        b = Jet.formal(ctx, "b", (), False)
        assert (a * b).is_zero()
        assert not (a * monomial(ctx, 1)).is_zero()

    def test_odd_formal_squares_to_zero(self):
        """Test that an odd formal variable is nilpotent"""
        ctx = JetContext(1, 1)
        eta = Jet.formal(ctx, "eta", (), True)
        assert (eta * eta).is_zero()


class TestSampledEnvironments:
    """Test random jet points"""

    def test_environment_without_gamma_basis(self):
        """Test that a bulk point builds its own gamma representation"""
        env = sample_environment(bulk_registry(), random.Random(1), 1, names=("e",))
        assert isinstance(env.gammas, GammaBasis)
        assert not env.gamma(1).is_zero()
        assert env.is_bound("e")

    def test_boundary_point_satisfies_structural_constraint(self):
        """Test that the structural constraint holds at a sampled boundary point"""
        env = sample_boundary_point(random.Random(3), 2)
        assert pointwise_residual(structural_form(env), "S").is_zero
        assert env.is_bound("sigma")


class TestAffineSolver:
    """Test linear solves with formal unknowns"""

    @pytest.fixture
    def system(self):
        ctx = JetContext(1, 1)
        unknowns = [("a", 0, 0, "none", False)]
        a = unknown_forms(ctx, unknowns)["a"].entry(SCALAR)
        return ctx, unknowns, a

    def test_square_system(self, system):
        """Test that 2a = 6 gives a = 3"""
        ctx, unknowns, a = system
        solution = solve_affine(ctx, unknowns, [a.scaled(2)], [Jet.constant(ctx, 6)])
        assert solution["a"].entry(SCALAR).terms == Jet.constant(ctx, 3).terms

    def test_affine_rows(self, system):
        """Test that constant parts of the rows move to the right-hand side"""
        ctx, unknowns, a = system
        rows = [a.scaled(4) + Jet.constant(ctx, 1)]
        solution = solve_affine(ctx, unknowns, rows, [Jet.constant(ctx, 13)])
        assert solution["a"].entry(SCALAR).terms == Jet.constant(ctx, 3).terms

    def test_overdetermined_consistent(self, system):
        """Test that a surplus row that agrees is accepted"""
        ctx, unknowns, a = system
        rows = [a.scaled(2), a.scaled(4) + Jet.constant(ctx, 1)]
        solution = solve_affine(ctx, unknowns, rows, [Jet.constant(ctx, 6), Jet.constant(ctx, 13)])
        assert solution["a"].entry(SCALAR).terms == Jet.constant(ctx, 3).terms

    def test_overdetermined_inconsistent(self, system):
        """Test that a surplus row that disagrees is reported"""
        ctx, unknowns, a = system
        rows = [a.scaled(2), a.scaled(4)]
        with pytest.raises(SingularSystemError, match="inconsistent"):
            solve_affine(ctx, unknowns, rows, [Jet.constant(ctx, 6), Jet.constant(ctx, 13)])

    def test_too_few_equations(self, system):
        """Test that an underdetermined system is rejected"""
        ctx, unknowns, _ = system
        with pytest.raises(ValidationError, match="0 equations for 1 unknowns"):
            solve_affine(ctx, unknowns, [], [])

    def test_singular_rows(self, system):
        """Test that rows without the unknown cannot fix it"""
        ctx, unknowns, _ = system
        rows = [Jet.constant(ctx, 1), Jet.constant(ctx, 2)]
        with pytest.raises(SingularSystemError, match="rank 0"):
            solve_affine(ctx, unknowns, rows, [Jet.constant(ctx, 1), Jet.constant(ctx, 2)])
