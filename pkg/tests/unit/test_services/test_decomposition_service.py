"""
Unit Tests for DecompositionService

Tests the unique splits of boundary fiber forms.
"""

import random

import pytest

from src.services import DegenerateFrameError, ValidationError
from src.services.fiber_service import FiberForm, FiberSpace, Frame, wedge


class TestSplit22:
    """Test β = e ρ + ε_n [e, v]"""

    def test_split_is_exact(self, decompositions, standard_boundary_frame):
        """Test that the parts rebuild a random β"""
        beta = decompositions.random_form(random.Random(2), FiberSpace(3, 2, 2))
        result = decompositions.split_22(beta, standard_boundary_frame)
        assert result.exact
        assert set(result.parts) == {"rho", "v"}

    def test_v_lies_in_kernel(self, decompositions, boundary_frame):
        """Test that the v part is annihilated by e"""
        beta = decompositions.random_form(random.Random(3), FiberSpace(3, 2, 2))
        v = decompositions.split_22(beta, boundary_frame)["v"]
        assert wedge(boundary_frame.e_form(), v).is_zero()

    def test_split_is_basis_independent(self, decompositions, boundary_frame):
        """Test that a reshuffled generator basis gives the same parts"""
        beta = decompositions.random_form(random.Random(4), FiberSpace(3, 2, 2))
        exact, same = decompositions.check_split("split_22", decompositions.split_22, beta, boundary_frame)
        assert exact
        assert same

    def test_bulk_frame_rejected(self, decompositions, bulk_frame):
        """Test that split_22 is a boundary decomposition"""
        beta = FiberForm(FiberSpace(4, 2, 2))
        with pytest.raises(ValidationError, match="lives on the boundary"):
            decompositions.split_22(beta, bulk_frame)

    def test_wrong_degree_rejected(self, decompositions, boundary_frame):
        """Test that β must be a (2,2) form"""
        with pytest.raises(ValidationError, match="expected an element"):
            decompositions.split_22(FiberForm(FiberSpace(3, 2, 1)), boundary_frame)


class TestMembershipLemmas:
    """Test the (2,1) and (1,2) uniqueness conditions"""

    def test_zero_satisfies_check_21(self, decompositions, boundary_frame):
        """Test that α = 0 passes the (2,1) system"""
        assert decompositions.check_21(FiberForm(FiberSpace(3, 2, 1)), boundary_frame)

    def test_zero_satisfies_check_12(self, decompositions, boundary_frame):
        """Test that a = 0 passes the (1,2) system"""
        assert decompositions.check_12(FiberForm(FiberSpace(3, 1, 2)), boundary_frame)

    def test_check_21_wrong_degree(self, decompositions, boundary_frame):
        """Test degree validation"""
        with pytest.raises(ValidationError, match="expected an element"):
            decompositions.check_21(FiberForm(FiberSpace(3, 1, 2)), boundary_frame)


class TestStructuralFix:
    """Test the representative fixing of the torsion constraint"""

    def test_fix_is_exact(self, decompositions, boundary_frame):
        """Test ε_n(T - [e, v]) = e σ"""
        torsion = decompositions.random_form(random.Random(5), FiberSpace(3, 2, 1))
        result = decompositions.structural_fix(torsion, boundary_frame)
        assert result.exact
        assert set(result.parts) == {"v", "sigma"}

    def test_split_13_is_exact(self, decompositions, boundary_frame):
        """Test Θ = e α + ε_n β"""
        theta = decompositions.random_form(random.Random(6), FiberSpace(3, 1, 3))
        result = decompositions.split_13(theta, boundary_frame)
        assert result.exact
        assert decompositions.alpha_boundary(theta, boundary_frame) == result["alpha"]


class TestIsoCertificates:
    """Test certify_isos reports"""

    def test_certificates_carry_anchors(self, decompositions, bulk_frame):
        """Test that every certificate row names its claim"""
        report = decompositions.certify_isos(bulk_frame)
        assert report.items
        assert all(item.anchor for item in report.items)

    def test_degenerate_frame_rejected(self, decompositions):
        """Test the nondegeneracy guard on certificates"""
        frame = Frame(4, [[1, 0, 0, 0], [2, 0, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1]])
        with pytest.raises(DegenerateFrameError):
            decompositions.certify_isos(frame)
