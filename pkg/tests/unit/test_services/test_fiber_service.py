"""
Unit Tests for FiberService

Tests fiber forms, frames, W_k certificates and the boundary kernel checks.
"""

import pytest

from src.services import DegenerateFrameError, ValidationError
from src.services.fiber_service import (
    BULK_ARROWS,
    FiberForm,
    FiberSpace,
    Frame,
    certificate_sound,
    wedge,
)
from src.services.scalars import gq


class TestFiberSpaces:
    """Test fiber dimensions and form arithmetic"""

    def test_dimensions(self):
        """Test dim Ω^{(k,l)} = C(n,k) C(4,l) (times 4 for spinors)"""
        assert FiberSpace(4, 2, 1).dim == 24
        assert FiberSpace(3, 1, 2).dim == 18
        assert FiberSpace(3, 1, 0, "column").dim == 12
        assert len(FiberSpace(4, 1, 1).basis) == 16

    def test_vector_round_trip(self):
        """Test from_vector inverts vector"""
        space = FiberSpace(3, 1, 1)
        x = FiberForm(space, {((0,), (2,), None): 5})
        assert FiberForm.from_vector(space, x.vector()) == x

    def test_incompatible_addition_raises(self):
        """Test that forms in different fibers do not add"""
        a = FiberForm(FiberSpace(3, 1, 1), {((0,), (0,), None): 1})
        b = FiberForm(FiberSpace(3, 1, 2), {((0,), (0, 1), None): 1})
        with pytest.raises(ValidationError, match="incompatible fibers"):
            a + b

    def test_wedge_of_one_forms_is_antisymmetric(self):
        """Test dx^0 ∧ dx^1 = -dx^1 ∧ dx^0 and dx^0 ∧ dx^0 = 0"""
        space = FiberSpace(4, 1, 0)
        dx0 = FiberForm(space, {((0,), (), None): 1})
        dx1 = FiberForm(space, {((1,), (), None): 1})
        assert wedge(dx0, dx1) == -wedge(dx1, dx0)
        assert wedge(dx0, dx0).is_zero()

    def test_wedge_of_mixed_forms_is_nonzero(self):
        """Test (dx^1 ⊗ v_1) ∧ (dx^2 ⊗ v_2) survives and lands in Ω^{(2,2)}"""
        space = FiberSpace(4, 1, 1)
        a = FiberForm(space, {((1,), (1,), None): 1})
        b = FiberForm(space, {((2,), (2,), None): 1})
        product = wedge(a, b)
        assert not product.is_zero()
        assert (product.k, product.l) == (2, 2)
        assert product == wedge(b, a)

    def test_wedge_over_different_bases_raises(self):
        """Test that bulk and boundary forms do not multiply"""
        a = FiberForm(FiberSpace(4, 1, 0), {((0,), (), None): 1})
        b = FiberForm(FiberSpace(3, 1, 0), {((0,), (), None): 1})
        with pytest.raises(ValidationError, match="different base dimensions"):
            wedge(a, b)


class TestFrames:
    """Test vielbein validation"""

    def test_invalid_base_dimension(self):
        """Test that only 3- and 4-dimensional bases are allowed"""
        with pytest.raises(ValidationError, match="3- or 4-dimensional"):
            Frame(5, [[0] * 4] * 5)

    def test_boundary_frame_needs_normal(self):
        """Test that a boundary frame carries ε_n"""
        with pytest.raises(ValidationError, match="ε_n"):
            Frame(3, [[0, 1, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1]])

    def test_degenerate_frame_rejected(self):
        """Test the nondegeneracy guard"""
        frame = Frame(4, [[1, 0, 0, 0], [1, 0, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1]])
        assert not frame.is_nondegenerate()
        with pytest.raises(DegenerateFrameError, match="nondegeneracy"):
            frame.require_nondegenerate()

    def test_random_frames_are_nondegenerate(self, bulk_frame, boundary_frame):
        """Test that sampled frames pass the guard"""
        assert bulk_frame.is_nondegenerate()
        assert boundary_frame.is_nondegenerate()
        assert boundary_frame.is_boundary
        assert not bulk_frame.is_boundary

    def test_epsilon_form_only_on_boundary(self, standard_bulk_frame, standard_boundary_frame):
        """Test that ε_n exists only on the boundary"""
        assert standard_boundary_frame.epsilon_form().vector() == [gq(1), gq(0), gq(0), gq(0)]
        with pytest.raises(ValidationError, match="bulk frames carry no"):
            standard_bulk_frame.epsilon_form()


class TestInteriorProduct:
    """Test ι on fiber forms"""

    def test_iota_on_one_form(self, fibers):
        """Test ι_{∂_0} dx^0 = 1"""
        dx0 = FiberForm(FiberSpace(4, 1, 0), {((0,), (), None): 1})
        result = fibers.iota([1, 0, 0, 0], dx0)
        assert result.k == 0
        assert result.vector() == [gq(1)]

    def test_iota_of_zero_form_raises(self, fibers):
        """Test that a 0-form has no interior product"""
        scalar = FiberForm(FiberSpace(4, 0, 0), {((), (), None): 1})
        with pytest.raises(ValidationError, match="interior product of a 0-form"):
            fibers.iota([1, 0, 0, 0], scalar)

    def test_iota_length_mismatch_raises(self, fibers):
        """Test that the vector must live over the same base"""
        dx0 = FiberForm(FiberSpace(4, 1, 0), {((0,), (), None): 1})
        with pytest.raises(ValidationError, match="different bases"):
            fibers.iota([1, 0, 0], dx0)


class TestWMaps:
    """Test W_k certificates"""

    def test_w1_on_scalars_is_injective(self, fibers, bulk_frame):
        """Test W_1^{(0,0)} = e is nonzero"""
        cert = fibers.W_map(bulk_frame, 1, 0, 0)
        assert cert.injective
        assert not cert.surjective
        assert certificate_sound(cert)

    def test_w1_top_v_degree_is_bijective(self, fibers, standard_bulk_frame):
        """Test W_1^{(0,3)} : Ω^{(0,3)} -> Ω^{(1,4)} is an isomorphism"""
        cert = fibers.W_map(standard_bulk_frame, 1, 0, 3)
        assert (cert.source_dim, cert.target_dim) == (4, 4)
        assert cert.bijective

    def test_w4_on_scalars_is_volume(self, fibers, bulk_frame):
        """Test W_4^{(0,0)} is bijective on a nondegenerate frame"""
        assert fibers.W_map(bulk_frame, 4, 0, 0).bijective

    def test_kernel_dimension_consistent(self, fibers, boundary_frame):
        """Test rank plus nullity equals the source dimension"""
        cert = fibers.W_map(boundary_frame, 1, 1, 2)
        assert cert.rank + cert.kernel_dim == cert.source_dim
        assert len(cert.kernel_basis) == cert.kernel_dim

    def test_boundary_w1_12_leaves_six_components(self, fibers, boundary_frame):
        """Test W_1^{∂,(1,2)} is onto Ω^{(2,3)} with a 6-dimensional kernel"""
        cert = fibers.W_map(boundary_frame, 1, 1, 2)
        assert (cert.source_dim, cert.target_dim) == (18, 12)
        assert (cert.rank, cert.kernel_dim) == (12, 6)
        assert cert.surjective

    def test_w_degree_out_of_range(self, fibers, bulk_frame):
        """Test k is limited to 1..4"""
        with pytest.raises(ValidationError, match="must be in"):
            fibers.W_map(bulk_frame, 5, 0, 0)

    def test_w_leaving_fiber_range(self, fibers, boundary_frame):
        """Test that the target fiber must exist"""
        with pytest.raises(ValidationError, match="leaves the fiber range"):
            fibers.W_map(boundary_frame, 1, 3, 0)

    def test_rho_needs_v_degree(self, fibers, bulk_frame):
        """Test ϱ on Ω^{(i,0)} is rejected"""
        with pytest.raises(ValidationError, match="V-degree"):
            fibers.rho_map(bulk_frame, 1, 0)


class TestFiberChecks:
    """Test the report-producing checks"""

    def test_factorial_normalization(self, fibers, bulk_frame):
        """Test W_1∘W_1 = 2W_2 and W_1∘W_2 = 3W_3"""
        report = fibers.check_factorial_normalization(bulk_frame)
        assert [item.check_id for item in report.items] == ["W1W1=2W2", "W1W2=3W3"]
        assert report.passed

    def test_boundary_volume(self, fibers, boundary_frame):
        """Test ε_n e^3/3! does not vanish"""
        assert fibers.check_boundary_volume(boundary_frame).passed

    def test_presymplectic_kernel(self, fibers, standard_boundary_frame):
        """Test that e X_e = 0 and e γ³ X_ψ = 0 force zero"""
        report = fibers.check_presymplectic_kernel(standard_boundary_frame)
        assert [item.check_id for item in report.items] == ["kernel-X_e", "kernel-X_psi"]
        assert report.passed

    def test_presymplectic_kernel_needs_boundary(self, fibers, bulk_frame):
        """Test that the kernel statement is boundary-only"""
        with pytest.raises(ValidationError, match="boundary statement"):
            fibers.check_presymplectic_kernel(bulk_frame)

    def test_unknown_diagram_side(self, fibers):
        """Test that only bulk and boundary diagrams exist"""
        with pytest.raises(ValidationError, match="side must be"):
            fibers.check_diagram("corner", 1, 1)

    def test_diagram_needs_trials(self, fibers):
        """Test that at least one frame is sampled"""
        with pytest.raises(ValidationError, match="trials"):
            fibers.check_diagram("bulk", 0, 1)

    @pytest.mark.slow
    def test_bulk_diagram(self, fibers):
        """Test every bulk W_1 arrow on one random frame"""
        report = fibers.check_diagram("bulk", 1, 1)
        assert len(report.items) == len(BULK_ARROWS)
        assert all(item.check_id.startswith("bulk-W1-") for item in report.items)
        assert report.passed
