"""
Unit Tests for CliffordService

Tests the gamma representation, Majorana spinors and flip relations.
"""

import random

import pytest

from src.services import (
    ConfigurationError,
    InputError,
    Parity,
    UnknownIdentityError,
    ValidationError,
)
from src.services.clifford_service import (
    DIM_V,
    ETA,
    CliffordService,
    MajoranaSpinor,
    FIERZ_KINDS,
    GAMMA_IDENTITIES,
    T_TABLE,
    anticommutator,
    levi_civita,
    mat_eye,
    mat_mul,
    mat_scale,
    permutation_sign,
)
from src.services.scalars import GrassmannElement, frac


class TestCliffordServiceConstruction:
    """Test service setup and the fixed representation"""

    def test_invalid_epsilon_sign(self):
        """Test that the orientation must be ±1"""
        with pytest.raises(ConfigurationError, match="epsilon sign must be"):
            CliffordService(epsilon_sign=2)

    def test_build_gamma_basis_is_stable(self, clifford):
        """Test that the representation is fixed per service"""
        assert clifford.build_gamma_basis() is clifford.basis
        assert clifford.basis.epsilon_sign == 1
        assert CliffordService(epsilon_sign=-1).basis.epsilon_sign == -1

    def test_gamma_zero_squares_to_one(self, clifford):
        """Test (γ^0)^2 = 1 and (γ^k)^2 = -1 for η = diag(-1,1,1,1)"""
        for a in range(DIM_V):
            g = clifford.basis.upper[a]
            assert mat_mul(g, g) == mat_scale(-ETA[a], mat_eye())
            assert anticommutator(g, g) == mat_scale(-2 * ETA[a], mat_eye())

    def test_charge_inverse(self, clifford):
        """Test C C^{-1} = 1"""
        assert mat_mul(clifford.basis.charge, clifford.basis.charge_inverse) == mat_eye()

    def test_t_table(self, clifford):
        """Test t_0..t_4 read off the charge-conjugated gammas"""
        assert clifford.t_table() == T_TABLE + (T_TABLE[0],)
        assert clifford.verify_t_table().passed

    def test_majorana_dimension(self, clifford):
        """Test that Majorana spinors form a real 4-dimensional space"""
        assert clifford.majorana_dimension() == 4


class TestLeviCivita:
    """Test index helpers"""

    def test_permutation_sign(self):
        """Test signs of permutations and repeats"""
        assert permutation_sign((0, 1, 2, 3)) == 1
        assert permutation_sign((1, 0, 2, 3)) == -1
        assert permutation_sign((0, 0, 1, 2)) == 0

    def test_orientation(self):
        """Test ε^{0123} follows the configured sign"""
        assert levi_civita((0, 1, 2, 3)) == 1
        assert levi_civita((0, 1, 2, 3), epsilon_sign=-1) == -1
        assert levi_civita((1, 0, 2, 3)) == -1


class TestGammaIdentities:
    """Test registered identity checks"""

    @pytest.mark.parametrize("identity_id", [
        "clifford-relation",
        "charge-conjugation",
        "gamma5-anticommutes",
        "gamma-contract-1",
        "gamma-contract-2",
    ])
    def test_identity_holds(self, clifford, identity_id):
        """Test standard identities over every index combination"""
        report = clifford.verify_gamma_identity(identity_id)
        assert report.passed
        assert report.items[0].check_id == identity_id
        assert report.items[0].details['cases'] > 0

    def test_all_identities_pass(self, clifford):
        """Test every registered identity, the v_a contractions included"""
        report = clifford.verify_all_gamma_identities()
        assert [item.check_id for item in report.items] == list(GAMMA_IDENTITIES)
        assert report.passed, [item.check_id for item in report.failures()]

    def test_identity_ids_resolve_to_checks(self, clifford):
        """Test that mixed-case ids such as v-gamma-N find their checker"""
        report = clifford.verify_gamma_identity("v-gamma-N")
        assert report.items[0].details['cases'] == 12
        assert report.passed

    def test_unknown_identity_raises(self, clifford):
        """Test that only registered identities can be checked"""
        with pytest.raises(UnknownIdentityError, match="unknown identity"):
            clifford.verify_gamma_identity("gamma-contract-9")

    def test_fierz_completeness(self, clifford):
        """Test the cyclic symmetrization of (γ^a)(γ_a) vanishes"""
        report = clifford.verify_fierz("completeness")
        assert report.passed
        assert report.items[0].details['cases'] == 256

    def test_unknown_fierz_raises(self, clifford):
        """Test that only registered Fierz identities can be checked"""
        with pytest.raises(UnknownIdentityError, match="unknown Fierz identity"):
            clifford.verify_fierz("fierz9")

    def test_lemma_fierz_parity_guard(self, clifford, rng):
        """Test that the lemma needs an even χ and an odd ψ"""
        with pytest.raises(InputError, match="requires"):
            clifford.verify_fierz("lemma-fierz", rng, 1, parities={"chi": Parity.ODD})


class TestMajoranaSpinors:
    """Test sampling and validation of Majorana spinors"""

    def test_random_majorana_satisfies_condition(self, clifford, rng):
        """Test that sampled spinors obey ψ^* = Bψ"""
        for parity in (Parity.EVEN, Parity.ODD):
            for _ in range(5):
                assert clifford.is_majorana(clifford.random_majorana(rng, parity))

    def test_projection_is_identity_on_majorana(self, clifford, rng):
        """Test that the Majorana projector fixes Majorana spinors"""
        psi = clifford.random_majorana(rng, Parity.ODD)
        assert clifford.majorana_project(psi) == psi

    def test_require_majorana_raises(self, clifford):
        """Test that a non-Majorana spinor is rejected"""
        theta = GrassmannElement.generator(1)
        zero = GrassmannElement.zero()
        psi = MajoranaSpinor((theta, zero, zero, zero), Parity.ODD)
        assert not clifford.is_majorana(psi)

        with pytest.raises(InputError, match="Majorana condition violated"):
            clifford.require_majorana(psi)

    def test_adding_mixed_parities_raises(self, clifford, rng):
        """Test that spinors of different parity do not add"""
        with pytest.raises(InputError, match="different parity"):
            clifford.random_majorana(rng, Parity.ODD) + clifford.random_majorana(rng, Parity.EVEN)


class TestFlipRelations:
    """Test χ̄γ^Nψ = ± ψ̄γ^Nχ"""

    def test_flip_sign_values(self):
        """Test signs for anticommuting Majorana spinors"""
        odd, even = Parity.ODD, Parity.EVEN
        assert CliffordService.flip_sign(0, odd, odd) == 1
        assert CliffordService.flip_sign(1, odd, odd) == -1
        assert CliffordService.flip_sign(2, odd, odd) == -1
        assert CliffordService.flip_sign(3, odd, odd) == 1
        assert CliffordService.flip_sign(0, even, even) == -1
        assert CliffordService.flip_sign(4, odd, odd) == CliffordService.flip_sign(0, odd, odd)

    @pytest.mark.parametrize("n", [0, 1, 2, 3])
    def test_flip_on_random_spinors(self, clifford, n):
        """Test the flip relation on sampled odd spinors"""
        rng = random.Random(11 + n)
        psi = clifford.random_majorana(rng, Parity.ODD)
        chi = clifford.random_majorana(rng, Parity.ODD)
        assert clifford.verify_flip(n, psi, chi).passed

    def test_flip_degree_out_of_range(self, clifford, rng):
        """Test that N is limited to 0..4"""
        psi = clifford.random_majorana(rng, Parity.ODD)
        with pytest.raises(ValidationError, match="must be in"):
            clifford.verify_flip(5, psi, psi)

    def test_flip_rejects_non_majorana(self, clifford, rng):
        """Test the Majorana precondition of verify_flip"""
        theta = GrassmannElement.generator(1)
        zero = GrassmannElement.zero()
        bad = MajoranaSpinor((theta, zero, zero, zero), Parity.ODD)
        with pytest.raises(InputError):
            clifford.verify_flip(1, bad, clifford.random_majorana(rng, Parity.ODD))

    @pytest.mark.slow
    def test_flips_random_report(self, clifford):
        """Test the randomized flip report shape"""
        report = clifford.verify_flips_random(random.Random(3), 2)
        assert [item.check_id for item in report.items] == ["flip-0", "flip-1", "flip-2", "flip-3"]
        assert report.passed


class TestFierzRearrangements:
    """Test the quartic Fierz identities on sampled Majorana spinors"""

    @pytest.mark.slow
    @pytest.mark.parametrize("kind", ["fierz1", "fierz2", "lemma-fierz", "action-of-omega"])
    def test_fierz_kind_holds(self, clifford, kind):
        """Test each randomized Fierz identity over a few mixed-parity samples"""
        report = clifford.verify_fierz(kind, random.Random(5), 3)
        assert report.items[0].check_id == kind
        assert report.passed, report.items[0].witness

    @pytest.mark.slow
    def test_all_kinds_pass_at_default_seed(self, clifford):
        """Test the whole Fierz block the way the appendixB suite runs it"""
        rng = random.Random(1)
        for kind in FIERZ_KINDS:
            assert clifford.verify_fierz(kind, rng, 2).passed, kind

    def test_lemma_rows_follow_chi_gamma_chi(self, clifford, rng):
        """Test that a commuting χ with χ̄γχ ≠ 0 leaves the rows nonzero but related"""
        n = clifford.num_generators
        reals = [GrassmannElement.scalar(c, n) for c in (1, 2, -1, 3)]
        chi = clifford.majorana_from_real(reals, Parity.EVEN)
        lam = clifford.random_majorana(rng, Parity.ODD)
        psi = clifford.random_majorana(rng, Parity.ODD)
        row1, row2, row3 = clifford.lemma_rows(lam, chi, psi)
        assert not row2.is_zero()
        assert row1 == row3.scaled(-1)
        assert row1 == row2.scaled(frac(-1, 2))

    def test_lemma_rows_vanish_with_nilpotent_chi(self, clifford, rng):
        """Test that χ = θ ξ, with one odd generator θ, kills every row"""
        theta = GrassmannElement.generator(16, clifford.num_generators)
        xi = clifford.random_majorana(rng, Parity.ODD)
        chi = MajoranaSpinor(tuple(theta * c for c in xi.components), Parity.EVEN)
        lam = clifford.random_majorana(rng, Parity.ODD)
        psi = clifford.random_majorana(rng, Parity.ODD)
        assert all(row.is_zero() for row in clifford.lemma_rows(lam, chi, psi))
