"""
Unit Tests for the Cylinder Suites

The k‡ reduction, the AKSZ ledger closing up to signs, the ṽ-quadratic
term of the PC pullback and the pass/fail of each suite.
"""

import pytest

from src.services.cylinder import CylinderService
from src.services.cylinder.kdag import TAU_PRINTED, tau_dagger
from src.services.cylinder.ledger import (
    CONSTRAINT_EXPECTED,
    CONSTRAINT_TEXT,
    L_ITEMS,
    TARGET_BULLETS,
    VANISHING_ITEMS,
    Bullet,
    all_items,
    bullet_residual,
    closing_signs,
    gravitino_accounting,
    item_expression,
    reduce_overtop,
)
from src.services.cylinder.maps import phi_r_map
from src.services.cylinder.pullback import QUADRATIC_TEXT, quadratic_term, split_quadratic_term
from src.services.cylinder.split import aksz_registry, reduced_registry
from src.services.cylinder.substitutions import apply_substitution
from src.services.symbolic.calculus import normalize
from src.services.symbolic.parser import parse

pytestmark = pytest.mark.cylinder


@pytest.fixture(scope="module")
def aksz():
    return aksz_registry()


@pytest.fixture(scope="module")
def reduced():
    return reduced_registry()


@pytest.fixture(scope="module")
def cylinder():
    return CylinderService()


@pytest.fixture(scope="module")
def expressions(aksz):
    return {name: reduce_overtop(item_expression(text, aksz), aksz) for name, text in all_items().items()}


def _bullet(bullet_id):
    return next(b for b in TARGET_BULLETS if b.bullet_id == bullet_id)


class TestKdagReduction:
    """Test τ‡ and the transversal contraction it is built with"""

    def test_tau_matches_printed(self, reduced):
        """Test τ‡ = ǩ_n + μ ǎ − ι_z̲ ǩ"""
        assert normalize(tau_dagger() - parse(TAU_PRINTED, reduced), reduced).is_zero()

    def test_transversal_contraction_is_even_derivation(self, reduced):
        """Test that ι_z̲ passes a 1-form without a sign"""
        lhs = parse("i[zt](e^w)", reduced)
        assert normalize(lhs - parse("i[zt](e)^w + e^i[zt](w)", reduced), reduced).is_zero()

    def test_tangential_contraction_is_odd_derivation(self, reduced):
        """Test that ι_z picks up a sign past a 1-form"""
        lhs = parse("i[z](e^w)", reduced)
        assert normalize(lhs - parse("i[z](e)^w - e^i[z](w)", reduced), reduced).is_zero()

    @pytest.mark.slow
    def test_kdag_report_passes(self, cylinder):
        """Test the k‡ suite with a few random frames"""
        report = cylinder.check_kdag_equivalence(3, 1)
        assert report.passed, [item.check_id for item in report.items if not item.passed]


class TestLedgerItems:
    """Test individual AKSZ items"""

    def test_odd_chain_item_vanishes(self, aksz):
        """Test that δσ̄‡ e γ³ δσ‡ is zero"""
        assert item_expression(L_ITEMS["l16"], aksz).is_zero()
        assert VANISHING_ITEMS == {"l16"}

    def test_other_items_survive(self, aksz):
        """Test that no other item collapses to zero"""
        dead = [name for name, text in all_items().items()
                if name not in VANISHING_ITEMS and item_expression(text, aksz).is_zero()]
        assert dead == []

    def test_overtop_contraction_closes_bullet(self, expressions, aksz):
        """Test k12 = h8 once the contraction moves onto σ̄‡ θ‡"""
        assert closing_signs(_bullet("k12=h8"), expressions, aksz) is not None

    def test_unclosable_bullet_reports_residual(self, expressions, aksz):
        """Test that a mispaired bullet keeps a residual under every sign choice"""
        wrong = Bullet("l3=h4", ("l3",), ("h4",))
        assert closing_signs(wrong, expressions, aksz) is None
        assert not bullet_residual(wrong, expressions, aksz).is_zero()

    def test_constraint_pullback(self, aksz):
        """Test Φ_r^* of the ω‡ constraint is e f̲‡"""
        smap = phi_r_map()
        pulled = apply_substitution(parse(CONSTRAINT_TEXT, smap.source), smap)
        assert normalize(pulled - parse(CONSTRAINT_EXPECTED, aksz), aksz).is_zero()

    @pytest.mark.slow
    def test_gravitino_pullback_matches_items(self, expressions, aksz):
        """Test that Φ_r^* of the gravitino part has exactly the L products"""
        accounting = gravitino_accounting(expressions, aksz)
        assert accounting['unprinted'] == []
        assert accounting['uncomputed'] == []

    @pytest.mark.slow
    def test_aksz_report_passes(self, cylinder):
        """Test the full AKSZ ledger suite"""
        report = cylinder.verify_aksz_symplectic()
        assert report.passed, [item.check_id for item in report.items if not item.passed]


class TestQuadraticTerm:
    """Test the ṽ-quadratic term of the PC pullback"""

    def test_marker_follows_transversal_coefficient(self):
        """Test that dt sits right of e_n"""
        assert QUADRATIC_TEXT.startswith("1/2*e_n^dn^")

    def test_term_comes_from_split(self, reduced):
        """Test ½ e_n e [ṽ,ṽ] against the split of ¼ e e [ṽ,ṽ]"""
        assert normalize(split_quadratic_term() - quadratic_term(), reduced).is_zero()

    def test_opposite_sign_is_rejected(self, reduced):
        """Test that dt on the far right gives the other sign"""
        flipped = parse("1/2*e_n^e^br(v,v)^dn", reduced)
        assert not normalize(split_quadratic_term() - flipped, reduced).is_zero()

    @pytest.mark.slow
    def test_pc_pullback_report(self, cylinder):
        """Test the PC pullback suite report"""
        report = cylinder.pc_action_pullback_check(3, 1)
        assert [item.check_id for item in report.items] == [
            "quadratic-degree", "quadratic-in-v", "quadratic-from-split", "quadratic-phi1-fixed",
            "quadratic-nondegenerate",
        ]
        assert report.passed
