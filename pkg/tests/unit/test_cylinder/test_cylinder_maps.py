"""
Unit Tests for the Cylinder Constructions

Splitting along the collar, substitution maps, transgression guards and
the AKSZ ledger bookkeeping.
"""

import pytest

from src.services import RuleTableGapError, ValidationError
from src.services.cylinder import CylinderService, SubstitutionMap, apply_substitution
from src.services.cylinder.ledger import (
    EXPANSION_BULLETS,
    TARGET_BULLETS,
    TRANSGRESSION_INPUT,
    ZERO_BULLETS,
    Bullet,
    coverage,
)
from src.services.cylinder.maps import PHI1_RULES, phi1_map, superfield_map
from src.services.cylinder.phi1 import HEDGEHOG_TEXT, expected_pc_shift, pc_shift
from src.services.cylinder.pullback import lie_bracket
from src.services.cylinder.split import (
    MARKER,
    recombine,
    reduced_registry,
    split_cylinder,
    tangential_part,
    transversal_part,
)
from src.services.cylinder.substitutions import type_errors
from src.services.fiber_service import FiberForm, FiberSpace
from src.services.symbolic.calculus import normalize
from src.services.symbolic.expression import Expression
from src.services.symbolic.parser import parse

pytestmark = pytest.mark.cylinder


@pytest.fixture(scope="module")
def reduced():
    return reduced_registry()


@pytest.fixture(scope="module")
def cylinder():
    return CylinderService()


class TestCylinderSplit:
    """Test φ = φ̃ + φ̃_n dx^n"""

    def test_marker_squares_to_zero(self, reduced):
        """Test dx^n ∧ dx^n = 0"""
        assert parse(f"{MARKER}^{MARKER}", reduced).is_zero()

    def test_split_coframe(self, bulk_fields, reduced):
        """Test e = ẽ + e_n dx^n"""
        split = split_cylinder(parse("e", bulk_fields), expand_normal_frame=False)
        assert tangential_part(split, reduced) == parse("e", reduced)
        assert transversal_part(split, reduced) == parse("e_n", reduced)

    def test_recombine(self, bulk_fields, reduced):
        """Test that the two parts rebuild the split expression"""
        split = split_cylinder(parse("e", bulk_fields), expand_normal_frame=False)
        rebuilt = recombine(tangential_part(split, reduced), transversal_part(split, reduced), reduced)
        assert rebuilt == split

    def test_ghost_has_no_transversal_part(self, bulk_fields, reduced):
        """Test that the Lorentz ghost is purely tangential"""
        split = split_cylinder(parse("c", bulk_fields))
        assert transversal_part(split, reduced).is_zero()

    @pytest.mark.parametrize("symbol", ["xi", "F[w]"])
    def test_unsplittable_symbols(self, bulk_fields, symbol):
        """Test that vector fields and curvatures are not split pointwise"""
        with pytest.raises(ValidationError, match="no pointwise cylinder split"):
            split_cylinder(parse(symbol, bulk_fields))


class TestSubstitutionMaps:
    """Test simultaneous substitution"""

    def test_fixed_symbols_are_identity(self, bulk_fields):
        """Test a map that fixes every symbol it sees"""
        smap = SubstitutionMap("id", bulk_fields, bulk_fields, {}, frozenset({"e", "w"}))
        x = parse("e^w", bulk_fields)
        assert apply_substitution(x, smap) == x

    def test_scaling_rule(self, bulk_fields):
        """Test e ↦ 2e on a product"""
        smap = SubstitutionMap.from_text("double", bulk_fields, bulk_fields, {"e": "2*e"}, ["w"])
        assert apply_substitution(parse("e^w", bulk_fields), smap) == parse("2*e^w", bulk_fields)

    def test_gap_raises(self, bulk_fields):
        """Test that an uncovered symbol is a rule-table gap"""
        smap = SubstitutionMap("partial", bulk_fields, bulk_fields, {}, frozenset({"e"}))
        with pytest.raises(RuleTableGapError, match="has no rule for 'c'"):
            apply_substitution(parse("e^c", bulk_fields), smap)

    def test_rule_for_unknown_source_symbol(self, bulk_fields):
        """Test that rules must name source symbols"""
        with pytest.raises(ValidationError, match="unknown source symbol"):
            SubstitutionMap.from_text("bad", bulk_fields, bulk_fields, {"eps": "e"})

    def test_service_applies_with_ceiling(self, bulk_fields, cylinder):
        """Test the facade agrees with the module function"""
        smap = SubstitutionMap.from_text("double", bulk_fields, bulk_fields, {"e": "2*e"}, ["w"])
        x = parse("e^w", bulk_fields)
        assert cylinder.apply_substitution(smap, x) == apply_substitution(x, smap)


class TestPhi1:
    """Test the antifield shift φ1"""

    def test_rules_preserve_degrees(self):
        """Test that every rule term has the degrees of its symbol"""
        assert type_errors(phi1_map()) == []

    def test_only_listed_symbols_move(self):
        """Test that φ1 fixes every other reduced symbol"""
        smap = phi1_map()
        assert set(smap.rules) == set(PHI1_RULES)
        assert not set(smap.rules) & smap.fixed

    def test_pc_shift_closed_form(self, reduced):
        """Test φ1^*ϖ_PC − ϖ_PC against its closed form"""
        assert normalize(pc_shift() - expected_pc_shift(reduced), reduced).is_zero()

    def test_pc_shift_catches_flipped_rule(self, reduced):
        """Test that a sign flip in one rule changes the shift"""
        rules = {**PHI1_RULES, "w_n": "w_n - i[z](v)"}
        fixed = [name for name in reduced.names() if name not in rules]
        flipped = SubstitutionMap.from_text("phi1", reduced, reduced, rules, fixed)
        assert not normalize(pc_shift(flipped) - expected_pc_shift(reduced), reduced).is_zero()

    def test_hedgehog_fixed(self, reduced):
        """Test that φ1 fixes the ṽ kinetic term"""
        x = parse(HEDGEHOG_TEXT, reduced)
        assert normalize(apply_substitution(x, phi1_map()) - x, reduced).is_zero()

    def test_zero_maps_to_zero(self):
        """Test linearity at the origin"""
        assert apply_substitution(Expression.zero(), phi1_map()).is_zero()

    @pytest.mark.slow
    def test_phi1_report(self, cylinder):
        """Test the φ1 suite report"""
        report = cylinder.verify_phi1_symplectic()
        assert [item.check_id for item in report.items] == [
            "phi1-types", "phi1-gravitino", "phi1-zero", "phi1-fixed", "phi1-hedgehog",
            "phi1-pc-shift", "phi1-target",
        ]
        assert report.passed


class TestTransgressionGuards:
    """Test argument validation of transgression"""

    def test_degree_out_of_range(self, cylinder):
        """Test the δ-degree bound"""
        with pytest.raises(ValidationError, match="out_degree must be in"):
            cylinder.transgress(Expression.zero(), 3)

    def test_inhomogeneous_degree(self, cylinder):
        """Test that a δ-degree 2 form is not transgressed to degree 1"""
        x = parse(TRANSGRESSION_INPUT, superfield_map().source)
        with pytest.raises(ValidationError, match="transgression to δ-degree 1"):
            cylinder.transgress(x, 1)


class TestLedgerBookkeeping:
    """Test bullet identifiers and coverage"""

    def test_bullet_ids(self):
        """Test the id and anchor of a target bullet"""
        bullet = TARGET_BULLETS[0]
        assert isinstance(bullet, Bullet)
        assert bullet.bullet_id == "k1+l1=h1"
        assert bullet.anchor == "App. D, k1 + l1 = h1"

    def test_zero_bullet_ids(self):
        """Test that vanishing bullets end in =0"""
        assert all(b.bullet_id.endswith("=0") for b in ZERO_BULLETS)
        assert all(not b.targets for b in ZERO_BULLETS)

    def test_coverage(self):
        """Test that every item and target is used exactly once"""
        gaps = coverage(TARGET_BULLETS + ZERO_BULLETS, EXPANSION_BULLETS)
        assert gaps == {
            'reused_items': [], 'unused_items': [], 'repeated_targets': [], 'unmatched_targets': [],
        }

    def test_coverage_reports_reuse(self):
        """Test reuse detection when a bullet repeats an item and a target"""
        gaps = coverage(TARGET_BULLETS + ZERO_BULLETS + [Bullet("k7+l8=h4", ("k7", "l8"), ("h4",))])
        assert gaps['repeated_targets'] == ["h4"]
        assert {"k7", "l8"} <= set(gaps['reused_items'])
        assert "l40" in gaps['unused_items']


class TestPullbackHelpers:
    """Test fiber helpers of the PC pullback"""

    def test_lie_bracket_needs_two_form_in_v(self):
        """Test that only Λ²V-valued forms act"""
        a = FiberForm(FiberSpace(3, 0, 1), {((), (0,), None): 1})
        x = FiberForm(FiberSpace(3, 1, 1), {((0,), (1,), None): 1})
        with pytest.raises(ValidationError, match="Λ²V-valued"):
            lie_bracket(a, x)
