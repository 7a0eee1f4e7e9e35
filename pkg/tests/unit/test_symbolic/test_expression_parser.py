"""
Unit Tests for the Expression Engine

Registries, the parser and normalization.
"""

import pytest

from src.services import InputError, ParseError, Parity, TermCeilingError, ValidationError
from src.services.symbolic.calculus import normalize
from src.services.symbolic.expression import Expression
from src.services.symbolic.parser import parse
from src.services.symbolic.registry import FieldRegistry, FieldRegistryEntry, registry_for

pytestmark = pytest.mark.symbolic


class TestFieldRegistry:
    """Test symbol registration and lookup"""

    def test_boundary_and_bulk_dimensions(self, boundary_fields, bulk_fields):
        """Test base dimensions of the two registries"""
        assert boundary_fields.base_dim == 3
        assert bulk_fields.base_dim == 4
        assert "eps" in boundary_fields
        assert "eps" not in bulk_fields

    def test_degrees(self, boundary_fields):
        """Test registered degrees of the coframe and the gravitino"""
        e = boundary_fields.lookup("e")
        psi = boundary_fields.lookup("psi")
        assert (e.form_degree, e.v_degree, e.ghost) == (1, 1, 0)
        assert psi.is_spinor
        assert psi.is_odd

    def test_curvatures_registered(self, boundary_fields):
        """Test that F[w] and F[w0] are symbols"""
        assert boundary_fields.lookup("F[w]").curvature_of == "w"
        assert "F[w0]" in boundary_fields

    def test_unknown_symbol_raises(self, boundary_fields):
        """Test lookup of an unregistered symbol"""
        with pytest.raises(InputError, match="is not registered"):
            boundary_fields.lookup("omega")

    def test_duplicate_registration_raises(self):
        """Test that each symbol is registered once"""
        entry = FieldRegistryEntry("e", 1, 1, 0, Parity.EVEN)
        with pytest.raises(ValidationError, match="registered twice"):
            FieldRegistry("boundary", 3, [entry, entry])

    def test_invalid_entries(self):
        """Test bundle, role and parity validation"""
        with pytest.raises(ValidationError, match="unknown bundle"):
            FieldRegistryEntry("x", 0, 0, 0, Parity.EVEN, bundle="tensor")

        with pytest.raises(ValidationError, match="unknown role"):
            FieldRegistryEntry("x", 0, 0, 0, Parity.EVEN, role="spectator")

        with pytest.raises(ValidationError, match="definite parity"):
            FieldRegistryEntry("x", 0, 0, 0, Parity.MIXED)

    def test_unknown_domain(self):
        """Test that only boundary and bulk registries exist"""
        with pytest.raises(ValidationError, match="unknown domain"):
            registry_for("corner")


class TestParser:
    """Test the expression grammar"""

    def test_parse_collects_like_terms(self, boundary_fields):
        """Test 2e + 3e = 5e"""
        assert parse("2*e + 3*e", boundary_fields) == parse("5*e", boundary_fields)

    def test_parse_cancellation(self, boundary_fields):
        """Test e - e = 0"""
        assert parse("e - e", boundary_fields).is_zero()

    def test_symbols(self, boundary_fields):
        """Test symbol collection through decorations"""
        x = parse("c^e^d[w](e)", boundary_fields, raw=True)
        assert x.symbols() == ["c", "e", "w"]

    def test_text_round_trip(self, boundary_fields):
        """Test that printed text parses back to the same expression"""
        x = parse("2*e - 1/2*w", boundary_fields)
        assert parse(str(x), boundary_fields) == x

    def test_unknown_symbol_offset(self, boundary_fields):
        """Test that the error points at the offending symbol"""
        with pytest.raises(ParseError, match="unknown symbol 'q'") as excinfo:
            parse("e^q", boundary_fields)
        assert excinfo.value.offset == 2

    def test_empty_expression(self, boundary_fields):
        """Test that blank text is rejected"""
        with pytest.raises(ParseError, match="empty expression"):
            parse("   ", boundary_fields)

    def test_trailing_garbage(self, boundary_fields):
        """Test that unbalanced input is rejected"""
        with pytest.raises(ParseError, match="unexpected"):
            parse("e)", boundary_fields)

    def test_missing_factor(self, boundary_fields):
        """Test a dangling operator"""
        with pytest.raises(ParseError):
            parse("e +", boundary_fields)

    def test_bulk_only_symbol_on_boundary(self, boundary_fields, bulk_fields):
        """Test that antifields of the bulk are not boundary symbols"""
        assert not parse("e_dag", bulk_fields).is_zero()
        with pytest.raises(ParseError, match="unknown symbol"):
            parse("e_dag", boundary_fields)


class TestNormalize:
    """Test normalization"""

    def test_idempotent(self, boundary_fields):
        """Test normalize(normalize(x)) = normalize(x)"""
        x = normalize(parse("c^e^d[w](e)", boundary_fields, raw=True), boundary_fields)
        assert normalize(x, boundary_fields) == x

    def test_term_ceiling(self, boundary_fields):
        """Test that growth past the ceiling aborts"""
        x = Expression.symbol("e") + Expression.symbol("w")
        with pytest.raises(TermCeilingError, match="term ceiling exceeded") as excinfo:
            normalize(x, boundary_fields, ceiling=1)
        assert excinfo.value.ceiling == 1

    def test_zero_stays_zero(self, boundary_fields):
        """Test the empty expression"""
        assert normalize(Expression.zero(), boundary_fields).is_zero()

    @pytest.mark.parametrize("text,vanishes", [
        ("bar(psi)^G3^psi", True),
        ("bar(psi)^G1^psi", False),
        ("bar(chi)^G1^chi", False),
        ("bar(chi)^G3^chi", True),
    ])
    def test_chain_with_itself(self, boundary_fields, text, vanishes):
        """Test that Āγ^N A vanishes exactly when it is odd under the flip"""
        assert parse(text, boundary_fields).is_zero() is vanishes
