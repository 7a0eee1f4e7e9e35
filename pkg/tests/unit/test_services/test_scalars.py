"""
Unit Tests for Exact Scalars

Gaussian rationals and the Grassmann algebra used for odd components.
"""

import random
from fractions import Fraction

import pytest

from src.services import ConfigurationError, Parity, ValidationError
from src.services.scalars import (
    GrassmannElement,
    conj,
    format_gauss,
    format_grassmann,
    frac,
    gq,
    gr_mul,
    is_real,
    merge_sign,
    random_even,
    random_grassmann,
    random_odd,
    sign_of,
)


def theta(i, n=16):
    return GrassmannElement.generator(i, n)


class TestGaussianRationals:
    """Test coercion and formatting of exact coefficients"""

    def test_coerce_int_and_fraction(self):
        """Test that ints and Fractions become Gaussian rationals"""
        assert gq(3) == frac(3)
        assert gq(Fraction(2, 3)) == frac(2, 3)

    def test_float_rejected(self):
        """Test that floats never enter the kernel"""
        with pytest.raises(ValidationError, match="floating point"):
            gq(0.5)

        with pytest.raises(ValidationError, match="floating point"):
            gq(1, 0.25)

    def test_conjugate_and_reality(self):
        """Test complex conjugation"""
        z = gq(1, 2)
        assert conj(z) == gq(1, -2)
        assert not is_real(z)
        assert is_real(z * conj(z))

    def test_format(self):
        """Test exact text forms"""
        assert format_gauss(gq(Fraction(2, 3), Fraction(4, 5))) == "2/3+4/5i"
        assert format_gauss(gq(0, -1)) == "-i"
        assert format_gauss(gq(0, 1)) == "i"
        assert format_gauss(gq(7)) == "7"
        assert format_gauss(gq(1, -3)) == "1-3i"

    def test_sign_of(self):
        """Test (-1)^n helper"""
        assert sign_of(0) == 1
        assert sign_of(3) == -1
        assert sign_of(-2) == 1


class TestGrassmannConstruction:
    """Test validation on GrassmannElement construction"""

    def test_non_increasing_monomial_raises(self):
        """Test that monomials must be strictly increasing"""
        with pytest.raises(ValidationError, match="not strictly increasing"):
            GrassmannElement({(2, 1): 1})

        with pytest.raises(ValidationError, match="not strictly increasing"):
            GrassmannElement({(1, 1): 1})

    def test_unknown_generator_raises(self):
        """Test that generators outside 1..n are rejected"""
        with pytest.raises(ValidationError, match="unknown generator"):
            GrassmannElement({(5,): 1}, num_generators=4)

        with pytest.raises(ValidationError, match="unknown generator"):
            GrassmannElement({(0,): 1}, num_generators=4)

    def test_needs_a_generator(self):
        """Test that an empty algebra is a configuration error"""
        with pytest.raises(ConfigurationError):
            GrassmannElement({}, num_generators=0)

    def test_zero_coefficients_dropped(self):
        """Test that zero terms are not stored"""
        x = GrassmannElement({(1,): 0, (2,): 3})
        assert list(x.coeffs) == [(2,)]
        assert GrassmannElement.zero().is_zero()


class TestGrassmannArithmetic:
    """Test the graded-commutative product"""

    def test_generators_anticommute(self):
        """Test θ1θ2 = -θ2θ1"""
        assert theta(1) * theta(2) == -(theta(2) * theta(1))

    def test_generator_squares_to_zero(self):
        """Test θ1θ1 = 0"""
        assert (theta(1) * theta(1)).is_zero()

    def test_merge_sign(self):
        """Test Koszul signs of merged monomials"""
        assert merge_sign((1, 3), (2,)) == (-1, (1, 2, 3))
        assert merge_sign((1,), (2, 3)) == (1, (1, 2, 3))
        assert merge_sign((1, 2), (2,)) == (0, None)

    def test_scalar_multiplication(self):
        """Test multiplication by a Gaussian rational"""
        x = theta(1) * gq(0, 1)
        assert x.coeffs == {(1,): gq(0, 1)}
        assert 2 * theta(1) == theta(1) + theta(1)

    def test_mismatched_generator_counts(self):
        """Test that elements of different algebras do not mix"""
        with pytest.raises(ConfigurationError, match="mismatched generator counts"):
            theta(1, 4) + theta(1, 8)

        with pytest.raises(ConfigurationError, match="mismatched generator counts"):
            gr_mul(theta(1, 4), theta(1, 8))

    def test_associativity_on_random_elements(self, rng):
        """Test (xy)z = x(yz)"""
        for _ in range(10):
            x, y, z = (random_grassmann(rng, Parity.ODD if rng.random() < 0.5 else Parity.EVEN, real=False)
                       for _ in range(3))
            assert (x * y) * z == x * (y * z)

    def test_graded_commutativity(self, rng):
        """Test xy = (-1)^{|x||y|} yx for homogeneous x, y"""
        for _ in range(10):
            a, b = random_odd(rng), random_odd(rng)
            e = random_even(rng)
            assert a * b == -(b * a)
            assert a * e == e * a

    def test_conjugate_keeps_generators(self):
        """Test that conjugation acts on coefficients only"""
        x = GrassmannElement({(1, 2): gq(1, 1)})
        assert x.conjugate() == GrassmannElement({(1, 2): gq(1, -1)})


class TestGrassmannParity:
    """Test parity detection"""

    def test_parity(self):
        """Test even, odd and mixed elements"""
        assert theta(1).parity() is Parity.ODD
        assert (theta(1) * theta(2)).parity() is Parity.EVEN
        assert (theta(1) + 1).parity() is Parity.MIXED

    def test_zero_is_even(self):
        """Test that zero counts as even"""
        assert GrassmannElement.zero().parity() is Parity.EVEN

    def test_random_elements_are_homogeneous(self):
        """Test random_odd and random_even parities"""
        rng = random.Random(5)
        for _ in range(20):
            assert random_odd(rng).parity() is Parity.ODD
            assert random_even(rng).parity() is Parity.EVEN

    def test_random_mixed_raises(self, rng):
        """Test that MIXED is not a valid parity to sample"""
        with pytest.raises(ValidationError, match="homogeneous"):
            random_grassmann(rng, Parity.MIXED)


class TestGrassmannFormatting:
    """Test text rendering"""

    def test_format(self):
        """Test monomial and coefficient rendering"""
        assert format_grassmann(theta(1) * theta(2)) == "θ1θ2"
        assert format_grassmann(theta(2) * theta(1)) == "-θ1θ2"
        assert format_grassmann(theta(1) * 2) == "(2)θ1"
        assert format_grassmann(GrassmannElement.zero()) == "0"
