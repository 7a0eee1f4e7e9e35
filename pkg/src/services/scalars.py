"""
Exact Scalars

Gaussian-rational coefficients (sympy's QQ_I domain) and a finite
Grassmann algebra used to realize odd spinor components numerically.
Nothing in this module touches floating point.
"""

import random
from fractions import Fraction
from typing import Dict, Iterable, Iterator, Optional, Tuple, Union

from sympy.polys.domains import QQ, QQ_I

from src.services.base_service import ConfigurationError, ValidationError
from src.services.models import Parity

GaussRational = type(QQ_I.one)

Number = Union[int, Fraction, "GaussRational"]

ZERO = QQ_I.zero
ONE = QQ_I.one
I_UNIT = QQ_I(0, 1)


def gq(value: Number, imag: Number = 0) -> GaussRational:
    """
    Coerce to a Gaussian rational.

    Args:
        value: real part (int, Fraction, QQ element) or an existing GaussRational
        imag: imaginary part, ignored when value is already Gaussian

    Raises:
        ValidationError: for floats or unsupported types
    """
    if isinstance(value, GaussRational):
        return value
    if isinstance(value, float) or isinstance(imag, float):
        raise ValidationError("floating point coefficients are not allowed")
    return QQ_I(_qq(value), _qq(imag))


def _qq(value: Number):
    if isinstance(value, Fraction):
        return QQ(value.numerator, value.denominator)
    if isinstance(value, int):
        return QQ(value)
    try:
        return QQ.convert(value)
    except Exception as error:
        raise ValidationError(f"cannot convert {value!r} to a rational") from error


def frac(numerator: int, denominator: int = 1) -> GaussRational:
    """Real Gaussian rational numerator/denominator"""
    return QQ_I(QQ(numerator, denominator), QQ(0))


def conj(value: GaussRational) -> GaussRational:
    return QQ_I(value.x, -value.y)


def is_real(value: GaussRational) -> bool:
    return not value.y


def sign_of(exponent: int) -> int:
    """(-1)**exponent for integer exponents"""
    return -1 if exponent % 2 else 1


def format_rational(q) -> str:
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"


def format_gauss(value: GaussRational) -> str:
    """Exact text form, e.g. 2/3+4/5i, -i, 7"""
    value = gq(value)
    re, im = value.x, value.y
    if not im:
        return format_rational(re)
    if im == 1:
        im_text = "i"
    elif im == -1:
        im_text = "-i"
    else:
        im_text = f"{format_rational(im)}i"
    if not re:
        return im_text
    joiner = "" if im_text.startswith("-") else "+"
    return f"{format_rational(re)}{joiner}{im_text}"


def random_gauss(rng: random.Random, bound: int = 3, complex_part: bool = True) -> GaussRational:
    """Small random Gaussian integer (nonzero not guaranteed)"""
    im = rng.randint(-bound, bound) if complex_part else 0
    return QQ_I(rng.randint(-bound, bound), im)


# ============================================================================
# GRASSMANN ALGEBRA
# ============================================================================

Monomial = Tuple[int, ...]


def merge_sign(left: Monomial, right: Monomial) -> Tuple[int, Optional[Monomial]]:
    """
    Koszul sign of concatenating two sorted generator lists.

    Returns:
        (sign, merged) with merged None when a generator repeats
    """
    if set(left) & set(right):
        return 0, None
    inversions = 0
    for g in left:
        for h in right:
            if h < g:
                inversions += 1
    return sign_of(inversions), tuple(sorted(left + right))


class GrassmannElement:
    """
    Element of the Grassmann algebra on `num_generators` generators
    with Gaussian-rational coefficients.

    Generators are numbered from 1. Monomials are strictly increasing
    tuples; the empty tuple is the unit.
    """

    __slots__ = ("_coeffs", "num_generators")

    def __init__(self, coeffs: Optional[Dict[Monomial, Number]] = None, num_generators: int = 16):
        if num_generators < 1:
            raise ConfigurationError("Grassmann algebra needs at least one generator")
        self.num_generators = num_generators
        clean: Dict[Monomial, GaussRational] = {}
        for mono, c in (coeffs or {}).items():
            key = tuple(mono)
            if list(key) != sorted(set(key)):
                raise ValidationError(f"monomial {key} is not strictly increasing")
            if key and (key[0] < 1 or key[-1] > num_generators):
                raise ValidationError(f"monomial {key} uses an unknown generator")
            value = gq(c)
            if value:
                clean[key] = value
        self._coeffs = clean

    # ------------------------------------------------------------------
    # constructors
    # ------------------------------------------------------------------

    @classmethod
    def scalar(cls, value: Number, num_generators: int = 16) -> "GrassmannElement":
        return cls({(): value}, num_generators)

    @classmethod
    def generator(cls, index: int, num_generators: int = 16) -> "GrassmannElement":
        return cls({(index,): 1}, num_generators)

    @classmethod
    def zero(cls, num_generators: int = 16) -> "GrassmannElement":
        return cls({}, num_generators)

    # ------------------------------------------------------------------
    # inspection
    # ------------------------------------------------------------------

    @property
    def coeffs(self) -> Dict[Monomial, GaussRational]:
        return dict(self._coeffs)

    def items(self) -> Iterator[Tuple[Monomial, GaussRational]]:
        return iter(sorted(self._coeffs.items()))

    def is_zero(self) -> bool:
        return not self._coeffs

    def __bool__(self) -> bool:
        return bool(self._coeffs)

    def body(self) -> GaussRational:
        return self._coeffs.get((), ZERO)

    def parity(self) -> Parity:
        return gr_parity(self)

    # ------------------------------------------------------------------
    # arithmetic
    # ------------------------------------------------------------------

    def _coerce(self, other) -> "GrassmannElement":
        if isinstance(other, GrassmannElement):
            if other.num_generators != self.num_generators:
                raise ConfigurationError(
                    f"mismatched generator counts {self.num_generators} and {other.num_generators}"
                )
            return other
        return GrassmannElement.scalar(other, self.num_generators)

    def __add__(self, other) -> "GrassmannElement":
        other = self._coerce(other)
        out = dict(self._coeffs)
        for mono, c in other._coeffs.items():
            out[mono] = out.get(mono, ZERO) + c
        return GrassmannElement(out, self.num_generators)

    __radd__ = __add__

    def __neg__(self) -> "GrassmannElement":
        return GrassmannElement({m: -c for m, c in self._coeffs.items()}, self.num_generators)

    def __sub__(self, other) -> "GrassmannElement":
        return self + (-self._coerce(other))

    def __rsub__(self, other) -> "GrassmannElement":
        return self._coerce(other) - self

    def __mul__(self, other) -> "GrassmannElement":
        if isinstance(other, GrassmannElement):
            return gr_mul(self, other)
        factor = gq(other)
        return GrassmannElement({m: c * factor for m, c in self._coeffs.items()}, self.num_generators)

    def __rmul__(self, other) -> "GrassmannElement":
        # scalars are even, so left and right scalar multiplication agree
        return self.__mul__(other)

    def conjugate(self) -> "GrassmannElement":
        """Complex conjugation of coefficients; generators are real"""
        return GrassmannElement({m: conj(c) for m, c in self._coeffs.items()}, self.num_generators)

    def __eq__(self, other) -> bool:
        if isinstance(other, GrassmannElement):
            return self.num_generators == other.num_generators and self._coeffs == other._coeffs
        try:
            return self._coeffs == GrassmannElement.scalar(other, self.num_generators)._coeffs
        except ValidationError:
            return NotImplemented

    def __hash__(self) -> int:
        return hash((self.num_generators, tuple(sorted(self._coeffs.items()))))

    def __repr__(self) -> str:
        return f"GrassmannElement({format_grassmann(self)})"


def gr_mul(x: GrassmannElement, y: GrassmannElement) -> GrassmannElement:
    """
    Product in the Grassmann algebra.

    Each merged monomial picks up the Koszul sign of the sorting
    permutation; repeated generators give zero.

    Raises:
        ConfigurationError: if the generator counts differ
    """
    if x.num_generators != y.num_generators:
        raise ConfigurationError(
            f"mismatched generator counts {x.num_generators} and {y.num_generators}"
        )
    out: Dict[Monomial, GaussRational] = {}
    for m1, c1 in x._coeffs.items():
        for m2, c2 in y._coeffs.items():
            sign, merged = merge_sign(m1, m2)
            if not sign:
                continue
            out[merged] = out.get(merged, ZERO) + c1 * c2 * sign
    return GrassmannElement(out, x.num_generators)


def gr_parity(x: GrassmannElement) -> Parity:
    """Even iff every monomial has even length; zero counts as even"""
    bits = {len(mono) % 2 for mono in x._coeffs}
    if not bits or bits == {0}:
        return Parity.EVEN
    if bits == {1}:
        return Parity.ODD
    return Parity.MIXED


def format_grassmann(x: GrassmannElement) -> str:
    if x.is_zero():
        return "0"
    parts = []
    for mono, c in x.items():
        gens = "".join(f"θ{g}" for g in mono)
        coeff = format_gauss(c)
        if not gens:
            parts.append(coeff)
        elif coeff == "1":
            parts.append(gens)
        elif coeff == "-1":
            parts.append(f"-{gens}")
        else:
            parts.append(f"({coeff}){gens}")
    return " + ".join(parts)


def random_grassmann(rng: random.Random, parity: Parity, num_generators: int = 16,
                     terms: int = 3, max_length: int = 3, real: bool = True) -> GrassmannElement:
    """
    Sparse random homogeneous element.

    Args:
        rng: seeded generator
        parity: EVEN or ODD
        terms: number of monomials drawn
        max_length: longest monomial drawn
        real: restrict coefficients to rationals
    """
    if parity is Parity.MIXED:
        raise ValidationError("random elements must be homogeneous")
    lengths = [n for n in range(0, max_length + 1) if n % 2 == parity.bit and n <= num_generators]
    coeffs: Dict[Monomial, GaussRational] = {}
    for _ in range(terms):
        length = rng.choice(lengths)
        mono = tuple(sorted(rng.sample(range(1, num_generators + 1), length)))
        value = random_gauss(rng, 3, complex_part=not real)
        coeffs[mono] = coeffs.get(mono, ZERO) + value
    element = GrassmannElement(coeffs, num_generators)
    if element.is_zero():
        fallback = (1,) if parity is Parity.ODD else ()
        element = GrassmannElement({fallback: 1}, num_generators)
    return element


def random_even(rng: random.Random, num_generators: int = 16, **kwargs) -> GrassmannElement:
    return random_grassmann(rng, Parity.EVEN, num_generators, **kwargs)


def random_odd(rng: random.Random, num_generators: int = 16, **kwargs) -> GrassmannElement:
    return random_grassmann(rng, Parity.ODD, num_generators, **kwargs)


def grassmann_sum(elements: Iterable[GrassmannElement], num_generators: int) -> GrassmannElement:
    total = GrassmannElement.zero(num_generators)
    for element in elements:
        total = total + element
    return total
