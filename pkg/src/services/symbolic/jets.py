"""
Jets

Truncated Taylor series around the origin of R^n whose coefficients live
in a Grassmann algebra over QQ_I, extended by a small number of formal
variables.

A term is keyed by (formal monomial, x-exponents, Grassmann monomial)
and stands for  f · x^α · θ^I  in that order. Formal variables are
(name, component, derivative exponents, odd) and represent the jet
coordinates of an arbitrary field; total derivatives act on the
x-exponents and raise the derivative index of formal variables.

Products keep only formal monomials up to `max_formal` factors and x
degree up to `order`, which is all the linear and bilinear extractions
below ever look at.
"""

import itertools
import random
from dataclasses import dataclass, field
from typing import Callable, Dict, Iterable, List, Optional, Sequence, Set, Tuple

from src.services.base_service import SingularSystemError, TermCeilingError, ValidationError
from src.services.exact_linalg import inverse
from src.services.scalars import ZERO, GaussRational, frac, gq, merge_sign

FormalVar = Tuple[str, tuple, Tuple[int, ...], int]
FormalMono = Tuple[FormalVar, ...]
XMono = Tuple[int, ...]
GMono = Tuple[int, ...]
JetKey = Tuple[FormalMono, XMono, GMono]


@dataclass
class JetContext:
    """Shared truncation data of all jets in one computation"""
    dim: int
    order: int
    max_formal: int = 3
    num_generators: int = 16
    term_ceiling: int = 10 ** 6
    _monomials: Optional[List[XMono]] = field(default=None, repr=False)

    def __post_init__(self):
        if self.dim < 1 or self.order < 0:
            raise ValidationError("jets need dim >= 1 and order >= 0")

    @property
    def origin(self) -> XMono:
        return (0,) * self.dim

    def monomials(self) -> List[XMono]:
        """All exponent tuples of total degree <= order"""
        if self._monomials is None:
            self._monomials = [
                x for x in itertools.product(range(self.order + 1), repeat=self.dim) if sum(x) <= self.order
            ]
            self._monomials.sort(key=lambda x: (sum(x), x))
        return self._monomials


def _odd_count(mono: FormalMono) -> int:
    return sum(var[3] for var in mono)


def sort_formal(seq: Sequence[FormalVar]) -> Tuple[int, FormalMono]:
    """Sorted monomial and the sign of odd transpositions; sign 0 for a repeated odd variable"""
    items = list(seq)
    sign = 1
    for i in range(1, len(items)):
        j = i
        while j > 0 and items[j - 1] > items[j]:
            if items[j - 1][3] and items[j][3]:
                sign = -sign
            items[j - 1], items[j] = items[j], items[j - 1]
            j -= 1
    for a, b in zip(items, items[1:]):
        if a == b and a[3]:
            return 0, ()
    return sign, tuple(items)


def _merge_formal(left: FormalMono, right: FormalMono) -> Tuple[int, FormalMono]:
    inversions = 0
    for a in left:
        if not a[3]:
            continue
        for b in right:
            if b[3]:
                if a == b:
                    return 0, ()
                if b < a:
                    inversions += 1
    return (-1 if inversions % 2 else 1), tuple(sorted(left + right))


class Jet:
    """Element of the truncated jet algebra"""

    __slots__ = ("ctx", "terms")

    def __init__(self, ctx: JetContext, terms: Optional[Dict[JetKey, GaussRational]] = None):
        self.ctx = ctx
        self.terms: Dict[JetKey, GaussRational] = {k: v for k, v in (terms or {}).items() if v}

    # ------------------------------------------------------------------
    # constructors
    # ------------------------------------------------------------------

    @classmethod
    def zero(cls, ctx: JetContext) -> "Jet":
        return cls(ctx)

    @classmethod
    def constant(cls, ctx: JetContext, value) -> "Jet":
        return cls(ctx, {((), ctx.origin, ()): gq(value)})

    @classmethod
    def formal(cls, ctx: JetContext, name: str, component: tuple, odd: bool) -> "Jet":
        var = (name, tuple(component), ctx.origin, int(odd))
        return cls(ctx, {((var,), ctx.origin, ()): gq(1)})

    # ------------------------------------------------------------------
    # inspection
    # ------------------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __len__(self) -> int:
        return len(self.terms)

    def formal_vars(self, name: Optional[str] = None) -> Set[FormalVar]:
        return {var for (f, _, _) in self.terms for var in f if name is None or var[0] == name}

    def is_numeric(self) -> bool:
        return all(not f for (f, _, _) in self.terms)

    def is_plain_series(self) -> bool:
        """No formal variables and no Grassmann generators"""
        return all(not f and not g for (f, _, g) in self.terms)

    def constant_value(self) -> GaussRational:
        return self.terms.get(((), self.ctx.origin, ()), ZERO)

    # ------------------------------------------------------------------
    # arithmetic
    # ------------------------------------------------------------------

    def __add__(self, other: "Jet") -> "Jet":
        out = dict(self.terms)
        for key, value in other.terms.items():
            out[key] = out.get(key, ZERO) + value
        return Jet(self.ctx, out)

    def __sub__(self, other: "Jet") -> "Jet":
        out = dict(self.terms)
        for key, value in other.terms.items():
            out[key] = out.get(key, ZERO) - value
        return Jet(self.ctx, out)

    def __neg__(self) -> "Jet":
        return Jet(self.ctx, {k: -v for k, v in self.terms.items()})

    def scaled(self, c) -> "Jet":
        c = gq(c)
        if not c:
            return Jet(self.ctx)
        return Jet(self.ctx, {k: v * c for k, v in self.terms.items()})

    def __mul__(self, other) -> "Jet":
        if not isinstance(other, Jet):
            return self.scaled(other)
        ctx = self.ctx
        order, max_formal = ctx.order, ctx.max_formal
        # right factors by x degree
        buckets: List[List[tuple]] = [[] for _ in range(order + 1)]
        for (f, x, g), c in other.terms.items():
            if sum(x) > order:
                continue
            buckets[sum(x)].append((f, x, g, c, _odd_count(f) & 1, len(f)))
        out: Dict[JetKey, GaussRational] = {}
        for (f1, x1, g1), c1 in self.terms.items():
            d1, n1, p1 = sum(x1), len(f1), len(g1) & 1
            room = max_formal - n1
            if d1 > order or room < 0:
                continue
            for bucket in buckets[:order - d1 + 1]:
                for f2, x2, g2, c2, o2, n2 in bucket:
                    if n2 > room:
                        continue
                    sign = -1 if (p1 and o2) else 1
                    if g1 and g2:
                        s, g = merge_sign(g1, g2)
                        if not s:
                            continue
                        sign *= s
                    else:
                        g = g1 or g2
                    if f1 and f2:
                        s, f = _merge_formal(f1, f2)
                        if not s:
                            continue
                        sign *= s
                    else:
                        f = f1 or f2
                    key = (f, tuple(a + b for a, b in zip(x1, x2)), g)
                    value = c1 * c2
                    out[key] = out.get(key, ZERO) + (value if sign == 1 else -value)
        if len(out) > ctx.term_ceiling:
            raise TermCeilingError(len(out), ctx.term_ceiling, "in a jet product")
        return Jet(ctx, out)

    def twist(self) -> "Jet":
        """(-1)^{parity} termwise"""
        return Jet(self.ctx, {
            k: (-v if (_odd_count(k[0]) + len(k[2])) & 1 else v) for k, v in self.terms.items()
        })

    def twisted(self, times: int) -> "Jet":
        return self.twist() if times % 2 else self

    # ------------------------------------------------------------------
    # calculus
    # ------------------------------------------------------------------

    def derivative(self, mu: int) -> "Jet":
        """Total derivative ∂_μ"""
        out: Dict[JetKey, GaussRational] = {}
        for (f, x, g), c in self.terms.items():
            if x[mu]:
                key = (f, x[:mu] + (x[mu] - 1,) + x[mu + 1:], g)
                out[key] = out.get(key, ZERO) + c * x[mu]
            for i, (name, comp, J, odd) in enumerate(f):
                raised = (name, comp, J[:mu] + (J[mu] + 1,) + J[mu + 1:], odd)
                s, mono = sort_formal(f[:i] + (raised,) + f[i + 1:])
                if s:
                    key = (mono, x, g)
                    out[key] = out.get(key, ZERO) + (c if s == 1 else -c)
        return Jet(self.ctx, out)

    def derivative_multi(self, exponents: Sequence[int]) -> "Jet":
        result = self
        for mu, n in enumerate(exponents):
            for _ in range(n):
                result = result.derivative(mu)
        return result

    def at_origin(self) -> "Jet":
        origin = self.ctx.origin
        return Jet(self.ctx, {k: v for k, v in self.terms.items() if k[1] == origin})

    def without_constant(self) -> "Jet":
        origin = self.ctx.origin
        return Jet(self.ctx, {k: v for k, v in self.terms.items() if k[1] != origin or k[0] or k[2]})

    # ------------------------------------------------------------------
    # formal variables
    # ------------------------------------------------------------------

    def left_derivative(self, var: FormalVar) -> "Jet":
        """∂/∂var acting from the left"""
        out: Dict[JetKey, GaussRational] = {}
        for (f, x, g), c in self.terms.items():
            if var not in f:
                continue
            i = f.index(var)
            multiplicity = f.count(var)
            sign = -1 if (var[3] and _odd_count(f[:i]) % 2) else 1
            rest = f[:i] + f[i + 1:]
            key = (rest, x, g)
            out[key] = out.get(key, ZERO) + c * (sign * multiplicity)
        return Jet(self.ctx, out)

    def numeric_part(self, names: Optional[Iterable[str]] = None) -> "Jet":
        """Drop every term containing a formal variable (of the given names)"""
        names = set(names) if names is not None else None
        return Jet(self.ctx, {
            k: v for k, v in self.terms.items()
            if not any(names is None or var[0] in names for var in k[0])
        })

    def degree_in(self, name: str, degree: int) -> "Jet":
        """Terms with exactly `degree` formal factors of the given name"""
        return Jet(self.ctx, {
            k: v for k, v in self.terms.items() if sum(1 for var in k[0] if var[0] == name) == degree
        })

    def substitute(self, name: str, values: Dict[tuple, "Jet"]) -> "Jet":
        """
        Replace the formal field `name` (which must enter linearly) by
        jets, component by component; derivative indices become total
        derivatives of the substituted value.

        Raises:
            ValidationError: if a component has no value or enters nonlinearly
        """
        total = self.degree_in(name, 0)
        if any(sum(1 for v in f if v[0] == name) > 1 for (f, _, _) in self.terms):
            raise ValidationError(f"formal field '{name}' enters nonlinearly")
        cache: Dict[Tuple[tuple, Tuple[int, ...]], Jet] = {}
        for var in sorted(self.formal_vars(name)):
            _, comp, J, _ = var
            if comp not in values:
                raise ValidationError(f"no value for component {comp} of '{name}'")
            if (comp, J) not in cache:
                cache[(comp, J)] = values[comp].derivative_multi(J)
            total = total + cache[(comp, J)] * self.left_derivative(var)
        return total

    def __repr__(self) -> str:
        return f"Jet({len(self.terms)} terms)"


# ============================================================================
# EULER OPERATOR
# ============================================================================

def euler(density: Jet, name: str, component: tuple) -> Jet:
    """
    E(density) = Σ_J (-∂)^J ∂density/∂u_J for the formal field `name`,
    one component at a time. The density must be linear in that field.
    """
    total = Jet.zero(density.ctx)
    for var in density.formal_vars(name):
        if var[1] != tuple(component):
            continue
        coefficient = density.left_derivative(var).derivative_multi(var[2])
        if sum(var[2]) % 2:
            coefficient = -coefficient
        total = total + coefficient
    return total


def formal_components(density: Jet, name: str) -> List[tuple]:
    return sorted({var[1] for var in density.formal_vars(name)})


# ============================================================================
# RANDOM SERIES
# ============================================================================

def random_coefficient(rng: random.Random, bound: int = 3) -> GaussRational:
    value = 0
    while not value:
        value = rng.randint(-bound, bound)
    return frac(value)


def random_series(ctx: JetContext, rng: random.Random, odd: bool = False, generators: int = 2,
                  constant: Optional[GaussRational] = None) -> Jet:
    """
    Random series up to the context order. Even series have rational
    coefficients; odd series give every Taylor coefficient a random
    combination of `generators` distinct Grassmann generators.
    """
    terms: Dict[JetKey, GaussRational] = {}
    for x in ctx.monomials():
        if not odd:
            if constant is not None and x == ctx.origin:
                value = gq(constant)
            else:
                value = random_coefficient(rng) if rng.random() < 0.8 else ZERO
            terms[((), x, ())] = value
            continue
        for g in rng.sample(range(1, ctx.num_generators + 1), min(generators, ctx.num_generators)):
            key = ((), x, (g,))
            terms[key] = terms.get(key, ZERO) + random_coefficient(rng)
    return Jet(ctx, terms)


# ============================================================================
# LINEAR SYSTEMS WITH SERIES COEFFICIENTS
# ============================================================================

def solve_series(matrix: List[List[Jet]], rhs: List[Jet]) -> List[Jet]:
    """
    Solve M(x) u(x) = b(x) for a square matrix of plain series that is
    invertible at the origin, by the Neumann series around M(0).

    Raises:
        ValidationError: if M is not square or carries formal/Grassmann terms
        SingularSystemError: if M(0) is singular
    """
    n = len(rhs)
    if n == 0:
        return []
    if len(matrix) != n or any(len(row) != n for row in matrix):
        raise ValidationError("series systems must be square")
    ctx = rhs[0].ctx
    for row in matrix:
        for entry in row:
            if not entry.is_plain_series():
                raise ValidationError("series system matrix must be plain")
    m0 = [[entry.constant_value() for entry in row] for row in matrix]
    try:
        inv0 = inverse(m0)
    except SingularSystemError as error:
        raise SingularSystemError("series system is singular at the origin") from error
    rest = [[entry.without_constant() for entry in row] for row in matrix]

    def apply_inv0(vector: List[Jet]) -> List[Jet]:
        out = []
        for i in range(n):
            acc = Jet.zero(ctx)
            for j in range(n):
                if inv0[i][j]:
                    acc = acc + vector[j].scaled(inv0[i][j])
            out.append(acc)
        return out

    term = apply_inv0(rhs)
    solution = list(term)
    for _ in range(ctx.order):
        mixed = []
        for i in range(n):
            acc = Jet.zero(ctx)
            for j in range(n):
                if rest[i][j] and term[j]:
                    acc = acc + rest[i][j] * term[j]
            mixed.append(acc)
        term = [-t for t in apply_inv0(mixed)]
        if all(t.is_zero() for t in term):
            break
        solution = [s + t for s, t in zip(solution, term)]
    return solution
