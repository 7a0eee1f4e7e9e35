"""
Expressions

Immutable graded polynomials in decorated symbols.

An Expression is a sum of Terms; a Term is a Gaussian-rational
coefficient times an ordered product of atoms. Atoms are stored
coefficient-first in the same convention as fiber forms, so moving one
factor past another costs the Koszul sign of their (form degree,
V-degree, coefficient parity) triples.

Spinor factors form chains row · matrices · column. A closed chain is
an ordinary scalar unit; at most one open chain (spinor- or
matrix-valued) is allowed and it always sits last.
"""

from dataclasses import dataclass, field
from typing import Dict, FrozenSet, Iterable, List, Optional, Sequence, Tuple, Union

from src.services.base_service import TermCeilingError, ValidationError
from src.services.clifford_service import CliffordService
from src.services.models import Parity
from src.services.scalars import ONE, ZERO, GaussRational, format_gauss, gq, sign_of
from src.services.symbolic.registry import FieldRegistry

DEFAULT_TERM_CEILING = 10 ** 6

# Decorations, innermost first:
#   ("d", None)        exterior derivative
#   ("d", conn)        covariant derivative d_conn
#   ("i", vec)         interior product
#   ("L", vec, conn)   covariant Lie derivative [ι_vec, d_conn]
#   ("delta",)         variation
Op = Tuple


# ============================================================================
# ATOMS
# ============================================================================

@dataclass(frozen=True)
class Sym:
    """Registered symbol with decorations; bar applies last"""
    name: str
    ops: Tuple[Op, ...] = ()
    bar: bool = False


@dataclass(frozen=True)
class Gamma:
    """γ^N as a matrix-valued (0, N) form"""
    n: int


@dataclass(frozen=True)
class Br:
    """[A, X] for a V-valued A acting as a derivation"""
    left: "Atom"
    right: "Atom"


@dataclass(frozen=True)
class Contract:
    """⟨e, X⟩"""
    inner: "Atom"


@dataclass(frozen=True)
class Apply:
    """Decoration of a composite expression, expanded away by normalization"""
    op: Op
    inner: "Expression"


@dataclass(frozen=True)
class Bracket:
    """[A, X] of composite expressions, expanded away by normalization"""
    left: "Expression"
    right: "Expression"


@dataclass(frozen=True)
class Bar:
    """Dirac conjugate of a composite spinor expression"""
    inner: "Expression"


@dataclass(frozen=True)
class Paren:
    """Parenthesized sub-expression used as a factor"""
    inner: "Expression"


@dataclass(frozen=True)
class Angle:
    """⟨e, X⟩ of a composite expression"""
    inner: "Expression"


Atom = Union[Sym, Gamma, Br, Contract, Apply, Bracket, Bar, Paren, Angle]
COMPOSITE = (Apply, Bracket, Bar, Paren, Angle)


@dataclass(frozen=True)
class Deg:
    """Degrees of a factor: form degree k, V-degree l, ghost number, coefficient parity p"""
    k: int
    l: int
    ghost: int
    p: int

    def __add__(self, other: "Deg") -> "Deg":
        return Deg(self.k + other.k, self.l + other.l, self.ghost + other.ghost, (self.p + other.p) % 2)

    @property
    def total_parity(self) -> int:
        return (self.k + self.l + self.p) % 2


ZERO_DEG = Deg(0, 0, 0, 0)


def koszul(a: Deg, b: Deg) -> int:
    """Sign of u_a u_b = sign · u_b u_a for coefficient-first units"""
    return sign_of(a.k * b.k + a.l * b.l + a.p * b.p + a.p * (b.k + b.l) + b.p * (a.k + a.l))


# ============================================================================
# TERMS AND EXPRESSIONS
# ============================================================================

@dataclass(frozen=True)
class Term:
    coefficient: GaussRational
    atoms: Tuple[Atom, ...]

    def scaled(self, c) -> "Term":
        return Term(self.coefficient * gq(c), self.atoms)


@dataclass(frozen=True)
class Expression:
    terms: Tuple[Term, ...] = ()
    flags: FrozenSet[str] = field(default_factory=frozenset)

    # -- constructors ---------------------------------------------------
    @classmethod
    def zero(cls) -> "Expression":
        return cls(())

    @classmethod
    def atom(cls, atom: Atom, coefficient=1) -> "Expression":
        return cls((Term(gq(coefficient), (atom,)),))

    @classmethod
    def symbol(cls, name: str) -> "Expression":
        return cls.atom(Sym(name))

    @classmethod
    def scalar(cls, coefficient) -> "Expression":
        return cls((Term(gq(coefficient), ()),))

    # -- algebra (unnormalized) -----------------------------------------
    def __add__(self, other: "Expression") -> "Expression":
        return Expression(self.terms + other.terms, self.flags | other.flags)

    def __sub__(self, other: "Expression") -> "Expression":
        return self + other.scaled(-1)

    def __neg__(self) -> "Expression":
        return self.scaled(-1)

    def scaled(self, c) -> "Expression":
        c = gq(c)
        return Expression(tuple(t.scaled(c) for t in self.terms), self.flags)

    def __mul__(self, other: "Expression") -> "Expression":
        """Concatenation product (no reordering)"""
        terms = tuple(
            Term(a.coefficient * b.coefficient, a.atoms + b.atoms)
            for a in self.terms for b in other.terms
        )
        return Expression(terms, self.flags | other.flags)

    def is_zero(self) -> bool:
        return not self.terms

    def __len__(self) -> int:
        return len(self.terms)

    def flagged(self, *flags: str) -> "Expression":
        return Expression(self.terms, self.flags | frozenset(flags))

    def symbols(self) -> List[str]:
        found: List[str] = []
        for term in self.terms:
            for atom in term.atoms:
                _collect_symbols(atom, found)
        return sorted(set(found))

    def __str__(self) -> str:
        return to_text(self)


def _collect_symbols(atom: Atom, found: List[str]) -> None:
    if isinstance(atom, Sym):
        found.append(atom.name)
        for op in atom.ops:
            found.extend(str(x) for x in op[1:] if x is not None)
    elif isinstance(atom, Br):
        _collect_symbols(atom.left, found)
        _collect_symbols(atom.right, found)
    elif isinstance(atom, Contract):
        _collect_symbols(atom.inner, found)
    elif isinstance(atom, Bracket):
        found.extend(atom.left.symbols())
        found.extend(atom.right.symbols())
    elif isinstance(atom, (Apply, Bar, Paren, Angle)):
        found.extend(atom.inner.symbols())
        if isinstance(atom, Apply):
            found.extend(str(x) for x in atom.op[1:] if x is not None)


# ============================================================================
# DEGREES AND SPINOR KINDS
# ============================================================================

def op_shift(op: Op, registry: FieldRegistry) -> Deg:
    """Degree change of one decoration"""
    kind = op[0]
    if kind == "d":
        return Deg(1, 0, 0, 0)
    if kind == "i":
        vec = registry.lookup(op[1])
        return Deg(-1, 0, vec.ghost, vec.parity.bit)
    if kind == "L":
        vec = registry.lookup(op[1])
        return Deg(0, 0, vec.ghost, vec.parity.bit)
    if kind == "delta":
        return Deg(0, 0, 0, 1)
    raise ValidationError(f"unknown decoration {op!r}")


def atom_degree(atom: Atom, registry: FieldRegistry) -> Deg:
    if isinstance(atom, Sym):
        entry = registry.lookup(atom.name)
        deg = Deg(entry.form_degree, entry.v_degree, entry.ghost, entry.parity.bit)
        for op in atom.ops:
            deg = deg + op_shift(op, registry)
        return deg
    if isinstance(atom, Gamma):
        return Deg(0, atom.n, 0, 0)
    if isinstance(atom, Br):
        a, x = atom_degree(atom.left, registry), atom_degree(atom.right, registry)
        return Deg(a.k + x.k, a.l + x.l - 2, a.ghost + x.ghost, (a.p + x.p) % 2)
    if isinstance(atom, Contract):
        x = atom_degree(atom.inner, registry)
        return Deg(x.k - 1, x.l + 1, x.ghost, x.p)
    raise ValidationError(f"degree of an unexpanded {type(atom).__name__}")


def term_degree(term: Term, registry: FieldRegistry) -> Deg:
    deg = ZERO_DEG
    for atom in term.atoms:
        deg = deg + atom_degree(atom, registry)
    return deg


def atom_kind(atom: Atom, registry: FieldRegistry) -> str:
    """Spinor kind: none, column, row or matrix"""
    if isinstance(atom, Sym):
        if registry.lookup(atom.name).is_spinor:
            return "row" if atom.bar else "column"
        return "none"
    if isinstance(atom, Gamma):
        return "matrix"
    if isinstance(atom, Br):
        return atom_kind(atom.right, registry)
    if isinstance(atom, Contract):
        return atom_kind(atom.inner, registry)
    raise ValidationError(f"kind of an unexpanded {type(atom).__name__}")


# ============================================================================
# CANONICAL ORDER
# ============================================================================

def atom_key(atom: Atom, registry: FieldRegistry) -> Tuple:
    """Sort key: ordering class, then name, then decoration length"""
    if isinstance(atom, Sym):
        entry = registry.lookup(atom.name)
        return (entry.rank(atom.bar), atom.name, len(atom.ops), repr(atom.ops), int(atom.bar))
    if isinstance(atom, Gamma):
        return (20, f"G{atom.n}", 0, "", 0)
    if isinstance(atom, Br):
        left, right = atom_key(atom.left, registry), atom_key(atom.right, registry)
        return (min(left[0], right[0]) + 10, "br", 0, repr((left, right)), 0)
    if isinstance(atom, Contract):
        inner = atom_key(atom.inner, registry)
        return (inner[0] + 10, "contract", 0, repr(inner), 0)
    raise ValidationError(f"cannot order an unexpanded {type(atom).__name__}")


@dataclass
class _Unit:
    atoms: List[Atom]
    deg: Deg
    closed: bool = True


def _unit_key(unit: _Unit, registry: FieldRegistry) -> Tuple:
    return tuple(atom_key(a, registry) for a in unit.atoms)


def _group_units(term: Term, registry: FieldRegistry) -> Tuple[int, List[_Unit]]:
    """
    Split a product into scalar units, closed chains and at most one
    trailing open chain. Scalars found inside a chain are moved in front
    of it with their Koszul sign.

    Raises:
        ValidationError: for spinor shapes that do not compose
    """
    sign = 1
    units: List[_Unit] = []
    chain: Optional[_Unit] = None
    trailing: Optional[_Unit] = None
    for atom in term.atoms:
        kind = atom_kind(atom, registry)
        deg = atom_degree(atom, registry)
        if kind == "none":
            unit = _Unit([atom], deg)
            if chain is not None:
                sign *= koszul(chain.deg, deg)
            if trailing is not None:
                sign *= koszul(trailing.deg, deg)
            units.append(unit)
            continue
        if trailing is not None:
            raise ValidationError("spinor factor after an open spinor chain")
        if kind == "row":
            if chain is not None:
                raise ValidationError("row spinor inside a chain")
            chain = _Unit([atom], deg, closed=False)
            continue
        if chain is None:
            chain = _Unit([atom], deg, closed=False)
        else:
            chain.atoms.append(atom)
            chain.deg = chain.deg + deg
        if kind == "column":
            if atom_kind(chain.atoms[0], registry) == "row":
                chain.closed = True
                units.append(chain)
            else:
                trailing = chain
            chain = None
    if chain is not None:
        trailing = chain
    if trailing is not None:
        units.append(trailing)
    return sign, units


def _flip_chain(unit: _Unit, registry: FieldRegistry) -> Tuple[int, _Unit]:
    """Put bar(A)γ^N B into operand order using the flip relation"""
    atoms = unit.atoms
    if len(atoms) == 2:
        row, gam, col = atoms[0], None, atoms[1]
    elif len(atoms) == 3 and isinstance(atoms[1], Gamma):
        row, gam, col = atoms
    else:
        return 1, unit
    if not (isinstance(row, Sym) and isinstance(col, Sym)):
        return 1, unit
    plain_row = Sym(row.name, row.ops, False)
    col_key, row_key = atom_key(col, registry), atom_key(plain_row, registry)
    if col_key > row_key:
        return 1, unit
    n = gam.n if gam is not None else 0
    a, b = atom_degree(plain_row, registry), atom_degree(col, registry)
    sign = CliffordService.flip_sign(n, Parity.from_bit(a.p), Parity.from_bit(b.p))
    sign *= sign_of(a.k * b.k + a.p * b.k + b.p * a.k)
    if col_key == row_key:
        # Āγ^N A is its own flip; an odd flip makes it vanish
        return (0 if sign < 0 else 1), unit
    new_atoms = [Sym(col.name, col.ops, True)] + ([gam] if gam is not None else []) + [plain_row]
    return sign, _Unit(new_atoms, unit.deg, True)


def canonical_term(term: Term, registry: FieldRegistry) -> Optional[Term]:
    """
    Koszul-sorted form of one product, or None when it vanishes.

    Closed chains are flipped into operand order first, and a chain Āγ^N A
    that is odd under the flip vanishes. Scalar units are then
    bubble-sorted by key; two equal adjacent units of odd total parity
    kill the term.
    """
    sign, units = _group_units(term, registry)
    open_tail = units.pop() if units and not units[-1].closed else None
    for i, unit in enumerate(units):
        s, units[i] = _flip_chain(unit, registry)
        sign *= s
    if sign == 0:
        return None
    keys = [_unit_key(u, registry) for u in units]
    n = len(units)
    for i in range(n):
        for j in range(n - 1 - i):
            if keys[j] > keys[j + 1]:
                sign *= koszul(units[j].deg, units[j + 1].deg)
                units[j], units[j + 1] = units[j + 1], units[j]
                keys[j], keys[j + 1] = keys[j + 1], keys[j]
    for j in range(n - 1):
        if keys[j] == keys[j + 1] and units[j].deg.total_parity:
            return None
    atoms: List[Atom] = []
    for unit in units:
        atoms.extend(unit.atoms)
    if open_tail is not None:
        atoms.extend(open_tail.atoms)
    return Term(term.coefficient * sign, tuple(atoms))


def collect(terms: Iterable[Term], ceiling: int = DEFAULT_TERM_CEILING, context: str = "") -> Tuple[Term, ...]:
    """
    Merge equal products and drop zero coefficients.

    Raises:
        TermCeilingError: when the number of distinct products passes the ceiling
    """
    merged: Dict[Tuple[Atom, ...], GaussRational] = {}
    for term in terms:
        merged[term.atoms] = merged.get(term.atoms, ZERO) + term.coefficient
        if len(merged) > ceiling:
            raise TermCeilingError(len(merged), ceiling, context)
    ordered = sorted(merged.items(), key=lambda item: repr(item[0]))
    return tuple(Term(c, atoms) for atoms, c in ordered if c)


# ============================================================================
# PRINTING
# ============================================================================

def atom_text(atom: Atom) -> str:
    if isinstance(atom, Sym):
        text = atom.name
        for op in atom.ops:
            if op[0] == "d":
                text = f"d({text})" if op[1] is None else f"d[{op[1]}]({text})"
            elif op[0] == "i":
                text = f"i[{op[1]}]({text})"
            elif op[0] == "L":
                text = f"L[{op[1]},{op[2]}]({text})"
            elif op[0] == "delta":
                text = f"delta({text})"
        return f"bar({text})" if atom.bar else text
    if isinstance(atom, Gamma):
        return f"G{atom.n}"
    if isinstance(atom, Br):
        return f"br({atom_text(atom.left)},{atom_text(atom.right)})"
    if isinstance(atom, Contract):
        return f"<e,{atom_text(atom.inner)}>"
    if isinstance(atom, Apply):
        return atom_text(Sym(f"({to_text(atom.inner)})", (atom.op,)))
    if isinstance(atom, Bracket):
        return f"br({to_text(atom.left)},{to_text(atom.right)})"
    if isinstance(atom, Bar):
        return f"bar({to_text(atom.inner)})"
    if isinstance(atom, Paren):
        return f"({to_text(atom.inner)})"
    if isinstance(atom, Angle):
        return f"<e,{to_text(atom.inner)}>"
    raise ValidationError(f"cannot print {atom!r}")


def _coefficient_text(c: GaussRational) -> Tuple[str, str]:
    """(sign, prefix) for a term coefficient"""
    if c.y:
        return "+", f"({format_gauss(c)})*"
    text = format_gauss(c)
    sign = "-" if text.startswith("-") else "+"
    text = text.lstrip("-")
    return sign, ("" if text == "1" else f"{text}*")


def to_text(expr: Expression) -> str:
    """Grammar-conforming text; parse(to_text(x)) normalizes to x"""
    if expr.is_zero():
        return "0"
    parts: List[str] = []
    for index, term in enumerate(expr.terms):
        sign, prefix = _coefficient_text(term.coefficient)
        body = "^".join(atom_text(a) for a in term.atoms)
        if not body:
            body = prefix[:-1] if prefix else "1"
            prefix = ""
        chunk = prefix + body
        if index == 0:
            parts.append(chunk if sign == "+" else f"-{chunk}")
        else:
            parts.append(f" {sign} {chunk}")
    return "".join(parts)


def signature(term: Term) -> str:
    return "^".join(atom_text(a) for a in term.atoms) or "1"
