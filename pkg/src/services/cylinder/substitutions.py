"""
Substitution Maps

A SubstitutionMap sends each source symbol to an expression over a
target registry. Application is simultaneous: every occurrence of a
mapped symbol is replaced by its rule, and the symbol's decorations
are re-applied to the whole rule. Vector symbols inside ι are replaced
linearly, ι_{s·v} Y = s ι_v Y.
"""

from dataclasses import dataclass, field
from typing import Dict, FrozenSet, Iterable, List, Tuple

from src.services.base_service import RuleTableGapError, ValidationError
from src.services.scalars import gq, sign_of
from src.services.symbolic.calculus import normalize
from src.services.symbolic.expression import (
    DEFAULT_TERM_CEILING,
    Apply,
    Atom,
    Bar,
    Br,
    Contract,
    Expression,
    Gamma,
    Op,
    Paren,
    Sym,
    Term,
    atom_degree,
    koszul,
    term_degree,
)
from src.services.symbolic.parser import parse
from src.services.symbolic.registry import FieldRegistry

# vector -> its variation, for δι_v = ι_{δv} + (-1)^{q_v+1} ι_v δ
VARIATION_VECTORS: Dict[str, str] = {"xi": "dxi", "z": "dz"}


@dataclass
class SubstitutionMap:
    name: str
    source: FieldRegistry
    target: FieldRegistry
    rules: Dict[str, Expression]
    fixed: FrozenSet[str] = field(default_factory=frozenset)

    @classmethod
    def from_text(cls, name: str, source: FieldRegistry, target: FieldRegistry,
                  rules: Dict[str, str], fixed: Iterable[str] = ()) -> "SubstitutionMap":
        """
        Raises:
            ValidationError: if a rule names a symbol missing from the source
            ParseError: if a rule does not parse over the target
        """
        parsed = {}
        for symbol, text in rules.items():
            if symbol not in source:
                raise ValidationError(f"{name}: rule for unknown source symbol '{symbol}'")
            parsed[symbol] = normalize(parse(text, target, raw=True), target)
        return cls(name, source, target, parsed, frozenset(fixed))

    def rule_for(self, symbol: str) -> Expression:
        """
        Raises:
            RuleTableGapError: for a symbol that is neither mapped nor fixed
        """
        if symbol in self.rules:
            return self.rules[symbol]
        if symbol in self.fixed:
            return Expression.symbol(symbol)
        raise RuleTableGapError(f"{self.name} has no rule for '{symbol}'")

    def to_dict(self) -> dict:
        return {
            'name': self.name,
            'source': self.source.domain,
            'target': self.target.domain,
            'rules': {k: str(v) for k, v in sorted(self.rules.items())},
            'fixed': sorted(self.fixed),
        }


# ============================================================================
# APPLICATION
# ============================================================================

def _vector_terms(rule: Expression, registry: FieldRegistry) -> List[Tuple[object, Tuple[Atom, ...], str]]:
    """Split a vector-valued rule into (coefficient, scalar factors, vector name)"""
    out = []
    for term in rule.terms:
        vectors = [i for i, a in enumerate(term.atoms)
                   if isinstance(a, Sym) and registry.lookup(a.name).is_vector]
        if len(vectors) != 1 or term.atoms[vectors[0]].ops:
            raise ValidationError(f"vector rule term {term} is not a multiple of one vector")
        i = vectors[0]
        sign = 1
        vec_deg = atom_degree(term.atoms[i], registry)
        for a in term.atoms[i + 1:]:
            sign *= koszul(vec_deg, atom_degree(a, registry))
        scalars = term.atoms[:i] + term.atoms[i + 1:]
        out.append((term.coefficient * sign, scalars, term.atoms[i].name))
    return out


def _apply_op(op: Op, inner: Expression, smap: SubstitutionMap) -> Expression:
    kind = op[0]
    if kind == "delta" or (kind == "d" and op[1] is None):
        return Expression.atom(Apply(op, inner))
    if kind == "i":
        out = Expression.zero()
        for coefficient, scalars, vector in _vector_terms(smap.rule_for(op[1]), smap.target):
            factor = Expression((Term(gq(coefficient), scalars),))
            out = out + factor * Expression.atom(Apply(("i", vector), inner))
        return out
    # d_ω and L_ξ only survive when their arguments are left alone
    for name in op[1:]:
        if name is not None and not _is_identity(smap, name):
            raise ValidationError(f"{smap.name}: cannot substitute inside {kind}[{name}]")
    return Expression.atom(Apply(op, inner))


def _is_identity(smap: SubstitutionMap, name: str) -> bool:
    rule = smap.rule_for(name)
    return len(rule.terms) == 1 and rule.terms[0].atoms == (Sym(name),) and rule.terms[0].coefficient == gq(1)


def _substitute_atom(atom: Atom, smap: SubstitutionMap) -> Atom:
    if isinstance(atom, Gamma):
        return atom
    if not isinstance(atom, Sym):
        raise ValidationError(f"{smap.name}: cannot substitute into {type(atom).__name__}")
    inner = smap.rule_for(atom.name)
    for op in atom.ops:
        inner = _apply_op(op, inner, smap)
    return Bar(inner) if atom.bar else Paren(inner)


def apply_substitution(x: Expression, smap: SubstitutionMap,
                       ceiling: int = DEFAULT_TERM_CEILING) -> Expression:
    """
    Simultaneous substitution of every symbol of x.

    Raises:
        RuleTableGapError: if x mentions a symbol the map does not cover
        ValidationError: for decorations the map cannot transport
    """
    x = normalize(x, smap.source, ceiling)
    terms = []
    for term in x.terms:
        atoms = tuple(_substitute_atom(a, smap) for a in term.atoms)
        terms.append(Term(term.coefficient, atoms))
    return normalize(Expression(tuple(terms), x.flags), smap.target, ceiling)


# ============================================================================
# VARIATIONS OF CONTRACTIONS
# ============================================================================

def _expand_sym(atom: Sym, registry: FieldRegistry) -> List[Tuple[int, Sym]]:
    ops = atom.ops
    for j in range(1, len(ops)):
        prev = ops[j - 1]
        if ops[j] != ("delta",) or prev[0] != "i":
            continue
        vector = prev[1]
        out: List[Tuple[int, Sym]] = []
        # other vectors (ε_n, δξ, δz) are δ-closed
        if vector in VARIATION_VECTORS:
            varied = Sym(atom.name, ops[:j - 1] + (("i", VARIATION_VECTORS[vector]),) + ops[j + 1:], atom.bar)
            out.extend(_expand_sym(varied, registry))
        q = registry.lookup(vector).parity.bit
        swapped = ops[:j - 1] + (("delta",), prev) + ops[j + 1:]
        if any(swapped[i] == swapped[i + 1] == ("delta",) for i in range(len(swapped) - 1)):
            return out
        for sign, sym in _expand_sym(Sym(atom.name, swapped, atom.bar), registry):
            out.append((sign * sign_of(q + 1), sym))
        return out
    return [(1, atom)]


def expand_variations(x: Expression, registry: FieldRegistry,
                      ceiling: int = DEFAULT_TERM_CEILING) -> Expression:
    """
    Rewrite δ(ι_v Y) as ι_{δv} Y ± ι_v δY for the moving vectors ξ and z,
    so that every δ sits directly on a field.
    """
    x = normalize(x, registry, ceiling)
    terms: List[Term] = []
    for term in x.terms:
        partial = [Term(term.coefficient, ())]
        for atom in term.atoms:
            options = _expand_sym(atom, registry) if isinstance(atom, Sym) else [(1, atom)]
            partial = [Term(t.coefficient * sign, t.atoms + (a,)) for t in partial for sign, a in options]
        terms.extend(partial)
    return normalize(Expression(tuple(terms), x.flags), registry, ceiling)


# ============================================================================
# TYPE CHECKS
# ============================================================================

def _covector_count(term: Term, registry: FieldRegistry) -> int:
    return sum(1 for a in term.atoms
               if isinstance(a, Sym) and registry.lookup(a.name).bundle == "covector-density")


def type_errors(smap: SubstitutionMap) -> List[str]:
    """
    Rule terms whose (form degree, V-degree, ghost, parity) differ from
    their source symbol. A covector density pairs with a vector, so its
    rules may also be top forms with one extra form degree.
    """
    errors: List[str] = []
    for symbol, rule in sorted(smap.rules.items()):
        entry = smap.source.lookup(symbol)
        shift = 1 if entry.bundle == "covector-density" else 0
        expected = (entry.form_degree + shift, entry.v_degree, entry.ghost, entry.parity.bit)
        for term in rule.terms:
            deg = term_degree(term, smap.target)
            got = (deg.k + _covector_count(term, smap.target), deg.l, deg.ghost, deg.p)
            if got != expected:
                errors.append(f"{smap.name}: {symbol} -> {Expression((term,))} has {got}, expected {expected}")
    return errors


def _atom_delta_degree(atom: Atom) -> int:
    if isinstance(atom, Sym):
        return sum(1 for op in atom.ops
                   if op == ("delta",) or (op[0] == "i" and op[1] in VARIATION_VECTORS.values()))
    if isinstance(atom, Br):
        return _atom_delta_degree(atom.left) + _atom_delta_degree(atom.right)
    if isinstance(atom, Contract):
        return _atom_delta_degree(atom.inner)
    return 0


def delta_degree(term: Term) -> int:
    """Form degree on field space: δ's plus contractions with δξ or δz"""
    return sum(_atom_delta_degree(a) for a in term.atoms)
