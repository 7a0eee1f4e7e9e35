"""
Cylinder Splitting

Fields on I×Σ are written as φ = φ̃ + φ̃_n dx^n. The marker symbol `dn`
stands for dx^n: a closed, even-coefficient 1-form that squares to
zero. An underlined (transversal) quantity X̲ is written `X^dn`, and a
contraction along an underlined vector ι_{z̲}Y is written `i[z](Y)^dn`.
Every other decoration is tangential.
"""

from typing import Dict, List, Optional, Tuple

from src.services.base_service import ValidationError
from src.services.scalars import gq, sign_of
from src.services.symbolic.calculus import normalize
from src.services.symbolic.expression import (
    Apply,
    Atom,
    Bar,
    Br,
    Contract,
    Expression,
    Paren,
    Sym,
    Term,
    atom_degree,
    term_degree,
)
from src.services.symbolic.parser import parse
from src.services.symbolic.registry import FieldRegistry, FieldRegistryEntry, _curvatures, _entry, bulk_registry

MARKER = "dn"


def _marker() -> FieldRegistryEntry:
    return _entry(MARKER, 1, 0, 0, False, bundle="marker", role="auxiliary", category="marker",
                  description="dx^n")


def _frame_data() -> List[FieldRegistryEntry]:
    return [
        _entry("eps", 0, 1, 0, False, role="parameter", category="parameter", description="ε_n"),
        _entry("epsv", 0, 0, 0, False, bundle="vector-field", role="parameter", category="parameter",
               description="ε_n^i ∂_i"),
        _entry("z", 0, 0, 0, False, bundle="vector-field", category="ghost", description="z̲, tangential shift"),
        _entry("mu", 0, 0, 0, False, bundle="scalar", category="ghost", description="μ̲, lapse"),
        _entry("dz", 0, 0, 0, True, bundle="vector-field", role="variation", category="variation",
               description="δz"),
    ]


# ============================================================================
# REGISTRIES
# ============================================================================

def reduced_registry() -> FieldRegistry:
    """Split fields of the PC/SG theory on I×Σ, with the reduced-theory extras"""
    entries = [
        _marker(),
        *_frame_data(),
        # fields
        _entry("e", 1, 1, 0, False, category="frame"),
        _entry("e_n", 0, 1, 0, False, category="frame"),
        _entry("w", 1, 2, 0, False, category="connection"),
        _entry("w_n", 0, 2, 0, False, category="connection"),
        _entry("psi", 1, 0, 0, True, bundle="spinor", category="spinor"),
        _entry("psi_n", 0, 0, 0, True, bundle="spinor", category="spinor"),
        # ghosts
        _entry("c", 0, 2, 1, True, category="ghost"),
        _entry("chi", 0, 0, 1, False, bundle="spinor", category="ghost"),
        _entry("xi", 0, 0, 1, True, bundle="vector-field", category="ghost"),
        _entry("xin", 0, 0, 1, True, bundle="scalar", category="ghost", description="ξ^n"),
        _entry("dxi", 0, 0, 1, False, bundle="vector-field", role="variation", category="variation",
               description="δξ"),
        # antifields
        _entry("e_dag", 3, 3, -1, True, role="antifield", category="antifield"),
        _entry("e_dag_n", 2, 3, -1, True, role="antifield", category="antifield"),
        _entry("w_dag", 3, 2, -1, True, role="antifield", category="antifield"),
        _entry("w_dag_n", 2, 2, -1, True, role="antifield", category="antifield"),
        _entry("c_dag_n", 3, 2, -2, False, role="antifield", category="antifield"),
        _entry("xi_dag", 3, 4, -2, False, bundle="covector-density", role="antifield", category="antifield"),
        _entry("xi_dag_n", 3, 4, -2, False, bundle="scalar", role="antifield", category="antifield"),
        _entry("psi_dag", 3, 4, -1, False, bundle="spinor", role="antifield", category="antifield"),
        _entry("psi_dag_n", 2, 4, -1, False, bundle="spinor", role="antifield", category="antifield"),
        _entry("chi_dag_n", 3, 4, -2, True, bundle="spinor", role="antifield", category="antifield"),
        # reduced-theory pieces
        _entry("kc", 2, 1, -1, True, role="antifield", category="antifield", description="ǩ"),
        _entry("kc_n", 1, 1, -1, True, role="antifield", category="antifield", description="ǩ_n"),
        _entry("a", 1, 1, -1, True, role="antifield", category="antifield", description="ǎ"),
        _entry("Qa", 1, 1, 0, False, role="auxiliary", category="auxiliary", description="Q ǎ, left opaque"),
        _entry("zt", 0, 0, 0, False, bundle="vector-field", category="ghost", transversal=True,
               description="z̲ with dx^n absorbed"),
        # 𝔅 := 𝔔 + ½ε_n(χ̄γχ)ǩ; named only, no check uses it
        _entry("Bq", 2, 3, 1, True, role="auxiliary", category="auxiliary", description="𝔅"),
        _entry("v", 1, 2, 0, False, role="auxiliary", category="auxiliary", description="ṽ ∈ ker W_e^(1,2)"),
        _entry("v_dag", 2, 2, -1, True, role="antifield", category="antifield", description="ṽ‡"),
        # variations of the split fields
        _entry("u_e", 1, 1, 0, True, role="variation", category="variation"),
        _entry("u_e_n", 0, 1, 0, True, role="variation", category="variation"),
        _entry("u_w", 1, 2, 0, True, role="variation", category="variation"),
        _entry("u_w_n", 0, 2, 0, True, role="variation", category="variation"),
        _entry("u_c", 0, 2, 1, False, role="variation", category="variation"),
        _entry("u_e_dag", 3, 3, -1, False, role="variation", category="variation"),
        _entry("u_e_dag_n", 2, 3, -1, False, role="variation", category="variation"),
        _entry("u_w_dag", 3, 2, -1, False, role="variation", category="variation"),
        _entry("u_w_dag_n", 2, 2, -1, False, role="variation", category="variation"),
        _entry("u_c_dag_n", 3, 2, -2, True, role="variation", category="variation"),
    ]
    return FieldRegistry("reduced", 4, entries + _curvatures("w"))


def aksz_registry() -> FieldRegistry:
    """Maps T[1]I → boundary BFV fields, as degree-0 parts plus dt-components"""
    entries = [
        _marker(),
        *_frame_data(),
        _entry("lm", 0, 0, 1, True, bundle="scalar", category="ghost", description="λμ^{-1}"),
        _entry("dxi", 0, 0, 1, False, bundle="vector-field", role="variation", category="variation",
               description="δξ"),
        # degree-0 components
        _entry("e", 1, 1, 0, False, category="frame"),
        _entry("w", 1, 2, 0, False, category="connection"),
        _entry("psi", 1, 0, 0, True, bundle="spinor", category="spinor"),
        _entry("chi", 0, 0, 1, False, bundle="spinor", category="ghost"),
        _entry("c", 0, 2, 1, True, category="ghost"),
        _entry("xi", 0, 0, 1, True, bundle="vector-field", category="ghost"),
        _entry("lam", 0, 0, 1, True, bundle="scalar", category="ghost"),
        _entry("k_dag", 3, 2, -1, True, role="antifield", category="antifield"),
        _entry("theta_dag", 3, 4, -1, False, bundle="spinor", role="antifield", category="antifield"),
        _entry("e_dag", 3, 3, -1, True, role="antifield", category="antifield"),
        # dt-components
        _entry("f_dag", 1, 1, -1, True, role="antifield", category="antifield"),
        _entry("u_dag", 1, 2, -1, True, role="antifield", category="antifield"),
        _entry("sig_dag", 1, 0, -1, False, bundle="spinor", role="antifield", category="antifield"),
        _entry("epsi", 0, 0, 0, True, bundle="spinor", category="spinor", description="ϵ"),
        _entry("cw", 0, 2, 0, False, category="ghost", description="w, partner of c"),
        _entry("c_dag", 3, 2, -2, False, role="antifield", category="antifield"),
        _entry("chi_dag", 3, 4, -2, True, bundle="spinor", role="antifield", category="antifield"),
        _entry("y_dag", 3, 3, -2, False, role="antifield", category="antifield"),
    ]
    return FieldRegistry("aksz", 4, entries + _curvatures("w"))


# ============================================================================
# SPLITTING
# ============================================================================

# bulk symbol -> (tangential, transversal coefficient); None marks a missing part
SPLIT_TABLE: Dict[str, Tuple[Optional[str], Optional[str]]] = {
    "e": ("e", "e_n"),
    "w": ("w", "w_n"),
    "psi": ("psi", "psi_n"),
    "c": ("c", None),
    "chi": ("chi", None),
    "e_dag": ("e_dag", "e_dag_n"),
    "w_dag": ("w_dag", "w_dag_n"),
    "c_dag": (None, "c_dag_n"),
    "xi_dag": (None, "xi_dag + xi_dag_n"),
    "psi_dag": ("psi_dag", "psi_dag_n"),
    "chi_dag": (None, "chi_dag_n"),
    "u_e": ("u_e", "u_e_n"),
    "u_w": ("u_w", "u_w_n"),
    "u_c": ("u_c", None),
    "u_e_dag": ("u_e_dag", "u_e_dag_n"),
    "u_w_dag": ("u_w_dag", "u_w_dag_n"),
    "u_c_dag": (None, "u_c_dag_n"),
}

NORMAL_FRAME = "i[z](e) + mu^eps"


def split_rule(name: str, registry: FieldRegistry, expand_normal_frame: bool = True) -> Expression:
    """
    φ̃ + φ̃_n^dn for one bulk symbol, unnormalized.

    Raises:
        ValidationError: for symbols without a pointwise split (vector
            fields and curvatures)
    """
    if name not in SPLIT_TABLE:
        raise ValidationError(f"'{name}' has no pointwise cylinder split")
    tangential, transversal = SPLIT_TABLE[name]
    out = Expression.zero()
    if tangential is not None:
        out = out + Expression.symbol(tangential)
    if transversal is not None:
        text = NORMAL_FRAME if (transversal == "e_n" and expand_normal_frame) else transversal
        coefficient = parse(text, registry, raw=True)
        out = out + Expression.atom(Paren(coefficient)) * Expression.symbol(MARKER)
    return out


def _split_atom(atom: Atom, registry: FieldRegistry, expand_normal_frame: bool) -> Atom:
    if isinstance(atom, Sym):
        if any(op[0] != "delta" for op in atom.ops):
            raise ValidationError(f"cannot split the decorated symbol {atom.name} (only δ is allowed)")
        inner: Expression = split_rule(atom.name, registry, expand_normal_frame)
        for op in atom.ops:
            inner = Expression.atom(Apply(op, inner))
        return Bar(inner) if atom.bar else Paren(inner)
    if isinstance(atom, (Br, Contract)):
        raise ValidationError(f"cannot split a normalized {type(atom).__name__}")
    return atom


def split_cylinder(x: Expression, expand_normal_frame: bool = True,
                   source: Optional[FieldRegistry] = None,
                   target: Optional[FieldRegistry] = None) -> Expression:
    """
    Expand a bulk expression into tangential and transversal parts.

    With expand_normal_frame the transversal coframe is written as
    ι_z ẽ + μ ε_n.

    Raises:
        ValidationError: for decorations other than δ, vector fields or
            curvatures
    """
    source = source or bulk_registry()
    target = target or reduced_registry()
    terms = []
    for term in normalize(x, source).terms:
        atoms = tuple(_split_atom(a, target, expand_normal_frame) for a in term.atoms)
        terms.append(Term(term.coefficient, atoms))
    return normalize(Expression(tuple(terms)), target)


# ============================================================================
# PARTS
# ============================================================================

def _marker_count(term: Term) -> int:
    return sum(1 for a in term.atoms if isinstance(a, Sym) and a.name == MARKER)


def _strip_marker(term: Term, registry: FieldRegistry) -> Term:
    """Move dn to the end of a product and drop it"""
    index = next(i for i, a in enumerate(term.atoms) if isinstance(a, Sym) and a.name == MARKER)
    after = term.atoms[index + 1:]
    k = sum(atom_degree(a, registry).k + atom_degree(a, registry).p for a in after)
    return Term(term.coefficient * gq(sign_of(k)), term.atoms[:index] + after)


def tangential_part(x: Expression, registry: FieldRegistry) -> Expression:
    x = normalize(x, registry)
    return Expression(tuple(t for t in x.terms if _marker_count(t) == 0))


def transversal_part(x: Expression, registry: FieldRegistry) -> Expression:
    """Coefficient of dn, with dn moved to the right end"""
    x = normalize(x, registry)
    terms = [_strip_marker(t, registry) for t in x.terms if _marker_count(t) == 1]
    return normalize(Expression(tuple(terms)), registry)


def recombine(tangential: Expression, transversal: Expression, registry: FieldRegistry) -> Expression:
    return normalize(tangential + transversal * Expression.symbol(MARKER), registry)


def integrand(x: Expression, registry: FieldRegistry) -> Expression:
    """∫_{I×Σ} selection: dn-linear terms of top degree"""
    x = normalize(x, registry)
    top = (registry.base_dim, 4)
    keep = []
    for term in x.terms:
        deg = term_degree(term, registry)
        if _marker_count(term) == 1 and (deg.k, deg.l) == top:
            keep.append(term)
    return Expression(tuple(keep), x.flags)
