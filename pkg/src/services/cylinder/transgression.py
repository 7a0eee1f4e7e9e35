"""
Transgression

Pull a boundary field-space form back along the superfield extension
φ ↦ φ + φ̲ dt and keep the part linear in dt, i.e. the integrand of
∫_I. δ-degree is preserved.
"""

from src.services.base_service import ValidationError
from src.services.cylinder.maps import superfield_map
from src.services.cylinder.split import MARKER
from src.services.cylinder.substitutions import apply_substitution, delta_degree
from src.services.symbolic.calculus import normalize
from src.services.symbolic.expression import DEFAULT_TERM_CEILING, Expression, Sym, Term


def _dt_count(term: Term) -> int:
    return sum(1 for a in term.atoms if isinstance(a, Sym) and a.name == MARKER)


def transgress(x: Expression, out_degree: int, ceiling: int = DEFAULT_TERM_CEILING) -> Expression:
    """
    dt-linear part of the superfield pullback of x.

    Raises:
        ValidationError: if x is not homogeneous of δ-degree out_degree
        RuleTableGapError: for a boundary symbol without superfield rule
    """
    smap = superfield_map()
    x = normalize(x, smap.source, ceiling)
    degrees = {delta_degree(t) for t in x.terms if t.atoms}
    if degrees - {out_degree}:
        raise ValidationError(f"transgression to δ-degree {out_degree} of a form of δ-degree {sorted(degrees)}")
    pulled = apply_substitution(x, smap, ceiling)
    return Expression(tuple(t for t in pulled.terms if _dt_count(t) == 1), pulled.flags)
