"""
The φ1 shift of the reduced PC/SG antifields and its symplectic checks.

φ1 pulls ϖ^r_SG plus the ṽ hedgehog back to ϖ^r_SG plus an exact
ṽ-dependent shift of the PC part. The shift is pinned in closed form
below; closing it into zero needs ṽ ∈ ker W_e, which the engine does
not impose.
"""

from src.services.cylinder.maps import phi1_map
from src.services.cylinder.substitutions import apply_substitution, expand_variations, type_errors
from src.services.models import VerificationReport
from src.services.symbolic.calculus import normalize
from src.services.symbolic.expression import Expression
from src.services.symbolic.parser import parse

GRAVITINO_TEXT = (
    "1i*bar(delta(psi_n))^dn^delta(psi_dag) + 1i*bar(delta(psi))^delta(psi_dag_n)^dn"
    " + 1i*bar(delta(chi))^delta(chi_dag_n)^dn"
)

PC_TEXT = (
    "delta(e)^delta(e_dag_n)^dn + delta(e_n)^dn^delta(e_dag)"
    " + delta(w)^delta(w_dag_n)^dn + delta(w_n)^dn^delta(w_dag)"
    " + delta(c)^delta(c_dag_n)^dn + i[dxi](delta(xi_dag))^dn + delta(xi_dag_n)^dn^delta(xin)"
)

# ∫δṽδṽ‡ + δω̂δṽ‡
HEDGEHOG_TEXT = "delta(v)^delta(v_dag)^dn + delta(w)^delta(v_dag)^dn"

PC_SHIFT_EXPECTED = (
    "-delta(e)^delta(v^kc_n + i[z](v)^kc)^dn + delta(e_n)^dn^delta(v^kc)"
    " + delta(i[z](v))^dn^delta(w_dag) + delta(i[z](v)^xin - i[xi](v))^delta(c_dag_n)^dn"
    " - i[dxi](delta(v^c_dag_n))^dn + delta(i[z](v)^c_dag_n)^dn^delta(xin)"
)


def pc_shift(smap=None) -> Expression:
    """φ1^*ϖ_PC − ϖ_PC with every δ pushed onto a field"""
    smap = smap or phi1_map()
    before = parse(PC_TEXT, smap.source)
    moved = apply_substitution(before, smap) - before
    return expand_variations(moved, smap.target)


def expected_pc_shift(registry) -> Expression:
    return expand_variations(parse(PC_SHIFT_EXPECTED, registry), registry)


def verify_phi1_symplectic() -> VerificationReport:
    smap = phi1_map()
    registry = smap.source
    report = VerificationReport(suite="phi1-symplectic")

    errors = type_errors(smap)
    report.add("phi1-types", "Lemma φ1, degrees of the shifted antifields", not errors,
               witness="; ".join(errors), rules=len(smap.rules))

    gravitino = parse(GRAVITINO_TEXT, registry)
    moved = normalize(apply_substitution(gravitino, smap) - gravitino, registry)
    report.add("phi1-gravitino", "Lemma φ1, gravitino part of ϖ unchanged", moved.is_zero(),
               witness=str(moved))

    zero = apply_substitution(Expression.zero(), smap)
    report.add("phi1-zero", "Lemma φ1, linear on field space", zero.is_zero(), witness=str(zero))

    drifted = []
    for name in sorted(smap.fixed):
        x = Expression.symbol(name)
        if normalize(apply_substitution(x, smap) - x, registry).terms:
            drifted.append(name)
    report.add("phi1-fixed", "Lemma φ1, untouched fields", not drifted, witness=", ".join(drifted),
               fixed=len(smap.fixed))

    hedgehog = parse(HEDGEHOG_TEXT, registry)
    bent = normalize(apply_substitution(hedgehog, smap) - hedgehog, registry)
    report.add("phi1-hedgehog", "Lemma φ1, ∫δṽδṽ‡ + δω̂δṽ‡ fixed", bent.is_zero(), witness=str(bent))

    expected = expected_pc_shift(registry)
    residual = normalize(pc_shift(smap) - expected, registry)
    report.add("phi1-pc-shift", "Lemma φ1, φ1^*ϖ_PC − ϖ_PC in closed form", residual.is_zero(),
               witness=str(residual), terms=len(expected.terms))

    target = parse(" + ".join((PC_TEXT, GRAVITINO_TEXT, HEDGEHOG_TEXT)), registry)
    pulled = expand_variations(apply_substitution(target, smap), registry)
    closing = normalize(pulled - expand_variations(target, registry) - expected, registry)
    report.add("phi1-target", "Lemma φ1, φ1^*(ϖ^r_SG + hedgehog) − (ϖ^r_SG + hedgehog)",
               closing.is_zero(), witness=str(closing), terms=len(pulled.terms))
    return report
