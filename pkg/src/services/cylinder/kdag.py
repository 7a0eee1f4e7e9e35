"""
The k‡ Constraint

In the reduced theory w‡ = e ǩ + c‡_n ξ^n with ε_n ǩ = e ǎ. Substituting
into the PC constraint w‡_n − ι_{z̲} w‡ − ι_ξ c‡_n + ι_{z̲} c‡_n ξ^n leaves
e ∧ (ǩ_n − ι_{z̲} ǩ) + μ ε_n ǩ, which lies in Im W_e^{(1,1)} exactly when
ε_n ǩ does. The quotient is τ‡ = ǩ_n + μ ǎ − ι_{z̲} ǩ.

Contraction along z̲ is written with the transversal vector `zt`: dx^n is
absorbed, so ι_{z̲} is an even derivation of the dx^n coefficients.
"""

import random
from typing import Dict, List, Tuple

from src.services.base_service import ValidationError
from src.services.cylinder.split import reduced_registry
from src.services.cylinder.substitutions import SubstitutionMap, apply_substitution
from src.services.exact_linalg import in_span, kernel, transpose
from src.services.fiber_service import FiberForm, FiberService, FiberSpace, Frame, random_frame, wedge
from src.services.models import VerificationReport
from src.services.scalars import gq
from src.services.symbolic.calculus import apply_delta, normalize
from src.services.symbolic.expression import Expression, Paren, Sym, Term
from src.services.symbolic.parser import parse

CONSTRAINT_TEXT = "w_dag_n - i[zt](w_dag) - i[xi](c_dag_n) + i[zt](c_dag_n)^xin"

KDAG_RULES: Dict[str, str] = {
    "w_dag": "e^kc + c_dag_n^xin",
    "w_dag_n": "e^kc_n + (i[zt](e) + mu^eps)^kc + i[xi](c_dag_n)",
}

TAU_PRINTED = "kc_n + mu^a - i[zt](kc)"
FRAME_SYMBOL = "e"

STRUCTURAL_TEXT = "eps^kc - e^a"
Q_RULES: Dict[str, str] = {
    "e": "L[xi,w](e) - br(c,e)",
    "kc": "d[w](e) + L[xi,w](kc) - br(c,kc)",
    "a": "Qa",
}
GHOSTLIKE = frozenset({"c", "xi", "a", "Qa"})


def kdag_map() -> SubstitutionMap:
    registry = reduced_registry()
    fixed = [name for name in registry.names() if name not in KDAG_RULES]
    return SubstitutionMap.from_text("kdag", registry, registry, KDAG_RULES, fixed)


def reduced_constraint() -> Expression:
    """The PC constraint after inserting the reduced w‡ and w‡_n"""
    smap = kdag_map()
    return apply_substitution(parse(CONSTRAINT_TEXT, smap.source), smap)


def _leading_symbol(term: Term) -> str:
    first = term.atoms[0] if term.atoms else None
    return first.name if isinstance(first, Sym) and not first.ops else ""


def split_off_frame(x: Expression) -> Tuple[Expression, Expression]:
    """
    (quotient, remainder) with x = e ∧ quotient + remainder, where the
    remainder collects the products that do not start with e.
    """
    quotient, remainder = [], []
    for term in x.terms:
        if _leading_symbol(term) == FRAME_SYMBOL:
            quotient.append(Term(term.coefficient, term.atoms[1:]))
        else:
            remainder.append(term)
    return Expression(tuple(quotient)), Expression(tuple(remainder))


def tau_dagger() -> Expression:
    """
    τ‡ from the reduced constraint, with μ ε_n ǩ = μ e ǎ.

    Raises:
        ValidationError: if a product is neither e-divisible nor μ ε_n ǩ
    """
    registry = reduced_registry()
    quotient, remainder = split_off_frame(reduced_constraint())
    expected = parse("mu^eps^kc", registry)
    if normalize(remainder - expected, registry).terms:
        raise ValidationError(f"constraint has a part outside e ∧ · : {remainder}")
    return normalize(quotient + parse("mu^a", registry), registry)


def q_of_structural() -> Expression:
    """Q(ε_n ǩ − e ǎ) with δφ replaced by Qφ"""
    registry = reduced_registry()
    varied = apply_delta(parse(STRUCTURAL_TEXT, registry), registry)
    rules = {name: parse(text, registry, raw=True) for name, text in Q_RULES.items()}
    rules["eps"] = Expression.zero()
    terms = []
    for term in varied.terms:
        atoms = []
        for atom in term.atoms:
            if isinstance(atom, Sym) and atom.ops == (("delta",),):
                atom = Paren(rules[atom.name])
            atoms.append(atom)
        terms.append(Term(term.coefficient, tuple(atoms)))
    return normalize(Expression(tuple(terms)), registry)


def without_ghosts(x: Expression) -> Expression:
    """Products free of c, ξ, ǎ and Qǎ"""
    return Expression(tuple(t for t in x.terms if not GHOSTLIKE & set(Expression((t,)).symbols())))


# ============================================================================
# NUMERIC EQUIVALENCE
# ============================================================================

def _random_form(rng: random.Random, space: FiberSpace, bound: int = 3) -> FiberForm:
    return FiberForm.from_vector(space, [gq(rng.randint(-bound, bound)) for _ in range(space.dim)])


def structural_pairs(frame: Frame) -> List[List]:
    """Kernel of (ǩ, ǎ) ↦ ε_n ǩ − e ǎ on Ω^{(2,1)} ⊕ Ω^{(1,1)}"""
    eps, e = frame.epsilon_form(), frame.e_form()
    k_space, a_space = FiberSpace(3, 2, 1), FiberSpace(3, 1, 1)
    columns = [wedge(eps, FiberForm(k_space, {key: 1})).vector() for key in k_space.basis]
    columns += [(-wedge(e, FiberForm(a_space, {key: 1}))).vector() for key in a_space.basis]
    return kernel(transpose(columns, FiberSpace(3, 2, 2).dim), k_space.dim + a_space.dim)


def membership(fibers: FiberService, frame: Frame, kc: FiberForm, kc_n: FiberForm,
               mu, z: List) -> Tuple[bool, bool]:
    """(constraint ∈ Im W_e^{(1,1)}, ε_n ǩ ∈ Im W_e^{(1,1)})"""
    image = fibers.W_map(frame, 1, 1, 1).image_basis
    e = frame.e_form()
    eps_kc = wedge(frame.epsilon_form(), kc)
    constraint = wedge(e, kc_n) + eps_kc.scaled(mu) - wedge(e, fibers.iota(z, kc))
    return in_span(image, constraint.vector()), in_span(image, eps_kc.vector())


def membership_trials(trials: int, seed: int) -> Dict[str, object]:
    """Both memberships agree on built (A) and random (B) ǩ"""
    fibers = FiberService()
    rng = random.Random(seed)
    disagree, b_outside = None, 0
    for trial in range(trials):
        frame = random_frame(rng, 3)
        pairs = structural_pairs(frame)
        combo = [gq(0)] * (FiberSpace(3, 2, 1).dim + FiberSpace(3, 1, 1).dim)
        for v in pairs:
            c = gq(rng.randint(-3, 3))
            combo = [x + c * y for x, y in zip(combo, v)]
        built = FiberForm.from_vector(FiberSpace(3, 2, 1), combo[:FiberSpace(3, 2, 1).dim])
        free = _random_form(rng, FiberSpace(3, 2, 1))
        kc_n = _random_form(rng, FiberSpace(3, 1, 1))
        mu = gq(rng.choice([-2, -1, 1, 2]))
        z = [rng.randint(-2, 2) for _ in range(3)]
        for case, kc in (("A", built), ("B", free)):
            whole, part = membership(fibers, frame, kc, kc_n, mu, z)
            if case == "A" and not part:
                disagree = disagree or f"trial {trial}: built ǩ outside the image"
            if whole != part:
                disagree = disagree or f"trial {trial}, case {case}"
            if case == "B" and not part:
                b_outside += 1
    return {'disagree': disagree, 'random_outside': b_outside}


def verify_kdag(trials: int, seed: int) -> VerificationReport:
    registry = reduced_registry()
    report = VerificationReport(suite="kdag-equivalence")

    quotient, remainder = split_off_frame(reduced_constraint())
    leftover = normalize(remainder - parse("mu^eps^kc", registry), registry)
    report.add("kdag-divisible", "Prop k‡, constraint is e ∧ τ‡ up to μ ε_n ǩ", leftover.is_zero(),
               witness=str(leftover), quotient=str(quotient))

    if leftover.is_zero():
        tau = tau_dagger()
        mismatch = normalize(tau - parse(TAU_PRINTED, registry), registry)
        report.add("kdag-tau", "Prop k‡, τ‡ = ǩ_n + μ ǎ − ι_z ǩ", mismatch.is_zero(),
                   witness=str(mismatch), tau=str(tau))

    result = membership_trials(trials, seed)
    report.add("kdag-membership", "Prop k‡, constraint ∈ Im W_e iff ε_n ǩ ∈ Im W_e",
               result['disagree'] is None, witness=result['disagree'], trials=trials,
               random_outside=result['random_outside'])

    q = without_ghosts(q_of_structural())
    expected = parse("-eps^d[w](e)", registry)
    residual = normalize(q - expected, registry)
    report.add("kdag-structural", "Prop k‡, Q(ε_n ǩ − e ǎ) ≡ −ε_n d_ω e", residual.is_zero(),
               witness=str(residual))
    return report
