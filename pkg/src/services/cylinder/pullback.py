"""
The ṽ-quadratic term of the PC pullback, ½ ∫ e_n e [ṽ, ṽ] dt, and the
pairing B(ṽ₁, ṽ₂) it induces on ker W_e^{∂,(1,2)}.
"""

import random
from typing import Dict, List

from src.services.base_service import ValidationError
from src.services.cylinder.maps import phi1_map
from src.services.cylinder.split import integrand, reduced_registry
from src.services.cylinder.substitutions import apply_substitution
from src.services.exact_linalg import rank
from src.services.fiber_service import FiberForm, FiberService, FiberSpace, Frame, random_frame, v_contract, wedge
from src.services.models import VerificationReport
from src.services.scalars import ZERO, gq
from src.services.symbolic.calculus import normalize
from src.services.symbolic.expression import Expression, term_degree
from src.services.symbolic.parser import parse

# transversal coefficients carry dx^n on their right
QUADRATIC_TEXT = "1/2*e_n^dn^e^br(v,v)"
# the ṽ² part of ½ e e F_{ω̂+ṽ} before splitting e
QUADRATIC_SOURCE = "1/4*(e + e_n^dn)^(e + e_n^dn)^br(v,v)"
SHIFT_SYMBOL = "v"


def lie_bracket(a: FiberForm, x: FiberForm) -> FiberForm:
    """
    [A, X] for Λ²V-valued A acting on V-valued X:
    dx^I v_a v_b ↦ dx^I (v_a [v_b, X] − v_b [v_a, X]).
    """
    if a.l != 2:
        raise ValidationError("the acting form must be Λ²V-valued")
    space = FiberSpace(x.base_dim, a.k + x.k, x.l, x.spinor, x.parity)
    total = FiberForm(space)
    for (I, (p, q), _), c in a.coeffs.items():
        for first, second in ((p, q), (q, p)):
            head = FiberForm(FiberSpace(x.base_dim, len(I), 1), {(I, (first,), None): c})
            term = wedge(head, v_contract(second, x))
            total = total + (term if first == p else -term)
    return total


def normal_coframe(frame: Frame, fibers: FiberService, mu, z: List) -> FiberForm:
    """e_n = μ ε_n + ι_z e"""
    return frame.epsilon_form().scaled(mu) + fibers.iota(z, frame.e_form())


def gram_matrix(frame: Frame, fibers: FiberService, mu, z: List) -> List[List]:
    """B(v_i, v_j) = top coefficient of e_n ∧ e ∧ [v_i, v_j] over a basis of ker W_e^{∂,(1,2)}"""
    cert = fibers.W_map(frame, 1, 1, 2)
    space = FiberSpace(3, 1, 2)
    basis = [FiberForm.from_vector(space, v) for v in cert.kernel_basis]
    prefix = wedge(normal_coframe(frame, fibers, mu, z), frame.e_form())
    matrix = []
    for vi in basis:
        row = []
        for vj in basis:
            top = wedge(prefix, lie_bracket(vi, vj))
            row.append(sum(top.coeffs.values(), ZERO))
        matrix.append(row)
    return matrix


def gram_trials(trials: int, seed: int) -> Dict[str, object]:
    fibers = FiberService()
    rng = random.Random(seed)
    ranks, kernel_dims = set(), set()
    for _ in range(trials):
        frame = random_frame(rng, 3)
        mu = gq(rng.choice([-2, -1, 1, 2]))
        z = [rng.randint(-2, 2) for _ in range(3)]
        matrix = gram_matrix(frame, fibers, mu, z)
        kernel_dims.add(len(matrix))
        ranks.add(rank(matrix) if matrix else 0)
    return {'ranks': sorted(ranks), 'kernel_dims': sorted(kernel_dims)}


def quadratic_term() -> Expression:
    return parse(QUADRATIC_TEXT, reduced_registry())


def split_quadratic_term() -> Expression:
    """Integrand of the split ṽ² part, dn-linear top terms only"""
    registry = reduced_registry()
    return integrand(parse(QUADRATIC_SOURCE, registry), registry)


def verify_pc_pullback(trials: int, seed: int) -> VerificationReport:
    registry = reduced_registry()
    report = VerificationReport(suite="pc-pullback")

    x = quadratic_term()
    shapes = sorted({(d.k, d.l, d.ghost) for d in (term_degree(t, registry) for t in x.terms)})
    report.add("quadratic-degree", "Thm PC pullback, ½ e_n e [ṽ,ṽ] is a top form of ghost 0",
               shapes == [(4, 4, 0)], witness=str(shapes))
    mentions = all(SHIFT_SYMBOL in Expression((t,)).symbols() for t in x.terms)
    report.add("quadratic-in-v", "Thm PC pullback, ṽ enters through [ṽ,ṽ]", mentions and not x.is_zero(),
               witness=str(x), terms=len(x.terms))

    residual = normalize(split_quadratic_term() - x, registry)
    report.add("quadratic-from-split", "Thm PC pullback, ½ e_n e [ṽ,ṽ] is the split ṽ² part of ½ e e F",
               residual.is_zero(), witness=str(residual))

    # Φ reduces to φ1 on L_f
    moved = normalize(apply_substitution(x, phi1_map()) - x, registry)
    report.add("quadratic-phi1-fixed", "Thm PC pullback, φ1 leaves ½ e_n e [ṽ,ṽ] unchanged", moved.is_zero(),
               witness=str(moved))

    result = gram_trials(trials, seed)
    ok = result['ranks'] == result['kernel_dims'] == [6]
    report.add("quadratic-nondegenerate", "Thm PC pullback, B is nondegenerate on ker W_e^{∂,(1,2)}", ok,
               witness=f"ranks {result['ranks']} on kernels {result['kernel_dims']}", trials=trials)
    return report
