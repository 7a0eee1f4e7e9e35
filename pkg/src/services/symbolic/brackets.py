"""
Constraint Brackets

{F, G} = X_F(G): the variation δG with every formal variation u_φ
replaced by the component X_F^φ. Table rows are compared modulo total
derivatives in the linear part of a formal ghost parameter.
"""

import random
from dataclasses import dataclass
from typing import Dict, List, Optional, Tuple

from src.services.base_service import UnmatchedVariationError
from src.services.scalars import frac
from src.services.symbolic.compiler import JetEnvironment, compile_expression, frame_components, solve_linear_forms
from src.services.symbolic.components import CForm, iota, shape_basis, vector_bracket, wedge
from src.services.symbolic.constraints import PARAMETERS, build_constraints, sample_boundary_point
from src.services.symbolic.functional import (
    LocalFunctional,
    Residual,
    add_values,
    euler_residual,
    local_functional,
    variation_density,
)
from src.services.symbolic.hamiltonian import BOUNDARY_FIELDS, hamiltonian_vf
from src.services.symbolic.jets import Jet
from src.services.symbolic.parser import parse

PARAMETER_TAG = "p"


@dataclass(frozen=True)
class BracketRow:
    """One row of the constraint bracket table"""
    row_id: str
    left: str
    right: str
    expected: str
    anchor: str


BRACKET_TABLE: List[BracketRow] = [
    BracketRow("L,L", "L", "L", "-1/2 L_[c,c]", "App. C, {L_c,L_c}"),
    BracketRow("L,M", "L", "M", "M_[c,chi]", "App. C, {L_c,M_χ}"),
    BracketRow("L,P", "L", "P", "L_(L_xi c)", "App. C, {L_c,P_ξ}"),
    BracketRow("P,M", "P", "M", "-M_(L_xi chi)", "App. C, {P_ξ,M_χ}"),
    BracketRow("P,P", "P", "P", "1/2 P_[xi,xi] - 1/2 L_(i_xi i_xi F[w0])", "App. C, {P_ξ,P_ξ}"),
    BracketRow("H,H", "H", "H", "0", "App. C, {H_λ,H_λ}"),
    BracketRow("L,H", "L", "H", "-P_zeta + L_(i_zeta(w-w0)) + M_(i_zeta psi) - H_(zeta^n)", "App. C, {L_c,H_λ}"),
    BracketRow("M,H", "M", "H", "L_(alpha(eps X_M^w))", "App. C, {M_χ,H_λ}"),
    BracketRow("P,H", "P", "H", "P_theta - L_(i_theta(w-w0)) - M_(i_theta psi) + H_(theta^n)", "App. C, {P_ξ,H_λ}"),
    BracketRow("M,M", "M", "M",
               "1/2 P_phi - 1/2 L_(i_phi(w-w0)) - 1/2 M_(i_phi psi) + 1/2 H_(phi^n)", "App. C, {M_χ,M_χ}"),
]

# sign-flipped spinor term of L_c, used as a negative control
PERTURBED_L_TEXT = "c^e^d[w](e) - 1/6*e^bar(psi)^G3^br(c,psi)"


def _compile(text: str, env: JetEnvironment) -> CForm:
    return compile_expression(parse(text, env.registry, raw=True), env)


def bracket_density(x_f: Dict[str, CForm], g: LocalFunctional, env: JetEnvironment) -> Jet:
    """Density of X_F(G) for precomputed components of X_F"""
    delta = variation_density(g, env, BOUNDARY_FIELDS)
    for name in BOUNDARY_FIELDS:
        value = x_f[name]
        comps = {key: value.entry(key) for key in shape_basis(env.ctx.dim, *_shape(env, name))}
        delta = delta.substitute(f"u:{name}", comps)
    return delta


def _shape(env: JetEnvironment, name: str):
    form = env.form(name)
    return form.k, form.l, form.kind


def poisson_bracket_density(f: LocalFunctional, g: LocalFunctional, env: JetEnvironment) -> Jet:
    return bracket_density(hamiltonian_vf(f, env).components, g, env)


# ============================================================================
# RIGHT-HAND SIDES
# ============================================================================

def _density(functional: LocalFunctional, env: JetEnvironment, **bindings) -> Jet:
    return functional.density(env.with_bindings(bindings))


def _frame_split_rhs(env: JetEnvironment, f: Dict[str, LocalFunctional], u: CForm, scale) -> Jet:
    """
    scale·(P_v − L_{ι_v(ω−ω₀)} − M_{ι_v ψ} + H_{v^n}) for u = v^i e_i + v^n ε_n
    """
    vector, normal = frame_components(env, u, 0)
    shift = env.form("w") - env.form("w0")
    total = (_density(f["P"], env, xi=vector)
             - _density(f["L"], env, c=iota(vector, shift))
             - _density(f["M"], env, chi=iota(vector, env.form("psi")))
             + _density(f["H"], env, lam=CForm.scalar(normal)))
    return total.scaled(scale)


def _alpha_split(env: JetEnvironment, theta: CForm) -> CForm:
    """α in e α + ε_n β = Θ with e β = 0"""
    ctx = env.ctx
    e, eps = env.form("e"), env.form("eps")
    solution = solve_linear_forms(
        ctx,
        [("alpha", 0, 2, "none", True), ("beta", 1, 2, "none", True)],
        lambda u: [wedge(e, u["alpha"]) + wedge(eps, u["beta"]), wedge(e, u["beta"])],
        [theta, CForm(ctx, 2, 3)],
        [(1, 3, "none"), (2, 3, "none")],
    )
    return solution["alpha"]


def expected_density(row: BracketRow, env: JetEnvironment, f: Dict[str, LocalFunctional],
                     x_f: Optional[Dict[str, CForm]] = None) -> Jet:
    """Density of the tabulated right-hand side; `x_f` is the left vector field at env"""
    half = frac(1, 2)
    if row.row_id == "L,L":
        return _density(f["L"], env, c=_compile("br(c,c)", env)).scaled(-half)
    if row.row_id == "L,M":
        return _density(f["M"], env, chi=_compile("br(c,chi)", env))
    if row.row_id == "L,P":
        return _density(f["L"], env, c=_compile("L[xi,w0](c)", env))
    if row.row_id == "P,M":
        return -_density(f["M"], env, chi=_compile("L[xi,w0](chi)", env))
    if row.row_id == "P,P":
        xi = env.vector("xi")
        return (_density(f["P"], env, xi=vector_bracket(xi, xi)).scaled(half)
                - _density(f["L"], env, c=_compile("i[xi](i[xi](F[w0]))", env)).scaled(half))
    if row.row_id == "H,H":
        return Jet.zero(env.ctx)
    if row.row_id == "L,H":
        return _frame_split_rhs(env, f, _compile("br(c,lam^eps)", env), -1)
    if row.row_id == "P,H":
        return _frame_split_rhs(env, f, _compile("L[xi,w0](lam^eps)", env), 1)
    if row.row_id == "M,H":
        x_m = x_f if x_f is not None else hamiltonian_vf(f["M"], env).components
        alpha = _alpha_split(env, wedge(env.form("eps"), x_m["w"]))
        return _density(f["L"], env, c=alpha)
    if row.row_id == "M,M":
        return _frame_split_rhs(env, f, _compile("bar(chi)^G1^chi", env), half)
    raise KeyError(row.row_id)


# ============================================================================
# ROW CHECKS
# ============================================================================

def with_formal_parameter(env: JetEnvironment, constraint: str) -> JetEnvironment:
    """Add a formal field to the constraint's ghost parameter"""
    name = PARAMETERS[constraint]
    formal = env.formal(name, PARAMETER_TAG)
    current = env.vectors.get(name) if env.registry.lookup(name).is_vector else env.forms.get(name)
    return env.with_bindings({name: add_values(current, formal)})


def prepare_left(env: JetEnvironment, constraint: str,
                 functional: LocalFunctional) -> Tuple[JetEnvironment, Dict[str, CForm]]:
    """The point with a formal left parameter and X_F there"""
    point = with_formal_parameter(env, constraint)
    return point, hamiltonian_vf(functional, point).components


def row_residual(row: BracketRow, env: JetEnvironment, constraints: Dict[str, LocalFunctional],
                 left: Optional[LocalFunctional] = None, right: Optional[LocalFunctional] = None,
                 prepared: Optional[Tuple[JetEnvironment, Dict[str, CForm]]] = None) -> Residual:
    """
    Linear part in the left parameter of {F, G} − RHS, modulo d.

    `left`/`right` override the functionals; X_F is derived from the
    left functional unless `prepared` carries it.
    """
    f = left or constraints[row.left]
    point, x_f = prepared or prepare_left(env, row.left, f)
    g = right or constraints[row.right]
    lhs = bracket_density(x_f, g, point)
    rhs_constraints = dict(constraints)
    rhs_constraints[row.left] = f
    rhs = expected_density(row, point, rhs_constraints, x_f)
    return euler_residual(lhs - rhs, PARAMETER_TAG, f"{row.row_id}")


def control_residual(env: JetEnvironment, constraints: Dict[str, LocalFunctional]) -> Residual:
    """
    {L'_c, L'_c} against −½ L'_[c,c] for the sign-flipped L'; must not
    vanish. An L' without a Hamiltonian vector field counts as failing.
    """
    perturbed = local_functional("L'", PERTURBED_L_TEXT, env.registry)
    try:
        return row_residual(BRACKET_TABLE[0], env, constraints, left=perturbed, right=perturbed)
    except UnmatchedVariationError as e:
        return Residual({"X_L'": str(e)})


def verify_rows(rows: List[BracketRow], trials: int, seed: int, order: int,
                gammas=None) -> Dict[str, Residual]:
    """
    First nonzero residual of each row over `trials` boundary jet points.
    X_F is derived once per left constraint and point.
    """
    constraints = build_constraints()
    rng = random.Random(seed)
    out: Dict[str, Residual] = {row.row_id: Residual() for row in rows}
    for _ in range(trials):
        env = sample_boundary_point(rng, order, gammas)
        prepared: Dict[str, Tuple[JetEnvironment, Dict[str, CForm]]] = {}
        for row in rows:
            if not out[row.row_id].is_zero:
                continue
            if row.left not in prepared:
                prepared[row.left] = prepare_left(env, row.left, constraints[row.left])
            out[row.row_id] = row_residual(row, env, constraints, prepared=prepared[row.left])
    return out
