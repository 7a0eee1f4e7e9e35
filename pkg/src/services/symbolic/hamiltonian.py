"""
Hamiltonian Vector Fields

X_F is derived from ι_X ϖ = δF at a jet point. The δω-coefficient
fixes X_e, the δψ-coefficient then fixes X_ψ through e γ³, and the
δe-coefficient fixes e X_ω; the remaining kernel of e∧· is fixed by
asking X to preserve the structural constraint.
"""

from dataclasses import dataclass, field
from typing import Dict, List

from src.services.base_service import SingularSystemError, UnmatchedVariationError, ValidationError
from src.services.symbolic.compiler import JetEnvironment, unknown_forms, solve_affine
from src.services.symbolic.components import CForm, shape_basis, wedge
from src.services.symbolic.constraints import structural_form
from src.services.symbolic.functional import (
    LocalFunctional,
    Residual,
    eta_variation,
    euler_residual,
    local_functional,
    variation_density,
)
from src.services.symbolic.jets import Jet, euler

BOUNDARY_FIELDS = ("e", "w", "psi")

# ι_X ϖ with every δφ replaced by the formal variation u_φ
CONTRACTED_FORM_TEXT = ("e^X_e^u_w + e^X_w^u_e + 1/6*bar(X_psi)^G3^psi^u_e"
                        " + 1/6*X_e^bar(psi)^G3^u_psi + 1/3*e^bar(X_psi)^G3^u_psi")

SHAPES = {"e": (1, 1, "none"), "w": (1, 2, "none"), "psi": (1, 0, "column")}


@dataclass
class VectorFieldAssignment:
    """Components of X_F at one jet point, bare and e-dressed"""
    functional: str
    components: Dict[str, CForm] = field(default_factory=dict)
    dressed: Dict[str, CForm] = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            'functional': self.functional,
            'components': {
                name: {'shape': list(SHAPES[name][:2]), 'nonzero_entries': len(value.entries)}
                for name, value in self.components.items()
            },
        }


# ============================================================================
# MATCHING
# ============================================================================

def contracted_density(env: JetEnvironment, values: Dict[str, CForm]) -> Jet:
    """Density of ι_X ϖ for the given components (missing ones are zero)"""
    bindings = {f"u_{name}": env.formal(f"u_{name}", f"u:{name}") for name in BOUNDARY_FIELDS}
    for name in BOUNDARY_FIELDS:
        bindings[f"X_{name}"] = values.get(name, CForm(env.ctx, *SHAPES[name]))
    return local_functional("iota_X_varpi", CONTRACTED_FORM_TEXT, env.registry).density(env.with_bindings(bindings))


def variation_coefficients(density: Jet, name: str, env: JetEnvironment) -> List[Jet]:
    """Euler derivatives of a density along each component of u_name"""
    tag = f"u:{name}"
    linear = density.degree_in(tag, 1)
    return [euler(linear, tag, key) for key in shape_basis(env.ctx.dim, *SHAPES[name])]


def _unknown(env: JetEnvironment, label: str, name: str):
    k, l, kind = SHAPES[name]
    return label, k, l, kind, env.registry.lookup(f"X_{name}").is_odd


def _structural_variation(env: JetEnvironment, directions: Dict[str, CForm]) -> CForm:
    return eta_variation(env, directions, structural_form)


def derive_vector_field(functional: LocalFunctional, env: JetEnvironment) -> Dict[str, CForm]:
    """
    Bare components X_e, X_w, X_psi of X_F at a jet point satisfying the
    structural constraint.

    Raises:
        UnmatchedVariationError: naming the variation whose coefficient
            in δF is not matched by ι_X ϖ
    """
    ctx = env.ctx
    delta = variation_density(functional, env, BOUNDARY_FIELDS)
    targets = {name: variation_coefficients(delta, name, env) for name in BOUNDARY_FIELDS}
    stage = "w"
    try:
        unknowns = [_unknown(env, "e", "e")]
        rows = variation_coefficients(contracted_density(env, unknown_forms(ctx, unknowns)), "w", env)
        x_e = solve_affine(ctx, unknowns, rows, targets["w"])["e"]

        stage = "psi"
        unknowns = [_unknown(env, "psi", "psi")]
        formal = unknown_forms(ctx, unknowns)
        rows = variation_coefficients(contracted_density(env, {"e": x_e, "psi": formal["psi"]}), "psi", env)
        x_psi = solve_affine(ctx, unknowns, rows, targets["psi"])["psi"]

        stage = "e"
        sigma_odd = not env.registry.lookup("sigma").is_odd
        unknowns = [_unknown(env, "w", "w"), ("s", 1, 1, "none", sigma_odd)]
        formal = unknown_forms(ctx, unknowns)
        rows = variation_coefficients(contracted_density(env, {"e": x_e, "w": formal["w"], "psi": x_psi}), "e", env)
        preserved = _structural_variation(env, {"e": x_e, "psi": x_psi, "w": formal["w"], "sigma": formal["s"]})
        rows += [preserved.entry(key) for key in shape_basis(ctx.dim, 2, 2, "none")]
        rhs = targets["e"] + [Jet.zero(ctx)] * (len(rows) - len(targets["e"]))
        x_w = solve_affine(ctx, unknowns, rows, rhs)["w"]
    except SingularSystemError as e:
        raise UnmatchedVariationError(stage, f"X_{functional.name}: δ{stage} is not matched ({e})") from e
    return {"e": x_e, "w": x_w, "psi": x_psi}


def hamiltonian_vf(functional: LocalFunctional, env: JetEnvironment) -> VectorFieldAssignment:
    """
    X_F of a ghost-number-one boundary functional at a jet point.

    Raises:
        ValidationError: if F is not a ghost-number-one boundary functional
        UnmatchedVariationError: naming the first unmatched variation
    """
    if functional.domain != "boundary" or functional.ghost_number() != 1:
        raise ValidationError(f"{functional.name}: Hamiltonian vector fields need a ghost-one boundary functional")
    components = derive_vector_field(functional, env)
    e = env.form("e")
    dressed = {
        "w": wedge(e, components["w"]),
        "psi": wedge(e, wedge(env.gamma(3), components["psi"])),
    }
    return VectorFieldAssignment(functional.name, components, dressed)


# ============================================================================
# ROUND TRIP
# ============================================================================

def round_trip_residual(functional: LocalFunctional, vector_field: Dict[str, CForm],
                        env: JetEnvironment) -> Residual:
    """
    ι_X ϖ − δF modulo d, component by component in the formal variations.
    """
    difference = contracted_density(env, vector_field) - variation_density(functional, env, BOUNDARY_FIELDS)
    residual = Residual()
    for name in BOUNDARY_FIELDS:
        residual = residual.merge(euler_residual(difference, f"u:{name}", f"δ{name}"))
    return residual


def require_matched(name: str, residual: Residual) -> None:
    """
    Raises:
        UnmatchedVariationError: naming the first variation left unmatched
    """
    if residual.is_zero:
        return
    label = sorted(residual.components)[0]
    raise UnmatchedVariationError(label.split("[")[0].lstrip("δ"), f"X_{name}: {residual.witness()}")
