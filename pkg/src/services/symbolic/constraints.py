"""
Boundary Constraints

The first-class constraint functionals of the boundary BFV theory and
the structural constraint ε_n(d_ω e − ½ ψ̄γψ) = e σ that boundary field
configurations are required to satisfy.
"""

import random
import re
from typing import Dict, Optional

from src.services.base_service import InputError
from src.services.clifford_service import GammaBasis
from src.services.symbolic.compiler import JetEnvironment, compile_expression, sample_environment, solve_linear_forms
from src.services.symbolic.components import CForm, wedge, bracket
from src.services.symbolic.expression import Expression
from src.services.symbolic.functional import LocalFunctional, local_functional
from src.services.symbolic.parser import parse
from src.services.symbolic.registry import FieldRegistry, boundary_registry

CONSTRAINT_TEXT: Dict[str, str] = {
    "L": "c^e^d[w](e) + 1/6*e^bar(psi)^G3^br(c,psi)",
    "P": ("1/2*i[xi](e^e)^F[w] + i[xi](w - w0)^e^d[w](e)"
          " - 1/6*e^bar(psi)^G3^L[xi,w0](psi)"),
    "M": "1/6*e^bar(d[w](chi))^G3^psi + 1/6*e^bar(chi)^G3^d[w](psi)",
    "H": "lam^eps^e^F[w] + 1/6*lam^eps^bar(psi)^G3^d[w](psi)",
    "J": "mu^e^F[w] + 1/6*mu^bar(psi)^G3^d[w](psi)",
}

# ghost parameter of each constraint
PARAMETERS: Dict[str, str] = {"L": "c", "P": "xi", "M": "chi", "H": "lam", "J": "mu"}

STRUCTURAL_TEXT = "eps^d[w](e) - 1/2*eps^bar(psi)^G1^psi"


def build_constraints(registry: Optional[FieldRegistry] = None, reference: str = "w0",
                      include_j: bool = False) -> Dict[str, LocalFunctional]:
    """
    L_c, P_ξ, M_χ, H_λ (and J_μ on request) with ω₀ renamed to `reference`.

    Raises:
        InputError: if the reference connection is not registered
    """
    registry = registry or boundary_registry()
    if reference not in registry:
        raise InputError(f"reference connection '{reference}' is not registered")
    out = {}
    for name, text in CONSTRAINT_TEXT.items():
        if name == "J" and not include_j:
            continue
        if reference != "w0":
            text = re.sub(r"\bw0\b", reference, text)
        out[name] = local_functional(name, text, registry)
    return out


def structural_form(env: JetEnvironment) -> CForm:
    """ε_n(d_ω e − ½ ψ̄γψ) − e σ at the jet point"""
    expr = parse(STRUCTURAL_TEXT, env.registry, raw=True)
    value = compile_expression(expr, env)
    if env.is_bound("sigma"):
        value = value - wedge(env.form("e"), env.form("sigma"))
    return value


def impose_structural_constraint(env: JetEnvironment) -> JetEnvironment:
    """
    Shift ω by an element of ker(e∧·) and solve for σ so that the
    structural constraint holds to the jet order.

    Raises:
        SingularSystemError: on a frame where the fix is not unique
    """
    ctx = env.ctx
    e = env.form("e")
    eps = env.form("eps")
    target = structural_form(env.with_bindings({"sigma": CForm(ctx, 1, 1)}))

    def equations(u: Dict[str, CForm]):
        return [
            wedge(e, u["sigma"]) + wedge(eps, bracket(u["v"], e, env.spin)),
            wedge(e, u["v"]),
        ]

    solution = solve_linear_forms(
        ctx,
        [("sigma", 1, 1, "none", False), ("v", 1, 2, "none", False)],
        equations,
        [target, CForm(ctx, 2, 3)],
        [(2, 2, "none"), (2, 3, "none")],
    )
    return env.with_bindings({"w": env.form("w") - solution["v"], "sigma": solution["sigma"]})


def sample_boundary_point(rng: random.Random, order: int, gammas: Optional[GammaBasis] = None,
                          max_formal: int = 3, registry: Optional[FieldRegistry] = None) -> JetEnvironment:
    """Random boundary jet point satisfying the structural constraint"""
    registry = registry or boundary_registry()
    env = sample_environment(registry, rng, order, gammas, max_formal=max_formal)
    return impose_structural_constraint(env)


SPINOR_FIELDS = frozenset({"psi", "chi"})


def pure_gravity_constraints(registry: Optional[FieldRegistry] = None,
                             reference: str = "w0") -> Dict[str, LocalFunctional]:
    """The constraints with every gravitino term dropped; M_χ disappears entirely"""
    out = {}
    for name, functional in build_constraints(registry, reference).items():
        terms = tuple(t for t in functional.normalized().terms
                      if not SPINOR_FIELDS & set(Expression((t,)).symbols()))
        if terms:
            out[name] = LocalFunctional(name, Expression(terms), functional.registry, functional.text)
    return out
