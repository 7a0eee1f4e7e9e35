"""
Classical Master Equation

For an action S = S₀ + Σ (Qφ) φ‡ linear in antifields,
(S, S) ≡ 2 Q(S₀) + 2 Σ (Q²φ) φ‡ modulo d, so the master equation holds
exactly when Q is cohomological on the fields and Q(S₀) is a total
derivative. Both are checked at random bulk jet points.
"""

import random
from dataclasses import dataclass, field
from typing import Dict, Optional

from src.services.scalars import frac
from src.services.symbolic.compiler import JetEnvironment, compile_expression, sample_environment
from src.services.symbolic.components import CForm, VectorField, vector_bracket
from src.services.symbolic.functional import (
    ETA_TAG,
    Residual,
    euler_residual,
    eta_variation,
    local_functional,
    perturb,
    pointwise_residual,
    scale_value,
)
from src.services.symbolic.jets import Jet
from src.services.symbolic.parser import parse
from src.services.symbolic.registry import FieldRegistry, bulk_registry

FIELDS = ("e", "w", "c", "xi")

# one formal variation times the odd parameter η
CME_MAX_FORMAL = 2


@dataclass
class BVAction:
    """
    S₀ plus the antifield-linear part, given as Q on each field.
    The diffeomorphism ghost gets Qξ = xi_scale·[ξ, ξ].
    """
    name: str
    s0: str
    q: Dict[str, str] = field(default_factory=dict)
    xi_scale: object = frac(1, 2)

    def integrand_text(self) -> str:
        parts = [self.s0] if self.s0 else []
        for name, text in self.q.items():
            parts.append(f"({text})^{name}_dag")
        if self.xi_scale:
            parts.append("1/2*i[[xi,xi]](xi_dag)")
        return " + ".join(parts) or "0"

    def to_dict(self) -> dict:
        return {'name': self.name, 'action': self.integrand_text()}


def pc_bv_action() -> BVAction:
    """Palatini–Cartan BV action"""
    return BVAction(
        "palatini-cartan",
        "1/2*e^e^F[w]",
        {
            "e": "L[xi,w](e) - br(c,e)",
            "w": "i[xi](F[w]) - d[w](c)",
            "c": "1/2*i[xi](i[xi](F[w])) - 1/2*br(c,c)",
        },
    )


def truncated_pc_action() -> BVAction:
    """The PC action with the ghost self-interactions dropped; Q² ≠ 0"""
    action = pc_bv_action()
    return BVAction("pc-without-ghost-terms", action.s0,
                    {**action.q, "c": "1/2*i[xi](i[xi](F[w]))"}, xi_scale=0)


# ============================================================================
# Q AT A JET POINT
# ============================================================================

def q_values(action: BVAction, env: JetEnvironment) -> Dict[str, object]:
    values: Dict[str, object] = {}
    for name in FIELDS:
        if name == "xi":
            xi = env.vector("xi")
            if action.xi_scale:
                values[name] = vector_bracket(xi, xi).scaled(action.xi_scale)
            else:
                values[name] = VectorField([Jet.zero(env.ctx)] * env.ctx.dim, 0)
        elif name in action.q:
            values[name] = compile_expression(parse(action.q[name], env.registry, raw=True), env)
        else:
            values[name] = CForm.zero(env.ctx)
    return values


def q_squared_residual(action: BVAction, env: JetEnvironment) -> Residual:
    """Q(Qφ) at the origin for every field"""
    directions = q_values(action, env)
    residual = Residual()
    for name in FIELDS:
        if name == "xi":
            eta = Jet.formal(env.ctx, ETA_TAG, (), True)
            var = (ETA_TAG, (), env.ctx.origin, 1)
            shifted = perturb(env, {k: scale_value(v, eta) for k, v in directions.items()})
            qxi = q_values(action, shifted)["xi"]
            comps = {((mu,), (), None): c.left_derivative(var) for mu, c in enumerate(qxi.components)}
            residual = residual.merge(pointwise_residual(CForm(env.ctx, 1, 0, "none", comps), "Q²xi"))
            continue
        if name not in action.q:
            continue
        value = eta_variation(env, directions, lambda point, n=name: q_values(action, point)[n])
        residual = residual.merge(pointwise_residual(value, f"Q²{name}"))
    return residual


def q_s0_residual(action: BVAction, env: JetEnvironment) -> Residual:
    """Euler derivatives of Q(S₀) along formal variations of each field"""
    if not action.s0:
        return Residual()
    s0 = local_functional("S0", action.s0, env.registry)
    eta = Jet.formal(env.ctx, ETA_TAG, (), True)
    var = (ETA_TAG, (), env.ctx.origin, 1)
    residual = Residual()
    for name in FIELDS:
        tag = f"v:{name}"
        point = perturb(env, {name: env.formal(name, tag)})
        directions = q_values(action, point)
        shifted = perturb(point, {k: scale_value(v, eta) for k, v in directions.items()})
        density = s0.density(shifted).left_derivative(var)
        residual = residual.merge(euler_residual(density, tag, f"E[{name}]QS0"))
    return residual


def cme_residual(action: BVAction, trials: int = 1, seed: int = 0, order: int = 4,
                 registry: Optional[FieldRegistry] = None) -> Residual:
    """
    (S, S) modulo d, as the union of the Q² and Q(S₀) residuals over
    random bulk jet points. Zero means the master equation holds.
    """
    registry = registry or bulk_registry()
    rng = random.Random(seed)
    for _ in range(trials):
        env = sample_environment(registry, rng, order, names=FIELDS, max_formal=CME_MAX_FORMAL)
        residual = q_squared_residual(action, env).merge(q_s0_residual(action, env))
        if not residual.is_zero:
            return residual
    return Residual()
