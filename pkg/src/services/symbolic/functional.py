"""
Local Functionals

A LocalFunctional is a top-degree integrand. Equality modulo total
derivatives is decided by the Euler operator at random jet points: a
polynomial density is a divergence exactly when every variational
derivative vanishes identically.
"""

import random
from dataclasses import dataclass, field
from typing import Callable, Dict, Iterable, List, Optional, Sequence

from src.services.base_service import InputError, ValidationError
from src.services.scalars import format_gauss, frac
from src.services.symbolic.calculus import normalize
from src.services.symbolic.compiler import JetEnvironment, Value, compile_expression
from src.services.symbolic.components import CForm, VectorField, bracket, iota, lie, top_coefficient, vector_bracket
from src.services.symbolic.expression import Expression, term_degree, to_text
from src.services.symbolic.jets import Jet, euler, formal_components
from src.services.symbolic.parser import parse
from src.services.symbolic.registry import FieldRegistry

ETA_TAG = "eta"
THETA_TAG = "theta"


@dataclass
class LocalFunctional:
    """∫ integrand over the boundary or the bulk"""
    name: str
    integrand: Expression
    registry: FieldRegistry
    text: str = ""

    @property
    def domain(self) -> str:
        return self.registry.domain

    def normalized(self) -> Expression:
        return normalize(self.integrand, self.registry)

    def ghost_number(self) -> int:
        """
        Raises:
            ValidationError: if the terms disagree or are not top forms
        """
        ghosts = set()
        for term in self.normalized().terms:
            deg = term_degree(term, self.registry)
            if (deg.k, deg.l) != (self.registry.base_dim, 4):
                raise ValidationError(f"{self.name}: term of degree ({deg.k},{deg.l}) is not a top form")
            ghosts.add(deg.ghost)
        if len(ghosts) > 1:
            raise ValidationError(f"{self.name}: mixed ghost numbers {sorted(ghosts)}")
        return ghosts.pop() if ghosts else 0

    def density(self, env: JetEnvironment) -> Jet:
        return top_coefficient(compile_expression(self.integrand, env))

    def symbols(self) -> List[str]:
        return sorted(set(self.integrand.symbols()))

    def to_dict(self) -> dict:
        return {
            'name': self.name,
            'domain': self.domain,
            'integrand': to_text(self.normalized()),
        }


def local_functional(name: str, text: str, registry: FieldRegistry) -> LocalFunctional:
    return LocalFunctional(name, parse(text, registry, raw=True), registry, text)


# ============================================================================
# RESIDUALS
# ============================================================================

def format_jet(jet: Jet, limit: int = 3) -> str:
    """Short human-readable rendering of a jet (first few terms)"""
    if jet.is_zero():
        return "0"
    parts = []
    for (formal, x, g), c in sorted(jet.terms.items(), key=lambda item: repr(item[0]))[:limit]:
        factors = [format_gauss(c)]
        factors += [f"{var[0]}{list(var[1])}" for var in formal]
        if any(x):
            factors.append("x^" + "".join(str(a) for a in x))
        if g:
            factors.append("θ" + ".".join(str(i) for i in g))
        parts.append("·".join(factors))
    more = len(jet.terms) - limit
    return " + ".join(parts) + (f" + …({more} more)" if more > 0 else "")


@dataclass
class Residual:
    """Nonzero Euler components left after a comparison, keyed by label"""
    components: Dict[str, str] = field(default_factory=dict)

    @property
    def is_zero(self) -> bool:
        return not self.components

    def merge(self, other: "Residual") -> "Residual":
        merged = dict(self.components)
        merged.update(other.components)
        return Residual(merged)

    def witness(self) -> Optional[str]:
        if self.is_zero:
            return None
        label = sorted(self.components)[0]
        return f"{label}: {self.components[label]}"

    def to_dict(self) -> dict:
        return {'zero': self.is_zero, 'components': dict(sorted(self.components.items()))}


def euler_residual(density: Jet, tag: str, label: Optional[str] = None) -> Residual:
    """Nonzero Euler derivatives at the origin along the formal field `tag`"""
    linear = density.degree_in(tag, 1)
    residual = Residual()
    for comp in formal_components(linear, tag):
        value = euler(linear, tag, comp).at_origin()
        if not value.is_zero():
            residual.components[f"{label or tag}{list(comp)}"] = format_jet(value)
    return residual


def pointwise_residual(form: CForm, label: str) -> Residual:
    """Nonzero components of a form at the origin"""
    residual = Residual()
    for key, value in sorted(form.entries.items(), key=lambda item: repr(item[0])):
        value = value.at_origin()
        if not value.is_zero():
            residual.components[f"{label}{list(key)}"] = format_jet(value)
    return residual


# ============================================================================
# PERTURBATIONS
# ============================================================================

def add_values(a: Value, b: Value) -> Value:
    if isinstance(a, VectorField):
        return a + b
    if isinstance(a, CForm):
        return a + b
    return [x + y for x, y in zip(a, b)]


def scale_value(value: Value, jet: Jet) -> Value:
    """jet · value with the jet in front of every coefficient"""
    if isinstance(value, VectorField):
        return VectorField([jet * c for c in value.components], value.parity + (1 if _is_odd(jet) else 0))
    if isinstance(value, CForm):
        return value.times(jet)
    return [jet * c for c in value]


def _is_odd(jet: Jet) -> bool:
    for (formal, _, g), _ in jet.terms.items():
        return bool((sum(v[3] for v in formal) + len(g)) % 2)
    return False


def perturb(env: JetEnvironment, shifts: Dict[str, Value]) -> JetEnvironment:
    """Environment with φ → φ + shift for each named field"""
    values = {}
    for name, shift in shifts.items():
        current = _current(env, name)
        values[name] = add_values(current, shift) if current is not None else shift
    return env.with_bindings(values)


def _current(env: JetEnvironment, name: str) -> Optional[Value]:
    if name in env.forms:
        return env.forms[name]
    if name in env.vectors:
        return env.vectors[name]
    if name in env.covectors:
        return env.covectors[name]
    return None


def eta_variation(env: JetEnvironment, directions: Dict[str, Value],
                  fn: Callable[[JetEnvironment], CForm]) -> CForm:
    """
    The odd-parameter derivative: fn(φ + η X) = fn(φ) + η·(result).

    η is an odd formal constant, so for odd X the shift η X is even as
    it must be.
    """
    eta = Jet.formal(env.ctx, ETA_TAG, (), True)
    var = (ETA_TAG, (), env.ctx.origin, 1)
    shifted = perturb(env, {name: scale_value(value, eta) for name, value in directions.items()})
    return fn(shifted).map_entries(lambda jet: jet.left_derivative(var))


def variation_density(functional: LocalFunctional, env: JetEnvironment, fields: Sequence[str],
                      prefix: str = "u:") -> Jet:
    """
    δF as a density linear in formal variations `prefix+field`, obtained
    from F(φ + θ u) with an odd formal θ.
    """
    theta = Jet.formal(env.ctx, THETA_TAG, (), True)
    shifts = {}
    for name in fields:
        entry = env.registry.lookup(name)
        u = env.formal(name, prefix + name, odd=not entry.is_odd)
        shifts[name] = scale_value(u, theta)
    var = (THETA_TAG, (), env.ctx.origin, 1)
    return functional.density(perturb(env, shifts)).left_derivative(var)


# ============================================================================
# EULER OPERATOR
# ============================================================================

def variational_derivative(functional: LocalFunctional, field_name: str, env: JetEnvironment) -> Dict[tuple, Jet]:
    """
    E_φ(F) component by component at the jet point.

    Raises:
        InputError: if the field is not registered or not bound
    """
    entry = functional.registry.lookup(field_name)
    if not env.is_bound(field_name):
        raise InputError(f"'{field_name}' is not bound at this jet point")
    tag = f"var:{field_name}"
    u = env.formal(field_name, tag, odd=entry.is_odd)
    linear = functional.density(perturb(env, {field_name: u})).degree_in(tag, 1)
    return {comp: euler(linear, tag, comp) for comp in formal_components(linear, tag)}


def _varied_fields(functionals: Iterable[LocalFunctional], env: JetEnvironment) -> List[str]:
    names = set()
    for functional in functionals:
        for name in functional.symbols():
            entry = functional.registry.lookup(name)
            if entry.role in ("dynamical", "antifield") and env.is_bound(name) and not entry.curvature_of:
                names.add(name)
            if entry.curvature_of and env.is_bound(entry.curvature_of):
                names.add(entry.curvature_of)
    return sorted(names)


def difference_residual(a: LocalFunctional, b: LocalFunctional, env: JetEnvironment,
                        fields: Optional[Sequence[str]] = None) -> Residual:
    """Euler derivatives of a − b at the origin of one jet point"""
    if a.registry.domain != b.registry.domain:
        raise ValidationError("functionals live on different domains")
    fields = list(fields) if fields is not None else _varied_fields([a, b], env)
    residual = Residual()
    for name in fields:
        entry = env.registry.lookup(name)
        tag = f"var:{name}"
        shifted = perturb(env, {name: env.formal(name, tag, odd=entry.is_odd)})
        density = a.density(shifted) - b.density(shifted)
        residual = residual.merge(euler_residual(density, tag, f"E[{name}]"))
    return residual


def equals_mod_d(a: LocalFunctional, b: LocalFunctional,
                 sampler: Callable[[random.Random], JetEnvironment], trials: int = 2, seed: int = 0,
                 fields: Optional[Sequence[str]] = None) -> Residual:
    """
    a ≡ b modulo total derivatives, tested at `trials` random jet points.
    Returns the first nonzero residual (zero residual on success).
    """
    rng = random.Random(seed)
    for _ in range(trials):
        residual = difference_residual(a, b, sampler(rng), fields)
        if not residual.is_zero:
            return residual
    return Residual()


# ============================================================================
# POINTWISE IDENTITIES
# ============================================================================

def lie_square_residual(env: JetEnvironment, target: str, vector: str = "xi", connection: str = "w0") -> Residual:
    """
    L_ξ L_ξ A − ½ L_{[ξ,ξ]} A − ½ [ι_ξ ι_ξ F, A] at the origin, for an
    odd ξ and covariant Lie derivatives along `connection`.
    """
    xi = env.vector(vector)
    if xi.parity != 1:
        raise ValidationError("the square identity needs an odd vector field")
    conn = env.form(connection)
    a = env.form(target)
    square = lie(xi, conn, lie(xi, conn, a, env.spin), env.spin)
    half_bracket = lie(vector_bracket(xi, xi), conn, a, env.spin).scaled(frac(1, 2))
    curvature = env.form(f"F[{connection}]")
    twice = iota(xi, iota(xi, curvature))
    return pointwise_residual(square - half_bracket - bracket(twice, a, env.spin).scaled(frac(1, 2)), "LL")
