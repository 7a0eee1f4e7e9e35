"""
Jet-Point Compiler

Evaluates expressions at a jet point: every registered symbol is bound
to a form (or vector field) with Jet coefficients and composite factors
are evaluated directly, without symbolic expansion.
"""

import random
from typing import Callable, Dict, List, Optional, Sequence, Tuple, Union

from src.services.base_service import InputError, SingularSystemError, ValidationError
from src.services.clifford_service import ETA, GammaBasis, build_gamma_basis
from src.services.exact_linalg import pivot_rows
from src.services.fiber_service import Frame, random_frame
from src.services.scalars import gq
from src.services.symbolic.components import (
    CForm,
    SpinMatrices,
    VectorField,
    base_contract,
    bracket,
    covariant_d,
    covector_pairing,
    curvature,
    dirac_bar,
    exterior_d,
    gamma_power,
    iota,
    lie,
    shape_basis,
    wedge,
    wedge_all,
)
from src.services.symbolic.expression import (
    Angle,
    Apply,
    Atom,
    Bar,
    Br,
    Bracket,
    Contract,
    Expression,
    Gamma,
    Paren,
    Sym,
    Term,
)
from src.services.symbolic.jets import Jet, JetContext, random_series, solve_series
from src.services.symbolic.registry import FieldRegistry, FieldRegistryEntry

Value = Union[CForm, VectorField, List[Jet]]


def entry_shape(entry: FieldRegistryEntry) -> Tuple[int, int, str]:
    if entry.is_spinor:
        return entry.form_degree, entry.v_degree, "column"
    if entry.bundle == "scalar":
        return entry.form_degree, 0, "none"
    return entry.form_degree, entry.v_degree, "none"


class JetEnvironment:
    """Bindings of registered symbols to jet-valued forms"""

    def __init__(self, registry: FieldRegistry, ctx: JetContext, gammas: GammaBasis,
                 frame: Optional[Frame] = None):
        self.registry = registry
        self.ctx = ctx
        self.gammas = gammas
        self.frame = frame
        self.spin = SpinMatrices(ctx, gammas)
        self.forms: Dict[str, CForm] = {}
        self.vectors: Dict[str, VectorField] = {}
        self.covectors: Dict[str, List[Jet]] = {}
        self._gamma: Dict[int, CForm] = {}
        self._curvature: Dict[str, CForm] = {}
        self._inverse_frame: Optional[List[List[Jet]]] = None

    # ------------------------------------------------------------------
    # bindings
    # ------------------------------------------------------------------

    def bind(self, name: str, value: Value) -> None:
        entry = self.registry.lookup(name)
        if isinstance(value, VectorField):
            if not entry.is_vector:
                raise ValidationError(f"'{name}' is not a vector field")
            self.vectors[name] = value
        elif isinstance(value, CForm):
            self.forms[name] = value
        else:
            self.covectors[name] = list(value)
        self._curvature.clear()
        if name == "e":
            self._inverse_frame = None

    def with_bindings(self, values: Dict[str, Value]) -> "JetEnvironment":
        """Copy with some symbols rebound; derived caches start empty"""
        env = JetEnvironment(self.registry, self.ctx, self.gammas, self.frame)
        env.spin = self.spin
        env._gamma = self._gamma
        env.forms = dict(self.forms)
        env.vectors = dict(self.vectors)
        env.covectors = dict(self.covectors)
        for name, value in values.items():
            env.bind(name, value)
        return env

    def is_bound(self, name: str) -> bool:
        return name in self.forms or name in self.vectors or name in self.covectors

    def form(self, name: str) -> CForm:
        if name in self.forms:
            return self.forms[name]
        entry = self.registry.lookup(name)
        if entry.curvature_of:
            if name not in self._curvature:
                self._curvature[name] = curvature(self.form(entry.curvature_of), self.spin)
            return self._curvature[name]
        raise InputError(f"'{name}' is not bound at this jet point")

    def vector(self, name: str) -> VectorField:
        if name not in self.vectors:
            raise InputError(f"vector field '{name}' is not bound at this jet point")
        return self.vectors[name]

    def gamma(self, n: int) -> CForm:
        if n not in self._gamma:
            self._gamma[n] = gamma_power(self.ctx, self.gammas, n)
        return self._gamma[n]

    # ------------------------------------------------------------------
    # frame data
    # ------------------------------------------------------------------

    def vielbein(self, mu: int, a: int) -> Jet:
        return self.form("e").entry(((mu,), (a,), None))

    def inverse_frame(self) -> List[List[Jet]]:
        """e^μ_b = g^{μν} e^b_ν η_b as series"""
        if self._inverse_frame is None:
            n = self.ctx.dim
            metric = [
                [_jet_sum(self.ctx, [(self.vielbein(m, a) * self.vielbein(k, a)).scaled(ETA[a]) for a in range(4)])
                 for k in range(n)]
                for m in range(n)
            ]
            columns = []
            for j in range(n):
                unit = [Jet.constant(self.ctx, 1 if i == j else 0) for i in range(n)]
                columns.append(solve_series(metric, unit))
            ginv = [[columns[nu][mu] for nu in range(n)] for mu in range(n)]
            self._inverse_frame = [
                [_jet_sum(self.ctx, [ginv[mu][nu] * self.vielbein(nu, b) for nu in range(n)]).scaled(ETA[b])
                 for b in range(4)]
                for mu in range(n)
            ]
        return self._inverse_frame

    def formal(self, name: str, tag: str, odd: Optional[bool] = None) -> Value:
        """A field whose jet coordinates are the formal variables `tag`"""
        entry = self.registry.lookup(name)
        odd = entry.is_odd if odd is None else odd
        return formal_value(self.ctx, entry, tag, odd)


def _jet_sum(ctx: JetContext, jets: Sequence[Jet]) -> Jet:
    total = Jet.zero(ctx)
    for jet in jets:
        total = total + jet
    return total


def formal_form(ctx: JetContext, tag: str, k: int, l: int, kind: str, odd: bool) -> CForm:
    return CForm(ctx, k, l, kind, {key: Jet.formal(ctx, tag, key, odd) for key in shape_basis(ctx.dim, k, l, kind)})


def formal_value(ctx: JetContext, entry: FieldRegistryEntry, tag: str, odd: bool) -> Value:
    if entry.is_vector:
        return VectorField([Jet.formal(ctx, tag, (mu,), odd) for mu in range(ctx.dim)], int(odd))
    if entry.bundle == "covector-density":
        return [Jet.formal(ctx, tag, (mu,), odd) for mu in range(ctx.dim)]
    return formal_form(ctx, tag, *entry_shape(entry), odd)


# ============================================================================
# SAMPLING
# ============================================================================

def random_value(ctx: JetContext, entry: FieldRegistryEntry, rng: random.Random,
                 frame: Optional[Frame] = None) -> Value:
    """Random jet of the entry's shape; the coframe starts at the sampled frame"""
    odd = entry.is_odd
    if entry.is_vector or entry.bundle == "covector-density":
        comps = [random_series(ctx, rng, odd) for _ in range(ctx.dim)]
        return VectorField(comps, int(odd)) if entry.is_vector else comps
    k, l, kind = entry_shape(entry)
    entries = {}
    for key in shape_basis(ctx.dim, k, l, kind):
        constant = None
        if entry.name == "e" and frame is not None:
            constant = frame.e[key[0][0]][key[1][0]]
        entries[key] = random_series(ctx, rng, odd, constant=constant)
    if entry.name == "eps" and frame is not None and frame.epsilon_n is not None:
        entries = {((), (a,), None): Jet.constant(ctx, frame.epsilon_n[a]) for a in range(4)}
    return CForm(ctx, k, l, kind, entries)


def sample_environment(registry: FieldRegistry, rng: random.Random, order: int,
                       gammas: Optional[GammaBasis] = None, names: Optional[Sequence[str]] = None,
                       max_formal: int = 3, num_generators: int = 16) -> JetEnvironment:
    """
    Random jet point for the given symbols (default: every dynamical
    field, ghost and fixed parameter of the registry).
    """
    ctx = JetContext(registry.base_dim, order, max_formal=max_formal, num_generators=num_generators)
    frame = random_frame(rng, registry.base_dim)
    env = JetEnvironment(registry, ctx, gammas or build_gamma_basis(), frame)
    if names is None:
        names = [entry.name for entry in registry.entries()
                 if entry.role in ("dynamical", "parameter") and entry.name != "mu"]
    for name in names:
        env.bind(name, random_value(ctx, registry.lookup(name), rng, frame))
    if "mu" in registry and "mu" not in names and all(env.is_bound(n) for n in ("lam", "eps", "xi", "e")):
        env.bind("mu", ghost_mu(env))
    return env


def ghost_mu(env: JetEnvironment) -> CForm:
    """μ = λε_n + ι_ξ e"""
    lam = env.form("lam")
    return wedge(lam, env.form("eps")) + iota(env.vector("xi"), env.form("e"))


# ============================================================================
# COMPILATION
# ============================================================================

def compile_expression(expr: Expression, env: JetEnvironment) -> CForm:
    total = CForm.zero(env.ctx)
    for term in expr.terms:
        total = total + compile_term(term, env)
    return total


def compile_term(term: Term, env: JetEnvironment) -> CForm:
    if not term.atoms:
        return CForm.scalar(Jet.constant(env.ctx, term.coefficient))
    return wedge_all([compile_atom(atom, env) for atom in term.atoms]).scaled(term.coefficient)


def apply_decoration(op: Tuple, x: CForm, env: JetEnvironment) -> CForm:
    kind = op[0]
    if kind == "d":
        return exterior_d(x) if op[1] is None else covariant_d(env.form(op[1]), x, env.spin)
    if kind == "i":
        return iota(env.vector(op[1]), x)
    if kind == "L":
        return lie(env.vector(op[1]), env.form(op[2]), x, env.spin)
    raise ValidationError("variations are taken by formal perturbation, not as a decoration")


def contract_frame(x: CForm, env: JetEnvironment) -> CForm:
    """⟨e, X⟩ = v_a η^{ab} e^μ_b ι_{∂_μ} X"""
    if x.k == 0:
        return CForm(env.ctx, 0, x.l + 1, x.kind)
    inv = env.inverse_frame()
    total = CForm(env.ctx, x.k - 1, x.l + 1, x.kind)
    for a in range(4):
        inner = CForm(env.ctx, x.k - 1, x.l, x.kind)
        for mu in range(env.ctx.dim):
            if not inv[mu][a].is_zero():
                inner = inner + base_contract(mu, x).times(inv[mu][a])
        v_a = CForm.constant(env.ctx, 0, 1, "none", {((), (a,), None): gq(ETA[a])})
        total = total + wedge(v_a, inner)
    return total


def compile_atom(atom: Atom, env: JetEnvironment) -> CForm:
    if isinstance(atom, Sym):
        value = env.form(atom.name)
        for op in atom.ops:
            value = apply_decoration(op, value, env)
        return dirac_bar(value, env.gammas) if atom.bar else value
    if isinstance(atom, Gamma):
        return env.gamma(atom.n)
    if isinstance(atom, Br):
        return bracket(compile_atom(atom.left, env), compile_atom(atom.right, env), env.spin)
    if isinstance(atom, Contract):
        return contract_frame(compile_atom(atom.inner, env), env)
    if isinstance(atom, Apply):
        density = _covector_contraction(atom, env)
        if density is not None:
            return density
        return apply_decoration(atom.op, compile_expression(atom.inner, env), env)
    if isinstance(atom, Bracket):
        return bracket(compile_expression(atom.left, env), compile_expression(atom.right, env), env.spin)
    if isinstance(atom, Bar):
        return dirac_bar(compile_expression(atom.inner, env), env.gammas)
    if isinstance(atom, Paren):
        return compile_expression(atom.inner, env)
    if isinstance(atom, Angle):
        return contract_frame(compile_expression(atom.inner, env), env)
    raise ValidationError(f"cannot compile {atom!r}")


def _covector_contraction(atom: Apply, env: JetEnvironment) -> Optional[CForm]:
    """ι_Y of a covector density gives the top form Y^μ α_μ"""
    if atom.op[0] != "i" or len(atom.inner.terms) != 1:
        return None
    term = atom.inner.terms[0]
    if len(term.atoms) != 1 or not isinstance(term.atoms[0], Sym):
        return None
    name = term.atoms[0].name
    if env.registry.lookup(name).bundle != "covector-density":
        return None
    if name not in env.covectors:
        raise InputError(f"'{name}' is not bound at this jet point")
    value = covector_pairing(env.vector(atom.op[1]), env.covectors[name]).scaled(term.coefficient)
    top = (tuple(range(env.ctx.dim)), (0, 1, 2, 3), None)
    return CForm(env.ctx, env.ctx.dim, 4, "none", {top: value})


# ============================================================================
# ALGEBRAIC SYSTEMS
# ============================================================================

Unknown = Tuple[str, int, int, str, bool]


def unknown_forms(ctx: JetContext, unknowns: Sequence[Unknown]) -> Dict[str, CForm]:
    """Formal unknowns `?label` of the given shapes"""
    return {label: formal_form(ctx, f"?{label}", k, l, kind, odd) for label, k, l, kind, odd in unknowns}


def solve_affine(ctx: JetContext, unknowns: Sequence[Unknown], outputs: Sequence[Jet],
                 rhs: Sequence[Jet]) -> Dict[str, CForm]:
    """
    Solve outputs = rhs where every output is a jet affine in the formal
    `unknowns`.

    An overdetermined system is solved on rows that are independent at
    the origin; the remaining rows must then hold at the origin.

    Raises:
        ValidationError: if there are fewer equations than unknowns or
            the unknowns enter with derivatives
        SingularSystemError: if the system degenerates at the origin or
            a surplus row is inconsistent
    """
    columns = [(label, key, odd) for label, k, l, kind, odd in unknowns for key in shape_basis(ctx.dim, k, l, kind)]
    if len(outputs) < len(columns):
        raise ValidationError(f"system has {len(outputs)} equations for {len(columns)} unknowns")
    tags = {f"?{label}" for label, *_ in unknowns}
    for jet in outputs:
        for var in jet.formal_vars():
            if var[0] in tags and any(var[2]):
                raise ValidationError("system involves derivatives of the unknowns")
    matrix = [[jet.left_derivative((f"?{label}", key, ctx.origin, int(odd))) for label, key, odd in columns]
              for jet in outputs]
    targets = [b - jet.numeric_part(tags) for jet, b in zip(outputs, rhs)]
    rows = list(range(len(outputs)))
    if len(rows) > len(columns):
        for row in matrix:
            for entry in row:
                if not entry.is_plain_series():
                    raise ValidationError("series system matrix must be plain")
        rows = pivot_rows([[entry.constant_value() for entry in row] for row in matrix])
        if len(rows) < len(columns):
            raise SingularSystemError(f"system has rank {len(rows)} < {len(columns)} at the origin")
    values = solve_series([matrix[i] for i in rows], [targets[i] for i in rows])
    chosen = set(rows)
    for i, row in enumerate(matrix):
        if i in chosen:
            continue
        lhs = Jet.zero(ctx)
        for entry, value in zip(row, values):
            if entry and value:
                lhs = lhs + entry * value
        if not (lhs - targets[i]).at_origin().is_zero():
            raise SingularSystemError(f"equation {i} is inconsistent at the origin")
    solution: Dict[str, Dict] = {label: {} for label, *_ in unknowns}
    for (label, key, _), value in zip(columns, values):
        solution[label][key] = value
    return {label: CForm(ctx, k, l, kind, solution[label]) for label, k, l, kind, _ in unknowns}


def solve_linear_forms(ctx: JetContext, unknowns: Sequence[Unknown],
                       equations: Callable[[Dict[str, CForm]], List[CForm]],
                       rhs: Sequence[CForm], shapes: Sequence[Tuple[int, int, str]]) -> Dict[str, CForm]:
    """
    Solve the pointwise linear system equations(u) = rhs for forms u.

    The map is evaluated once on formal unknowns; its matrix must be a
    square plain series invertible at the origin.

    Raises:
        ValidationError: if the system is not square or not algebraic
        SingularSystemError: if it degenerates at the origin
    """
    outputs = equations(unknown_forms(ctx, unknowns))
    rows = [(i, key) for i, shape in enumerate(shapes) for key in shape_basis(ctx.dim, *shape)]
    n_columns = sum(len(shape_basis(ctx.dim, k, l, kind)) for _, k, l, kind, _ in unknowns)
    if len(rows) != n_columns:
        raise ValidationError(f"system has {len(rows)} equations for {n_columns} unknowns")
    return solve_affine(ctx, unknowns, [outputs[i].entry(key) for i, key in rows],
                        [rhs[i].entry(key) for i, key in rows])


def frame_components(env: JetEnvironment, u: CForm, parity: int) -> Tuple[VectorField, Jet]:
    """
    Split a V-valued 0-form along the boundary frame: u = ζ^i e_i + ζ^n ε_n.

    Raises:
        ValidationError: if u is not a (0,1) form or the point is a bulk point
    """
    if (u.k, u.l, u.kind) != (0, 1, "none") and not u.is_zero():
        raise ValidationError("frame components need a V-valued 0-form")
    n = env.ctx.dim
    if n != 3:
        raise ValidationError("frame components are defined on the boundary")
    eps = env.form("eps")
    matrix = [
        [env.vielbein(i, a) for i in range(n)] + [eps.entry(((), (a,), None))]
        for a in range(4)
    ]
    values = solve_series(matrix, [u.entry(((), (a,), None)) for a in range(4)])
    return VectorField(values[:n], parity), values[n]
