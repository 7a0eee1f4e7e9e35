"""
Component Forms

Forms over a jet point: c dx^I v^J (s) with Jet coefficients, stored
coefficient-first exactly like FiberForm. Moving a coefficient past
dx^I v^J twists it by (-1)^{|I|+|J|}; the total derivative of a
coefficient moved behind dx^μ is twisted once.
"""

from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from src.services.base_service import ValidationError
from src.services.clifford_service import ETA, GammaBasis, increasing, mat_mul, permutation_sign
from src.services.fiber_service import FiberForm, combine_spinor, product_kind, spinor_indices
from src.services.scalars import GaussRational, frac, gq, sign_of
from src.services.symbolic.jets import Jet, JetContext

Key = Tuple[Tuple[int, ...], Tuple[int, ...], object]


class CForm:
    """Form with jet coefficients; an entry-free form is zero of any shape"""

    __slots__ = ("ctx", "k", "l", "kind", "entries")

    def __init__(self, ctx: JetContext, k: int, l: int, kind: str = "none",
                 entries: Optional[Dict[Key, Jet]] = None):
        self.ctx = ctx
        self.k = k
        self.l = l
        self.kind = kind
        self.entries: Dict[Key, Jet] = {key: v for key, v in (entries or {}).items() if not v.is_zero()}

    # ------------------------------------------------------------------
    # constructors
    # ------------------------------------------------------------------

    @classmethod
    def zero(cls, ctx: JetContext, k: int = 0, l: int = 0, kind: str = "none") -> "CForm":
        return cls(ctx, k, l, kind)

    @classmethod
    def scalar(cls, jet: Jet) -> "CForm":
        return cls(jet.ctx, 0, 0, "none", {((), (), None): jet})

    @classmethod
    def from_fiber(cls, ctx: JetContext, form: FiberForm) -> "CForm":
        """Constant form with the fiber values"""
        entries = {key: Jet.constant(ctx, value) for key, value in form.coeffs.items()}
        return cls(ctx, form.k, form.l, form.spinor, entries)

    @classmethod
    def constant(cls, ctx: JetContext, k: int, l: int, kind: str,
                 values: Dict[Key, GaussRational]) -> "CForm":
        return cls(ctx, k, l, kind, {key: Jet.constant(ctx, v) for key, v in values.items() if v})

    def basis(self) -> List[Key]:
        return shape_basis(self.ctx.dim, self.k, self.l, self.kind)

    # ------------------------------------------------------------------
    # arithmetic
    # ------------------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.entries

    def _check_same(self, other: "CForm") -> None:
        if (self.k, self.l, self.kind) != (other.k, other.l, other.kind):
            raise ValidationError(
                f"cannot add forms of shape {(self.k, self.l, self.kind)} and {(other.k, other.l, other.kind)}"
            )

    def __add__(self, other: "CForm") -> "CForm":
        if other.is_zero():
            return self
        if self.is_zero():
            return other
        self._check_same(other)
        out = dict(self.entries)
        for key, value in other.entries.items():
            out[key] = out[key] + value if key in out else value
        return CForm(self.ctx, self.k, self.l, self.kind, out)

    def __sub__(self, other: "CForm") -> "CForm":
        return self + other.scaled(-1)

    def __neg__(self) -> "CForm":
        return self.scaled(-1)

    def scaled(self, c) -> "CForm":
        c = gq(c)
        return CForm(self.ctx, self.k, self.l, self.kind, {key: v.scaled(c) for key, v in self.entries.items()})

    def times(self, jet: Jet) -> "CForm":
        """jet · X for a 0-form scalar coefficient placed in front"""
        return CForm(self.ctx, self.k, self.l, self.kind, {key: jet * v for key, v in self.entries.items()})

    def map_entries(self, fn) -> "CForm":
        return CForm(self.ctx, self.k, self.l, self.kind, {key: fn(v) for key, v in self.entries.items()})

    def twist(self) -> "CForm":
        return self.map_entries(lambda v: v.twist())

    def at_origin(self) -> "CForm":
        return self.map_entries(lambda v: v.at_origin())

    def entry(self, key: Key) -> Jet:
        return self.entries.get(key, Jet.zero(self.ctx))

    def shape(self) -> Tuple[int, int, str]:
        return self.k, self.l, self.kind

    def __repr__(self) -> str:
        return f"CForm({self.k},{self.l},{self.kind}; {len(self.entries)} entries)"


def shape_basis(dim: int, k: int, l: int, kind: str) -> List[Key]:
    if k < 0 or l < 0 or k > dim or l > 4:
        return []
    return [(I, J, s) for I in increasing(dim, k) for J in increasing(4, l) for s in spinor_indices(kind)]


# ============================================================================
# PRODUCTS AND CONTRACTIONS
# ============================================================================

def wedge(a: CForm, b: CForm) -> CForm:
    """Graded product; exterior in dx and v, matrix product on spinor indices"""
    kind = product_kind(a.kind, b.kind)
    k, l = a.k + b.k, a.l + b.l
    ctx = a.ctx
    if k > ctx.dim or l > 4 or a.is_zero() or b.is_zero():
        return CForm(ctx, k, l, kind)
    right = b.entries if (a.k + a.l) % 2 == 0 else {key: v.twist() for key, v in b.entries.items()}
    out: Dict[Key, Jet] = {}
    for (I1, J1, s1), c1 in a.entries.items():
        for (I2, J2, s2), c2 in right.items():
            sI = permutation_sign(I1 + I2)
            if not sI:
                continue
            sJ = permutation_sign(J1 + J2)
            if not sJ:
                continue
            s = combine_spinor(a.kind, b.kind, s1, s2)
            if s is None:
                continue
            if s == "scalar":
                s = None
            key = (tuple(sorted(I1 + I2)), tuple(sorted(J1 + J2)), s)
            term = c1 * c2
            if sI * sJ < 0:
                term = -term
            out[key] = out[key] + term if key in out else term
    return CForm(ctx, k, l, kind, out)


def wedge_all(forms: Iterable[CForm]) -> CForm:
    forms = list(forms)
    result = forms[0]
    for form in forms[1:]:
        result = wedge(result, form)
    return result


def exterior_d(x: CForm) -> CForm:
    """d(c dx^I v^J) = (-1)^{|c|} ∂_μ c dx^μ dx^I v^J"""
    ctx = x.ctx
    out: Dict[Key, Jet] = {}
    if x.k + 1 > ctx.dim:
        return CForm(ctx, x.k + 1, x.l, x.kind)
    for (I, J, s), c in x.entries.items():
        for mu in range(ctx.dim):
            if mu in I:
                continue
            dc = c.derivative(mu)
            if dc.is_zero():
                continue
            dc = dc.twist()
            if permutation_sign((mu,) + I) < 0:
                dc = -dc
            key = (tuple(sorted((mu,) + I)), J, s)
            out[key] = out[key] + dc if key in out else dc
    return CForm(ctx, x.k + 1, x.l, x.kind, out)


def v_contract(a: int, x: CForm) -> CForm:
    """[v_a, X] = (-1)^{|c|} c dx^I ι_{v_a} v^J"""
    out: Dict[Key, Jet] = {}
    for (I, J, s), c in x.entries.items():
        for pos, b in enumerate(J):
            if b != a:
                continue
            term = c.twist().scaled(sign_of(pos) * ETA[a])
            key = (I, J[:pos] + J[pos + 1:], s)
            out[key] = out[key] + term if key in out else term
    return CForm(x.ctx, x.k, x.l - 1, x.kind, out)


def base_contract(mu: int, x: CForm) -> CForm:
    """ι_{∂_μ} X; passing the coefficient costs its parity"""
    out: Dict[Key, Jet] = {}
    for (I, J, s), c in x.entries.items():
        for pos, nu in enumerate(I):
            if nu != mu:
                continue
            term = c.twist().scaled(sign_of(pos))
            key = (I[:pos] + I[pos + 1:], J, s)
            out[key] = out[key] + term if key in out else term
    return CForm(x.ctx, x.k - 1, x.l, x.kind, out)


def v_basis(ctx: JetContext, a: int) -> CForm:
    return CForm.constant(ctx, 0, 1, "none", {((), (a,), None): 1})


def _v_component(alpha: CForm, J: Tuple[int, ...]) -> CForm:
    """The k-form coefficient of v^J in alpha"""
    return CForm(alpha.ctx, alpha.k, 0, alpha.kind,
                 {(I, (), s): c for (I, JJ, s), c in alpha.entries.items() if JJ == J})


class SpinMatrices:
    """-1/2 γ_a γ_b for a < b as constant matrix-valued 0-forms"""

    def __init__(self, ctx: JetContext, gammas: GammaBasis):
        self.matrices: Dict[Tuple[int, int], CForm] = {}
        for a in range(4):
            for b in range(a + 1, 4):
                m = mat_mul(gammas.lower[a], gammas.lower[b])
                values = {((), (), (s, t)): m[s][t] * frac(-1, 2) for s in range(4) for t in range(4)}
                self.matrices[(a, b)] = CForm.constant(ctx, 0, 0, "matrix", values)


def bracket(alpha: CForm, x: CForm, spin: Optional[SpinMatrices] = None) -> CForm:
    """
    [A, X] for V-degree 1 or 2 forms A: Σ α_a [v_a, X] on V-degree 1, and
    Σ α_ab (v_a[v_b, X] - v_b[v_a, X]) plus the spin action on V-degree 2.

    Raises:
        ValidationError: for other V-degrees or spinor-valued A
    """
    ctx = alpha.ctx
    if alpha.kind != "none":
        raise ValidationError("the left argument of a bracket must be spinor-free")
    if alpha.l == 1:
        total = CForm(ctx, alpha.k + x.k, x.l - 1, x.kind)
        if x.l == 0:
            return total
        for a in range(4):
            coeff = _v_component(alpha, (a,))
            if not coeff.is_zero():
                total = total + wedge(coeff, v_contract(a, x))
        return total
    if alpha.l != 2:
        raise ValidationError(f"bracket with a V-degree {alpha.l} left argument")
    total = CForm(ctx, alpha.k + x.k, x.l, x.kind)
    for a in range(4):
        for b in range(a + 1, 4):
            coeff = _v_component(alpha, (a, b))
            if coeff.is_zero():
                continue
            if x.l:
                inner = wedge(v_basis(ctx, a), v_contract(b, x)) - wedge(v_basis(ctx, b), v_contract(a, x))
                total = total + wedge(coeff, inner)
            if x.kind != "none":
                if spin is None:
                    raise ValidationError("spinor brackets need the spin matrices")
                s = spin.matrices[(a, b)]
                if x.kind == "column":
                    total = total + wedge(coeff, wedge(s, x))
                elif x.kind == "row":
                    total = total - wedge(coeff, wedge(x, s))
                else:
                    total = total + wedge(coeff, wedge(s, x) - wedge(x, s))
    return total


def covariant_d(connection: CForm, x: CForm, spin: SpinMatrices) -> CForm:
    return exterior_d(x) + bracket(connection, x, spin)


def curvature(connection: CForm, spin: SpinMatrices) -> CForm:
    return exterior_d(connection) + bracket(connection, connection, spin).scaled(frac(1, 2))


def dirac_bar(x: CForm, gammas: GammaBasis) -> CForm:
    """Row (ψ̄)_s = Σ_t ψ_t C_ts"""
    if x.kind != "column":
        raise ValidationError("bar needs a spinor column")
    out: Dict[Key, Jet] = {}
    C = gammas.charge
    for (I, J, t), c in x.entries.items():
        for s in range(4):
            if C[t][s]:
                term = c.scaled(C[t][s])
                key = (I, J, s)
                out[key] = out[key] + term if key in out else term
    return CForm(x.ctx, x.k, x.l, "row", out)


def gamma_power(ctx: JetContext, gammas: GammaBasis, n: int) -> CForm:
    values = {}
    for J in increasing(4, n):
        m = gammas.power(J)
        for s in range(4):
            for t in range(4):
                if m[s][t]:
                    values[((), J, (s, t))] = m[s][t]
    return CForm.constant(ctx, 0, n, "matrix", values)


def top_coefficient(x: CForm) -> Jet:
    """Coefficient of dx^{0..n-1} v^{0123}; the density of a top form"""
    if x.is_zero():
        return Jet.zero(x.ctx)
    if (x.k, x.l, x.kind) != (x.ctx.dim, 4, "none"):
        raise ValidationError(f"not a top form: shape {(x.k, x.l, x.kind)}")
    return x.entry((tuple(range(x.ctx.dim)), (0, 1, 2, 3), None))


# ============================================================================
# VECTOR FIELDS
# ============================================================================

class VectorField:
    """ξ = ξ^μ ∂_μ with jet components of a fixed parity"""

    __slots__ = ("components", "parity")

    def __init__(self, components: Sequence[Jet], parity: int):
        self.components = list(components)
        self.parity = parity % 2

    @property
    def ctx(self) -> JetContext:
        return self.components[0].ctx

    def __add__(self, other: "VectorField") -> "VectorField":
        return VectorField([a + b for a, b in zip(self.components, other.components)], self.parity)

    def __sub__(self, other: "VectorField") -> "VectorField":
        return VectorField([a - b for a, b in zip(self.components, other.components)], self.parity)

    def scaled(self, c) -> "VectorField":
        return VectorField([a.scaled(c) for a in self.components], self.parity)

    def map(self, fn) -> "VectorField":
        return VectorField([fn(a) for a in self.components], self.parity)

    def is_zero(self) -> bool:
        return all(a.is_zero() for a in self.components)


def iota(vector: VectorField, x: CForm) -> CForm:
    """ι_ξ X = Σ ξ^μ ι_{∂_μ} X"""
    if x.k == 0:
        return CForm(x.ctx, 0, x.l, x.kind)
    total = CForm(x.ctx, x.k - 1, x.l, x.kind)
    for mu, component in enumerate(vector.components):
        if component.is_zero():
            continue
        total = total + base_contract(mu, x).times(component)
    return total


def lie(vector: VectorField, connection: Optional[CForm], x: CForm, spin: SpinMatrices) -> CForm:
    """L^conn_ξ = ι_ξ d_conn + (-1)^{|ξ|} d_conn ι_ξ"""
    def d(y: CForm) -> CForm:
        return exterior_d(y) if connection is None else covariant_d(connection, y, spin)
    first = iota(vector, d(x))
    second = d(iota(vector, x)) if x.k else CForm(x.ctx, x.k, x.l, x.kind)
    return first + second.scaled(sign_of(vector.parity))


def vector_bracket(x: VectorField, y: VectorField) -> VectorField:
    """[X, Y]^ν = X^μ ∂_μ Y^ν - (-1)^{|X||Y|} Y^μ ∂_μ X^ν"""
    dim = len(x.components)
    sign = sign_of(x.parity * y.parity)
    out = []
    for nu in range(dim):
        acc = Jet.zero(x.ctx)
        for mu in range(dim):
            acc = acc + x.components[mu] * y.components[nu].derivative(mu)
            acc = acc - (y.components[mu] * x.components[nu].derivative(mu)).scaled(sign)
        out.append(acc)
    return VectorField(out, x.parity + y.parity)


def covector_pairing(vector: VectorField, covector: Sequence[Jet]) -> Jet:
    """Σ ξ^μ α_μ, the contraction of a vector with a covector density"""
    acc = Jet.zero(vector.ctx)
    for v, a in zip(vector.components, covector):
        acc = acc + v * a
    return acc
