"""
Fiber Service

Pointwise model of the fibers Ω^{(k,l)} = Λ^k T*_x ⊗ Λ^l V (optionally
spinor- or matrix-valued), the vielbein maps W_k, ϱ = [e, ·], ⟨e, ·⟩
and ι, and the rank/kernel certificates of the bulk and boundary
W-diagrams.

A FiberForm is stored coefficient-first, c dx^I v^J (s). Moving a
coefficient of parity p past dx^I v^J costs (-1)^{p(|I|+|J|)}; dx's and
v's commute with each other.
"""

import itertools
import random
from dataclasses import dataclass, field
from math import comb, factorial
from typing import Callable, Dict, Iterable, List, Optional, Sequence, Tuple

from src.services.base_service import (
    BaseService,
    DegenerateFrameError,
    ValidationError,
)
from src.services.clifford_service import ETA, GammaBasis, build_gamma_basis, increasing, permutation_sign
from src.services.exact_linalg import (
    determinant,
    image,
    inverse,
    kernel,
    mat_vec,
    rank,
    transpose,
)
from src.services.models import MapCertificate, Parity, VerificationReport
from src.services.scalars import ZERO, GaussRational, frac, gq, sign_of

SPINOR_KINDS = ("none", "column", "row", "matrix")

Key = Tuple[Tuple[int, ...], Tuple[int, ...], object]


def spinor_indices(kind: str) -> List[object]:
    if kind == "none":
        return [None]
    if kind in ("column", "row"):
        return list(range(4))
    if kind == "matrix":
        return [(s, t) for s in range(4) for t in range(4)]
    raise ValidationError(f"unknown spinor kind '{kind}'")


def product_kind(left: str, right: str) -> str:
    """Spinor kind of a product, or ValidationError when the shapes do not compose"""
    if left == "none":
        return right
    if right == "none":
        return left
    table = {
        ("matrix", "column"): "column",
        ("matrix", "matrix"): "matrix",
        ("row", "column"): "none",
        ("row", "matrix"): "row",
    }
    if (left, right) not in table:
        raise ValidationError(f"cannot multiply {left} by {right}")
    return table[(left, right)]


# ============================================================================
# FIBER FORMS
# ============================================================================

@dataclass(frozen=True)
class FiberSpace:
    """Ω^{(k,l)} at a point, with lexicographic monomial basis"""
    base_dim: int
    k: int
    l: int
    spinor: str = "none"
    parity: Parity = Parity.EVEN

    @property
    def basis(self) -> List[Key]:
        return [
            (I, J, s)
            for I in increasing(self.base_dim, self.k)
            for J in increasing(4, self.l)
            for s in spinor_indices(self.spinor)
        ]

    @property
    def dim(self) -> int:
        return comb(self.base_dim, self.k) * comb(4, self.l) * len(spinor_indices(self.spinor))

    def label(self) -> str:
        side = "∂" if self.base_dim == 3 else ""
        spin = "" if self.spinor == "none" else f",{self.spinor}"
        return f"Ω{side}({self.k},{self.l}{spin})"


class FiberForm:
    """Exact element of a fiber space"""

    __slots__ = ("space", "coeffs")

    def __init__(self, space: FiberSpace, coeffs: Optional[Dict[Key, GaussRational]] = None):
        self.space = space
        self.coeffs: Dict[Key, GaussRational] = {}
        for key, value in (coeffs or {}).items():
            value = gq(value)
            if value:
                self.coeffs[key] = value

    # shorthand accessors
    @property
    def base_dim(self) -> int:
        return self.space.base_dim

    @property
    def k(self) -> int:
        return self.space.k

    @property
    def l(self) -> int:
        return self.space.l

    @property
    def spinor(self) -> str:
        return self.space.spinor

    @property
    def parity(self) -> Parity:
        return self.space.parity

    @classmethod
    def zero(cls, space: FiberSpace) -> "FiberForm":
        return cls(space)

    @classmethod
    def from_vector(cls, space: FiberSpace, vector: Sequence[GaussRational]) -> "FiberForm":
        return cls(space, dict(zip(space.basis, vector)))

    def vector(self) -> List[GaussRational]:
        return [self.coeffs.get(key, ZERO) for key in self.space.basis]

    def is_zero(self) -> bool:
        return not self.coeffs

    def _check_same(self, other: "FiberForm") -> None:
        if (self.space.base_dim, self.k, self.l, self.spinor) != (other.base_dim, other.k, other.l, other.spinor):
            raise ValidationError(f"incompatible fibers {self.space.label()} and {other.space.label()}")

    def __add__(self, other: "FiberForm") -> "FiberForm":
        self._check_same(other)
        out = dict(self.coeffs)
        for key, value in other.coeffs.items():
            out[key] = out.get(key, ZERO) + value
        return FiberForm(self.space, out)

    def __sub__(self, other: "FiberForm") -> "FiberForm":
        return self + other.scaled(-1)

    def __neg__(self) -> "FiberForm":
        return self.scaled(-1)

    def scaled(self, c) -> "FiberForm":
        c = gq(c)
        return FiberForm(self.space, {key: c * v for key, v in self.coeffs.items()})

    def with_parity(self, parity: Parity) -> "FiberForm":
        space = FiberSpace(self.base_dim, self.k, self.l, self.spinor, parity)
        return FiberForm(space, self.coeffs)

    def __eq__(self, other) -> bool:
        if not isinstance(other, FiberForm):
            return NotImplemented
        try:
            self._check_same(other)
        except ValidationError:
            return False
        return (self - other).is_zero()

    def __hash__(self):
        return hash((self.space.label(), tuple(sorted(self.coeffs.items(), key=repr))))

    def __repr__(self) -> str:
        terms = ", ".join(f"{key}: {value}" for key, value in sorted(self.coeffs.items(), key=repr)[:6])
        more = "" if len(self.coeffs) <= 6 else f", ... ({len(self.coeffs)} terms)"
        return f"FiberForm[{self.space.label()}]({terms}{more})"


def combine_spinor(left_kind: str, right_kind: str, s1, s2) -> Optional[object]:
    """
    Index contraction for a product; None when the entries do not meet and
    "scalar" when the product carries no spinor index.
    """
    if left_kind == "none" and right_kind == "none":
        return "scalar"
    if left_kind == "none":
        return s2
    if right_kind == "none":
        return s1
    if left_kind == "matrix" and right_kind == "column":
        return s1[0] if s1[1] == s2 else None
    if left_kind == "matrix" and right_kind == "matrix":
        return (s1[0], s2[1]) if s1[1] == s2[0] else None
    if left_kind == "row" and right_kind == "column":
        return "scalar" if s1 == s2 else None
    if left_kind == "row" and right_kind == "matrix":
        return s2[1] if s1 == s2[0] else None
    raise ValidationError(f"cannot multiply {left_kind} by {right_kind}")


def wedge(a: FiberForm, b: FiberForm) -> FiberForm:
    """
    Graded product of fiber forms (exterior in both factors, matrix
    product on spinor indices).

    Degrees beyond (base_dim, 4) give the zero form of the raw degree.
    """
    if a.base_dim != b.base_dim:
        raise ValidationError("forms live over different base dimensions")
    kind = product_kind(a.spinor, b.spinor)
    parity = Parity.from_bit(a.parity.bit + b.parity.bit)
    k, l = a.k + b.k, a.l + b.l
    space = FiberSpace(a.base_dim, k, l, kind, parity)
    if k > a.base_dim or l > 4:
        return FiberForm(space)
    move = sign_of(b.parity.bit * (a.k + a.l))
    out: Dict[Key, GaussRational] = {}
    for (I1, J1, s1), c1 in a.coeffs.items():
        for (I2, J2, s2), c2 in b.coeffs.items():
            sI = permutation_sign(I1 + I2)
            if not sI:
                continue
            sJ = permutation_sign(J1 + J2)
            if not sJ:
                continue
            s = combine_spinor(a.spinor, b.spinor, s1, s2)
            if s is None:
                continue
            if s == "scalar":
                s = None
            key = (tuple(sorted(I1 + I2)), tuple(sorted(J1 + J2)), s)
            out[key] = out.get(key, ZERO) + c1 * c2 * (move * sI * sJ)
    return FiberForm(space, out)


def wedge_all(forms: Iterable[FiberForm]) -> FiberForm:
    forms = list(forms)
    result = forms[0]
    for f in forms[1:]:
        result = wedge(result, f)
    return result


def v_contract(a: int, x: FiberForm) -> FiberForm:
    """[v_a, X] = (-1)^{|X|} c dx^I ι_{v_a} v^J with ι_{v_a} v_b = η_ab"""
    if x.l == 0:
        raise ValidationError("[v_a, ·] needs V-degree at least 1")
    space = FiberSpace(x.base_dim, x.k, x.l - 1, x.spinor, x.parity)
    sign_p = sign_of(x.parity.bit)
    out: Dict[Key, GaussRational] = {}
    for (I, J, s), c in x.coeffs.items():
        for pos, b in enumerate(J):
            if b != a:
                continue
            key = (I, J[:pos] + J[pos + 1:], s)
            out[key] = out.get(key, ZERO) + c * (sign_p * sign_of(pos) * ETA[a])
    return FiberForm(space, out)


def base_contract(mu: int, x: FiberForm) -> FiberForm:
    """ι_{∂_μ} X for an even coordinate vector; passing the coefficient costs (-1)^{|X|}"""
    if x.k == 0:
        raise ValidationError("interior product needs form degree at least 1")
    space = FiberSpace(x.base_dim, x.k - 1, x.l, x.spinor, x.parity)
    sign_p = sign_of(x.parity.bit)
    out: Dict[Key, GaussRational] = {}
    for (I, J, s), c in x.coeffs.items():
        for pos, nu in enumerate(I):
            if nu != mu:
                continue
            key = (I[:pos] + I[pos + 1:], J, s)
            out[key] = out.get(key, ZERO) + c * (sign_p * sign_of(pos))
    return FiberForm(space, out)


# ============================================================================
# FRAMES
# ============================================================================

@dataclass
class Frame:
    """
    Vielbein at a point: e[μ][a] = e^a_μ.

    Bulk frames (base_dim 4) must be invertible; boundary frames
    (base_dim 3) need {e_1, e_2, e_3, ε_n} to span V and a nondegenerate
    induced metric g^∂_{μν} = e_μ · e_ν.
    """
    base_dim: int
    e: List[List[GaussRational]]
    epsilon_n: Optional[List[GaussRational]] = None
    _cache: Dict[str, object] = field(default_factory=dict, repr=False, compare=False)

    def __post_init__(self):
        self.e = [[gq(x) for x in row] for row in self.e]
        if self.epsilon_n is not None:
            self.epsilon_n = [gq(x) for x in self.epsilon_n]
        if self.base_dim not in (3, 4):
            raise ValidationError("frames live over a 3- or 4-dimensional base")
        if len(self.e) != self.base_dim or any(len(row) != 4 for row in self.e):
            raise ValidationError("vielbein must be base_dim x 4")
        if self.base_dim == 3 and self.epsilon_n is None:
            raise ValidationError("boundary frames need ε_n")

    @property
    def is_boundary(self) -> bool:
        return self.base_dim == 3

    def induced_metric(self) -> List[List[GaussRational]]:
        return [
            [sum((self.e[m][a] * self.e[n][a] * ETA[a] for a in range(4)), ZERO) for n in range(self.base_dim)]
            for m in range(self.base_dim)
        ]

    def is_nondegenerate(self) -> bool:
        if not self.is_boundary:
            return bool(determinant(self.e))
        rows = self.e + [self.epsilon_n]
        return bool(determinant(rows)) and bool(determinant(self.induced_metric()))

    def require_nondegenerate(self) -> None:
        if not self.is_nondegenerate():
            raise DegenerateFrameError(
                f"{'boundary' if self.is_boundary else 'bulk'} frame fails the nondegeneracy guard"
            )

    def inverse_vielbein(self) -> List[List[GaussRational]]:
        """e^μ_b = g^{μν} e^c_ν η_cb (the honest inverse in the bulk)"""
        if "inverse" not in self._cache:
            ginv = inverse(self.induced_metric())
            self._cache["inverse"] = [
                [sum((ginv[m][n] * self.e[n][b] * ETA[b] for n in range(self.base_dim)), ZERO) for b in range(4)]
                for m in range(self.base_dim)
            ]
        return self._cache["inverse"]

    # ------------------------------------------------------------------
    # forms built from the frame
    # ------------------------------------------------------------------

    def e_form(self) -> FiberForm:
        space = FiberSpace(self.base_dim, 1, 1)
        return FiberForm(space, {((m,), (a,), None): self.e[m][a] for m in range(self.base_dim) for a in range(4)})

    def e_power(self, k: int) -> FiberForm:
        """e^k / k!"""
        key = f"e_power_{k}"
        if key not in self._cache:
            if k == 0:
                power = FiberForm(FiberSpace(self.base_dim, 0, 0), {((), (), None): 1})
            else:
                power = wedge_all([self.e_form()] * k).scaled(frac(1, factorial(k)))
            self._cache[key] = power
        return self._cache[key]

    def epsilon_form(self) -> FiberForm:
        if self.epsilon_n is None:
            raise ValidationError("bulk frames carry no ε_n")
        return FiberForm(FiberSpace(self.base_dim, 0, 1), {((), (a,), None): self.epsilon_n[a] for a in range(4)})

    def gamma_power(self, n: int, basis: GammaBasis) -> FiberForm:
        """γ^N as a matrix-valued (0, N) form"""
        space = FiberSpace(self.base_dim, 0, n, "matrix")
        coeffs = {}
        for J in increasing(4, n):
            m = basis.power(J)
            for s in range(4):
                for t in range(4):
                    coeffs[((), J, (s, t))] = m[s][t]
        return FiberForm(space, coeffs)

    def gamma_underline(self, basis: GammaBasis) -> FiberForm:
        """γ̲ = [e, γ] = e^a_μ γ_a dx^μ, a matrix-valued (1, 0) form"""
        space = FiberSpace(self.base_dim, 1, 0, "matrix")
        coeffs = {}
        for m in range(self.base_dim):
            for s in range(4):
                for t in range(4):
                    coeffs[((m,), (), (s, t))] = sum(
                        (self.e[m][a] * basis.lower[a][s][t] for a in range(4)), ZERO
                    )
        return FiberForm(space, coeffs)


def random_frame(rng: random.Random, base_dim: int, bound: int = 2, max_tries: int = 1000) -> Frame:
    """
    Sample a nondegenerate frame with small integer entries.

    Degenerate samples are rejected and redrawn.

    Raises:
        DegenerateFrameError: if no nondegenerate frame turns up
    """
    for _ in range(max_tries):
        e = [[rng.randint(-bound, bound) for _ in range(4)] for _ in range(base_dim)]
        eps = [rng.randint(-bound, bound) for _ in range(4)] if base_dim == 3 else None
        frame = Frame(base_dim, e, eps)
        if frame.is_nondegenerate():
            return frame
    raise DegenerateFrameError("could not sample a nondegenerate frame")


def standard_frame(base_dim: int) -> Frame:
    """Identity vielbein; boundary version uses ε_n = v_0 (space-like boundary)"""
    if base_dim == 4:
        return Frame(4, [[1 if a == m else 0 for a in range(4)] for m in range(4)])
    return Frame(3, [[1 if a == m + 1 else 0 for a in range(4)] for m in range(3)], [1, 0, 0, 0])


# ============================================================================
# LINEAR MAPS AND CERTIFICATES
# ============================================================================

def certify(name: str, source: FiberSpace, target: FiberSpace,
            fn: Callable[[FiberForm], FiberForm]) -> MapCertificate:
    """Matrix, rank, kernel and image of a fiberwise linear map"""
    columns = []
    for key in source.basis:
        out = fn(FiberForm(source, {key: 1}))
        if out.base_dim != target.base_dim or (out.k, out.l, out.spinor) != (target.k, target.l, target.spinor):
            raise ValidationError(f"{name} lands in {out.space.label()}, expected {target.label()}")
        columns.append(out.vector())
    matrix = transpose(columns, target.dim) if columns else [[] for _ in range(target.dim)]
    r = rank(matrix) if source.dim and target.dim else 0
    return MapCertificate(
        name=name,
        source_dim=source.dim,
        target_dim=target.dim,
        matrix=matrix,
        rank=r,
        kernel_basis=kernel(matrix, source.dim) if target.dim else kernel([], source.dim),
        image_basis=image(matrix, source.dim) if target.dim else [],
    )


def certificate_sound(cert: MapCertificate) -> bool:
    """matrix · kernel = 0, rank + nullity = dim, image basis independent"""
    if cert.target_dim:
        for v in cert.kernel_basis:
            if any(mat_vec(cert.matrix, v)):
                return False
    if cert.rank + len(cert.kernel_basis) != cert.source_dim:
        return False
    return len(cert.image_basis) == cert.rank and rank(transpose(cert.image_basis)) == cert.rank if cert.image_basis else cert.rank == 0


# arrows of the W_1 property diagrams: (i, j) -> (claimed injective, claimed surjective)
BULK_ARROWS: Dict[Tuple[int, int], Tuple[bool, bool]] = {
    (1, 0): (True, False),
    (2, 1): (True, True),
    (3, 2): (False, True),
    (0, 0): (True, False),
    (1, 1): (True, False),
    (2, 2): (False, True),
    (3, 3): (False, True),
    (0, 1): (True, False),
    (1, 2): (True, True),
    (2, 3): (False, True),
    (0, 2): (True, False),
    (1, 3): (False, True),
    (0, 3): (True, True),
    (2, 0): (True, False),
    (3, 1): (False, True),
    (3, 0): (True, True),
}

BOUNDARY_ARROWS: Dict[Tuple[int, int], Tuple[bool, bool]] = {
    (2, 3): (False, True),
    (2, 2): (False, True),
    (2, 1): (False, True),
    (2, 0): (True, False),
    (1, 0): (True, False),
    (1, 1): (True, False),
    (1, 2): (False, True),
    (1, 3): (False, True),
    (0, 3): (False, True),
    (0, 2): (True, False),
    (0, 1): (True, False),
    (0, 0): (True, False),
}

USEFUL_ISOS = (
    ("W_2^(0,2)", "W", 2, 0, 2),
    ("W_2^(2,0)", "W", 2, 2, 0),
    ("W_2^(1,1)", "W", 2, 1, 1),
    ("W_4^(0,0)", "W", 4, 0, 0),
    ("rho^(0,1)", "rho", 1, 0, 1),
    ("rho^(3,4)", "rho", 1, 3, 4),
)


class FiberService(BaseService):
    """
    Fiberwise exterior algebra and vielbein maps

    Provides:
    - wedge, ι, ⟨e, ·⟩ on FiberForms
    - W_k and ϱ certificates
    - Randomized reproduction of the W-property diagrams
    """

    def __init__(self, basis: Optional[GammaBasis] = None):
        super().__init__()
        self.gammas = basis or build_gamma_basis()

    # ========================================================================
    # ELEMENTARY OPERATIONS
    # ========================================================================

    def wedge(self, a: FiberForm, b: FiberForm) -> FiberForm:
        return wedge(a, b)

    def iota(self, vector: Sequence, sigma: FiberForm) -> FiberForm:
        """
        Interior product with an even base vector.

        Raises:
            ValidationError: on a 0-form or a vector of the wrong length
        """
        if len(vector) != sigma.base_dim:
            raise ValidationError("vector and form live over different bases")
        if sigma.k == 0:
            raise ValidationError("interior product of a 0-form")
        space = FiberSpace(sigma.base_dim, sigma.k - 1, sigma.l, sigma.spinor, sigma.parity)
        total = FiberForm(space)
        for mu, component in enumerate(vector):
            component = gq(component)
            if component:
                total = total + base_contract(mu, sigma).scaled(component)
        return total

    def contract_e(self, frame: Frame, sigma: FiberForm) -> FiberForm:
        """
        ⟨e, σ⟩ = v_a η^{ab} e^μ_b ι_{∂_μ} σ : (i, j) -> (i-1, j+1)

        Raises:
            ValidationError: if σ has form degree 0
        """
        if sigma.k == 0:
            raise ValidationError("⟨e, ·⟩ needs form degree at least 1")
        inv = frame.inverse_vielbein()
        space = FiberSpace(sigma.base_dim, sigma.k - 1, sigma.l + 1, sigma.spinor, sigma.parity)
        total = FiberForm(space)
        for a in range(4):
            v_a = FiberForm(FiberSpace(sigma.base_dim, 0, 1), {((), (a,), None): ETA[a]})
            inner = FiberForm(FiberSpace(sigma.base_dim, sigma.k - 1, sigma.l, sigma.spinor, sigma.parity))
            for mu in range(sigma.base_dim):
                if inv[mu][a]:
                    inner = inner + base_contract(mu, sigma).scaled(inv[mu][a])
            total = total + wedge(v_a, inner)
        return total

    def bracket_e(self, frame: Frame, x: FiberForm) -> FiberForm:
        """ϱ(X) = [e, X] = Σ_a e^a ∧ [v_a, X]"""
        space = FiberSpace(x.base_dim, x.k + 1, x.l - 1, x.spinor, x.parity)
        total = FiberForm(space)
        for a in range(4):
            e_a = FiberForm(FiberSpace(x.base_dim, 1, 0),
                            {((m,), (), None): frame.e[m][a] for m in range(x.base_dim)})
            total = total + wedge(e_a, v_contract(a, x))
        return total

    # ========================================================================
    # CERTIFICATES
    # ========================================================================

    def W_map(self, frame: Frame, k: int, i: int, j: int, spinor: str = "none",
              parity: Parity = Parity.EVEN) -> MapCertificate:
        """
        Certificate of X -> e^k ∧ X / k! on Ω^{(i,j)}.

        Raises:
            ValidationError: if the degrees leave the fiber range
        """
        self._validate_range("k", k, 1, 4)
        if i + k > frame.base_dim or j + k > 4 or i < 0 or j < 0:
            raise ValidationError(f"W_{k}^({i},{j}) leaves the fiber range")
        source = FiberSpace(frame.base_dim, i, j, spinor, parity)
        target = FiberSpace(frame.base_dim, i + k, j + k, spinor, parity)
        power = frame.e_power(k)
        side = "∂" if frame.is_boundary else ""
        return certify(f"W{side}_{k}^({i},{j})", source, target, lambda x: wedge(power, x))

    def rho_map(self, frame: Frame, i: int, j: int) -> MapCertificate:
        """
        Certificate of X -> [e, X] on Ω^{(i,j)}.

        Raises:
            ValidationError: if j = 0 or i + 1 exceeds the base dimension
        """
        if j < 1:
            raise ValidationError("ϱ needs V-degree at least 1")
        if i + 1 > frame.base_dim:
            raise ValidationError("ϱ leaves the fiber range")
        source = FiberSpace(frame.base_dim, i, j)
        target = FiberSpace(frame.base_dim, i + 1, j - 1)
        side = "∂" if frame.is_boundary else ""
        return certify(f"rho{side}^({i},{j})", source, target, lambda x: self.bracket_e(frame, x))

    def certify_useful_isos(self, frame: Frame) -> VerificationReport:
        """The bulk maps W_2^(0,2), W_2^(2,0), W_2^(1,1), W_4^(0,0), ϱ^(0,1), ϱ^(3,4) are bijective"""
        frame.require_nondegenerate()
        report = VerificationReport(suite="useful-isos")
        for name, kind, k, i, j in USEFUL_ISOS:
            cert = self.W_map(frame, k, i, j) if kind == "W" else self.rho_map(frame, i, j)
            report.add(f"iso-{name}", f"App. B, Lemma useful isos, {name}", cert.bijective,
                       witness=f"rank {cert.rank} of {cert.source_dim}->{cert.target_dim}")
        return report

    # ========================================================================
    # DIAGRAMS
    # ========================================================================

    def diagram_arrows(self, side: str) -> Dict[Tuple[int, int], Tuple[bool, bool]]:
        if side == "bulk":
            return BULK_ARROWS
        if side == "boundary":
            return BOUNDARY_ARROWS
        raise ValidationError(f"side must be 'bulk' or 'boundary', got {side!r}")

    def check_diagram(self, side: str, trials: int, seed: int) -> VerificationReport:
        """
        Reproduce every arrow of the W_1 property diagram on random
        nondegenerate frames.

        Raises:
            ValidationError: for an unknown side or trials < 1
        """
        arrows = self.diagram_arrows(side)
        if trials < 1:
            raise ValidationError("trials must be >= 1")
        self._log_operation("check_diagram", side=side, trials=trials, seed=seed)
        rng = random.Random(seed)
        base_dim = 4 if side == "bulk" else 3
        anchor = 'diagram "prop e bulk"' if side == "bulk" else 'diagram "prop e bdry"'
        mismatches: Dict[Tuple[int, int], str] = {}
        kernel_dims = set()
        for trial in range(trials):
            frame = random_frame(rng, base_dim)
            for (i, j), (inj, surj) in arrows.items():
                if (i, j) in mismatches:
                    continue
                cert = self.W_map(frame, 1, i, j)
                if (cert.injective, cert.surjective) != (inj, surj) or not certificate_sound(cert):
                    mismatches[(i, j)] = f"trial {trial}: rank {cert.rank} ({cert.source_dim}->{cert.target_dim})"
                    self._log_warning("diagram arrow mismatch", side=side, arrow=str((i, j)), trial=trial)
            if side == "boundary":
                kernel_dims.add(self.W_map(frame, 1, 1, 2).kernel_dim)
        report = VerificationReport(suite=f"diagram-{side}")
        for (i, j), (inj, surj) in arrows.items():
            claim = "+".join(p for p, flag in (("injective", inj), ("surjective", surj)) if flag)
            report.add(f"{side}-W1-({i},{j})", f"{anchor}, W_1^({i},{j}) {claim}",
                       (i, j) not in mismatches, witness=mismatches.get((i, j)), trials=trials)
        if side == "boundary":
            report.add("boundary-kerW1-(1,2)-dim6", '§3.2 remark, "another 6 local components"',
                       kernel_dims == {6}, witness=f"observed kernel dimensions {sorted(kernel_dims)}")
        return report

    def check_factorial_normalization(self, frame: Frame) -> VerificationReport:
        """W_1∘W_1 = 2 W_2 and W_1∘W_2 = 3 W_3 on every admissible fiber"""
        report = VerificationReport(suite="factorial-normalization")
        e1, e2, e3 = frame.e_power(1), frame.e_power(2), frame.e_power(3)
        ok_2 = ok_3 = True
        for i in range(frame.base_dim + 1):
            for j in range(5):
                source = FiberSpace(frame.base_dim, i, j)
                for key in source.basis:
                    x = FiberForm(source, {key: 1})
                    if i + 2 <= frame.base_dim and j + 2 <= 4:
                        ok_2 &= wedge(e1, wedge(e1, x)) == wedge(e2, x).scaled(2)
                    if i + 3 <= frame.base_dim and j + 3 <= 4:
                        ok_3 &= wedge(e1, wedge(e2, x)) == wedge(e3, x).scaled(3)
        report.add("W1W1=2W2", "§2.1, W_k normalization 1/k!", ok_2)
        report.add("W1W2=3W3", "§2.1, W_k normalization 1/k!", ok_3)
        return report

    def check_boundary_volume(self, frame: Frame) -> VerificationReport:
        """ε_n e^3/3! is a nonzero element of the one-dimensional Ω∂^(3,4)"""
        vol = wedge(frame.epsilon_form(), frame.e_power(3))
        report = VerificationReport(suite="boundary-volume")
        report.add("boundary-volume-nonvanishing", "App. B remark, Vol_Σ=(1/3!)υ ε_n e^3",
                   not vol.is_zero(), witness=repr(vol))
        return report

    def check_presymplectic_kernel(self, frame: Frame) -> VerificationReport:
        """
        e X_e = 0 and e γ^3 X_ψ = 0 force X_e = X_ψ = 0 on the boundary.

        Raises:
            ValidationError: on a bulk frame
        """
        if not frame.is_boundary:
            raise ValidationError("the presymplectic kernel is a boundary statement")
        g3 = frame.gamma_power(3, self.gammas)
        e = frame.e_form()
        frame_part = self.W_map(frame, 1, 1, 1)
        spinor_part = certify("e gamma^3", FiberSpace(3, 1, 0, "column", Parity.ODD),
                              FiberSpace(3, 2, 4, "column", Parity.ODD), lambda x: wedge(e, wedge(g3, x)))
        report = VerificationReport(suite="presymplectic-kernel")
        report.add("kernel-X_e", "§3.2, ϖ^∂ kernel, e X_e = 0 ⇒ X_e = 0", frame_part.injective,
                   witness=f"kernel dimension {frame_part.kernel_dim}")
        report.add("kernel-X_psi", "§3.2, ϖ^∂ kernel, e γ³ X_ψ = 0 ⇒ X_ψ = 0", spinor_part.injective,
                   witness=f"kernel dimension {spinor_part.kernel_dim}")
        return report
