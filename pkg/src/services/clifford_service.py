"""
Clifford Service

Explicit D=4 gamma-matrix representation over the Gaussian rationals,
charge conjugation, Majorana spinors with Grassmann components, and the
exact checks of the gamma-matrix, flip and Fierz identities.

Conventions:
    η = diag(-1, 1, 1, 1) and {γ_a, γ_b} = -2 η_ab 1.
    γ^5 = i γ^0 γ^1 γ^2 γ^3, ε^{0123} = +1 (ε_{0123} = -1) by default.
    γ = γ^a v_a is V-valued; γ^N is its N-th wedge power, so the
    v_{a1}...v_{aN} coefficient of γ^N is N! γ^{[a1}...γ^{aN]}.
    V-valued objects are written coefficient-first, c v_I; moving a
    coefficient of parity p past v_I costs (-1)^{p |I|}.
"""

import itertools
import random
from dataclasses import dataclass, field
from math import factorial
from typing import Callable, Dict, List, Optional, Sequence, Tuple

from src.services.base_service import (
    BaseService,
    ConfigurationError,
    InputError,
    UnknownIdentityError,
    ValidationError,
)
from src.services.exact_linalg import kernel
from src.services.models import Parity, VerificationReport
from src.services.scalars import (
    I_UNIT,
    ONE,
    ZERO,
    GaussRational,
    GrassmannElement,
    conj,
    frac,
    gq,
    random_grassmann,
    sign_of,
)

ETA = (-1, 1, 1, 1)
DIM_V = 4

Mat = Tuple[Tuple[GaussRational, ...], ...]
MultiIndex = Tuple[int, ...]


# ============================================================================
# 4x4 MATRIX HELPERS
# ============================================================================

def mat(rows: Sequence[Sequence]) -> Mat:
    return tuple(tuple(gq(v) for v in row) for row in rows)


def mat_zero() -> Mat:
    return tuple(tuple(ZERO for _ in range(4)) for _ in range(4))


def mat_eye() -> Mat:
    return tuple(tuple(ONE if i == j else ZERO for j in range(4)) for i in range(4))


def mat_add(a: Mat, b: Mat) -> Mat:
    return tuple(tuple(x + y for x, y in zip(ra, rb)) for ra, rb in zip(a, b))


def mat_sub(a: Mat, b: Mat) -> Mat:
    return tuple(tuple(x - y for x, y in zip(ra, rb)) for ra, rb in zip(a, b))


def mat_scale(c, a: Mat) -> Mat:
    c = gq(c)
    return tuple(tuple(c * x for x in row) for row in a)


def mat_mul(a: Mat, b: Mat) -> Mat:
    return tuple(
        tuple(sum((a[i][k] * b[k][j] for k in range(4)), ZERO) for j in range(4))
        for i in range(4)
    )


def mat_prod(*factors: Mat) -> Mat:
    out = mat_eye()
    for f in factors:
        out = mat_mul(out, f)
    return out


def mat_T(a: Mat) -> Mat:
    return tuple(tuple(a[j][i] for j in range(4)) for i in range(4))


def mat_is_zero(a: Mat) -> bool:
    return not any(x for row in a for x in row)


def anticommutator(a: Mat, b: Mat) -> Mat:
    return mat_add(mat_mul(a, b), mat_mul(b, a))


def commutator(a: Mat, b: Mat) -> Mat:
    return mat_sub(mat_mul(a, b), mat_mul(b, a))


@dataclass(frozen=True)
class CliffordElement:
    """4x4 matrix over the Gaussian rationals with an optional grade tag"""
    matrix: Mat
    grade_tag: Optional[int] = None

    def __add__(self, other: "CliffordElement") -> "CliffordElement":
        tag = self.grade_tag if self.grade_tag == other.grade_tag else None
        return CliffordElement(mat_add(self.matrix, other.matrix), tag)

    def __sub__(self, other: "CliffordElement") -> "CliffordElement":
        tag = self.grade_tag if self.grade_tag == other.grade_tag else None
        return CliffordElement(mat_sub(self.matrix, other.matrix), tag)

    def __mul__(self, other) -> "CliffordElement":
        if isinstance(other, CliffordElement):
            return CliffordElement(mat_mul(self.matrix, other.matrix))
        return CliffordElement(mat_scale(other, self.matrix), self.grade_tag)

    def __rmul__(self, other) -> "CliffordElement":
        return CliffordElement(mat_scale(other, self.matrix), self.grade_tag)

    def __neg__(self) -> "CliffordElement":
        return CliffordElement(mat_scale(-1, self.matrix), self.grade_tag)

    def transpose(self) -> "CliffordElement":
        return CliffordElement(mat_T(self.matrix))

    def is_zero(self) -> bool:
        return mat_is_zero(self.matrix)


# ============================================================================
# LEVI-CIVITA AND INDEX HELPERS
# ============================================================================

def permutation_sign(seq: Sequence[int]) -> int:
    """Sign of the permutation sorting seq; 0 if seq has repeats"""
    if len(set(seq)) != len(seq):
        return 0
    inversions = sum(1 for i in range(len(seq)) for j in range(i + 1, len(seq)) if seq[i] > seq[j])
    return sign_of(inversions)


def levi_civita(indices: Sequence[int], epsilon_sign: int = 1) -> int:
    """Upper-index ε^{abcd} with ε^{0123} = epsilon_sign"""
    return epsilon_sign * permutation_sign(indices)


def lower_levi_civita(indices: Sequence[int], epsilon_sign: int = 1) -> int:
    """ε_{abcd}; lowering four indices with η costs det η = -1"""
    return -levi_civita(indices, epsilon_sign)


def increasing(n: int, k: int) -> List[MultiIndex]:
    return [tuple(c) for c in itertools.combinations(range(n), k)]


# ============================================================================
# GAMMA BASIS
# ============================================================================

@dataclass(frozen=True)
class GammaBasis:
    """γ^a (upper), γ_a (lower), γ^5, C, C^{-1} and the Majorana reality matrix B"""
    upper: Tuple[Mat, ...]
    lower: Tuple[Mat, ...]
    gamma5: Mat
    charge: Mat
    charge_inverse: Mat
    reality: Mat
    epsilon_sign: int = 1

    def antisymmetrized(self, indices: Sequence[int], lower: bool = False) -> Mat:
        """γ^{[a1}...γ^{aN]} with unit weight"""
        source = self.lower if lower else self.upper
        n = len(indices)
        if n == 0:
            return mat_eye()
        total = mat_zero()
        for perm in itertools.permutations(range(n)):
            s = permutation_sign(perm)
            term = mat_prod(*[source[indices[p]] for p in perm])
            total = mat_add(total, mat_scale(s, term))
        return mat_scale(frac(1, factorial(n)), total)

    def power(self, indices: MultiIndex) -> Mat:
        """Coefficient of v_I (I increasing) in γ^N"""
        return mat_scale(factorial(len(indices)), self.antisymmetrized(indices))

    def element(self, indices: Sequence[int], lower: bool = False) -> CliffordElement:
        return CliffordElement(self.antisymmetrized(indices, lower), grade_tag=len(indices))


def _weyl_gammas() -> Tuple[Mat, ...]:
    i = I_UNIT
    g0 = mat([[0, 0, 1, 0], [0, 0, 0, 1], [1, 0, 0, 0], [0, 1, 0, 0]])
    sigmas = (
        ((0, 1), (1, 0)),
        ((0, -i), (i, 0)),
        ((1, 0), (0, -1)),
    )
    gammas = [g0]
    for s in sigmas:
        rows = [[ZERO] * 4 for _ in range(4)]
        for r in range(2):
            for c in range(2):
                rows[r][c + 2] = gq(s[r][c])
                rows[r + 2][c] = -gq(s[r][c])
        gammas.append(mat(rows))
    return tuple(gammas)


def _charge_conjugation() -> Mat:
    # C = i γ^2 γ^0 in the Weyl representation: diag(ε, -ε), ε = i σ_2
    return mat([[0, 1, 0, 0], [-1, 0, 0, 0], [0, 0, 0, -1], [0, 0, 1, 0]])


def build_gamma_basis(epsilon_sign: int = 1) -> GammaBasis:
    """
    The fixed representation: Weyl-type gammas with the Clifford relation
    for η = diag(-1, 1, 1, 1), C antisymmetric with C γ^a C^{-1} = -(γ^a)^T.

    Args:
        epsilon_sign: value of ε^{0123}
    """
    upper = _weyl_gammas()
    lower = tuple(mat_scale(ETA[a], upper[a]) for a in range(DIM_V))
    gamma5 = mat_scale(I_UNIT, mat_prod(*upper))
    charge = _charge_conjugation()
    charge_inverse = mat_scale(-1, charge)
    # ψ^* = B ψ encodes ψ^† γ^0 = ψ^T C; B = (γ^0^T)^{-1} C^T
    reality = mat_mul(mat_T(upper[0]), mat_T(charge))
    return GammaBasis(upper, lower, gamma5, charge, charge_inverse, reality, epsilon_sign)


# ============================================================================
# V-VALUED MATRICES
# ============================================================================

class VMatrix:
    """Element of End(S) ⊗ ΛV, stored as increasing multi-index -> 4x4 matrix"""

    def __init__(self, parts: Optional[Dict[MultiIndex, Mat]] = None):
        self.parts: Dict[MultiIndex, Mat] = {
            k: v for k, v in (parts or {}).items() if not mat_is_zero(v)
        }

    @classmethod
    def scalar(cls, m: Mat) -> "VMatrix":
        return cls({(): m})

    @classmethod
    def basis_vector(cls, a: int) -> "VMatrix":
        return cls({(a,): mat_eye()})

    def __add__(self, other: "VMatrix") -> "VMatrix":
        out = dict(self.parts)
        for k, v in other.parts.items():
            out[k] = mat_add(out[k], v) if k in out else v
        return VMatrix(out)

    def __sub__(self, other: "VMatrix") -> "VMatrix":
        return self + other.scaled(-1)

    def scaled(self, c) -> "VMatrix":
        return VMatrix({k: mat_scale(c, v) for k, v in self.parts.items()})

    def wedge(self, other: "VMatrix") -> "VMatrix":
        """Matrix product in End(S), wedge product in ΛV (matrices are even)"""
        out: Dict[MultiIndex, Mat] = {}
        for k1, m1 in self.parts.items():
            for k2, m2 in other.parts.items():
                s = permutation_sign(k1 + k2)
                if not s:
                    continue
                key = tuple(sorted(k1 + k2))
                term = mat_scale(s, mat_mul(m1, m2))
                out[key] = mat_add(out[key], term) if key in out else term
        return VMatrix(out)

    def contract(self, a: int) -> "VMatrix":
        """[v_a, ·]: η-contraction into the first slot, odd derivation on ΛV"""
        out: Dict[MultiIndex, Mat] = {}
        for key, m in self.parts.items():
            for pos, b in enumerate(key):
                if b != a:
                    continue
                rest = key[:pos] + key[pos + 1:]
                term = mat_scale(sign_of(pos) * ETA[a], m)
                out[rest] = mat_add(out[rest], term) if rest in out else term
        return VMatrix(out)

    def is_zero(self) -> bool:
        return not self.parts

    def left_matrix(self, m: Mat) -> "VMatrix":
        return VMatrix({k: mat_mul(m, v) for k, v in self.parts.items()})

    def right_matrix(self, m: Mat) -> "VMatrix":
        return VMatrix({k: mat_mul(v, m) for k, v in self.parts.items()})


def gamma_form(basis: GammaBasis, n: int) -> VMatrix:
    """γ^N as a V-valued matrix"""
    return VMatrix({idx: basis.power(idx) for idx in increasing(DIM_V, n)})


def lambda2_action_on_vmatrix(alpha: Dict[Tuple[int, int], GaussRational], x: VMatrix) -> VMatrix:
    """[α, X]_V for α = Σ_{a<b} α^{ab} v_a v_b, via (v_a v_b)· = v_a[v_b,·] - v_b[v_a,·]"""
    out = VMatrix()
    for (a, b), c in alpha.items():
        if not c:
            continue
        term = VMatrix.basis_vector(a).wedge(x.contract(b)) - VMatrix.basis_vector(b).wedge(x.contract(a))
        out = out + term.scaled(c)
    return out


def spin_matrix(basis: GammaBasis, alpha: Dict[Tuple[int, int], GaussRational]) -> Mat:
    """σ_α = -1/2 Σ_{a<b} α^{ab} γ_a γ_b (= -1/4 α^{ab} γ_{ab})"""
    total = mat_zero()
    for (a, b), c in alpha.items():
        if a >= b:
            raise ValidationError(f"Λ²V components must be keyed by a<b, got {(a, b)}")
        total = mat_add(total, mat_scale(gq(c) * frac(-1, 2), mat_mul(basis.lower[a], basis.lower[b])))
    return total


# ============================================================================
# MAJORANA SPINORS AND BILINEARS
# ============================================================================

@dataclass(frozen=True)
class MajoranaSpinor:
    """Four Grassmann components sharing the declared parity"""
    components: Tuple[GrassmannElement, ...]
    parity: Parity

    @property
    def num_generators(self) -> int:
        return self.components[0].num_generators

    def conjugate(self) -> Tuple[GrassmannElement, ...]:
        return tuple(c.conjugate() for c in self.components)

    def scaled(self, c) -> "MajoranaSpinor":
        return MajoranaSpinor(tuple(x * c for x in self.components), self.parity)

    def __add__(self, other: "MajoranaSpinor") -> "MajoranaSpinor":
        if self.parity is not other.parity:
            raise InputError("cannot add spinors of different parity")
        return MajoranaSpinor(tuple(x + y for x, y in zip(self.components, other.components)), self.parity)


def apply_matrix(m: Mat, components: Sequence[GrassmannElement]) -> Tuple[GrassmannElement, ...]:
    n = components[0].num_generators
    out = []
    for i in range(4):
        total = GrassmannElement.zero(n)
        for j in range(4):
            if m[i][j]:
                total = total + components[j] * m[i][j]
        out.append(total)
    return tuple(out)


class VGrass:
    """ΛV-valued Grassmann quantity, coefficient-first normal form c v_I"""

    def __init__(self, parts: Optional[Dict[MultiIndex, GrassmannElement]] = None):
        self.parts = {k: v for k, v in (parts or {}).items() if not v.is_zero()}

    def __add__(self, other: "VGrass") -> "VGrass":
        out = dict(self.parts)
        for k, v in other.parts.items():
            out[k] = out[k] + v if k in out else v
        return VGrass(out)

    def __sub__(self, other: "VGrass") -> "VGrass":
        return self + other.scaled(-1)

    def scaled(self, c) -> "VGrass":
        return VGrass({k: v * c for k, v in self.parts.items()})

    def wedge(self, other: "VGrass") -> "VGrass":
        out: Dict[MultiIndex, GrassmannElement] = {}
        for k1, x in self.parts.items():
            for k2, y in other.parts.items():
                s = permutation_sign(k1 + k2)
                if not s:
                    continue
                key = tuple(sorted(k1 + k2))
                # move y's generators past v_{k1}, monomial by monomial
                moved = GrassmannElement(
                    {m: c * sign_of(len(m) * len(k1)) for m, c in y.coeffs.items()},
                    y.num_generators,
                )
                term = (x * moved) * s
                out[key] = out[key] + term if key in out else term
        return VGrass(out)

    def is_zero(self) -> bool:
        return not self.parts

    def __eq__(self, other) -> bool:
        return isinstance(other, VGrass) and (self - other).is_zero()

    def __repr__(self) -> str:
        return f"VGrass({ {k: v for k, v in sorted(self.parts.items())} })"


def bilinear(basis: GammaBasis, chi: MajoranaSpinor, gamma: VMatrix, psi: MajoranaSpinor) -> VGrass:
    """
    χ̄ Γ ψ for a V-valued matrix Γ, with χ̄ = χ^T C.

    The v_I coefficient is (-1)^{|ψ||I|} χ^T C Γ_I ψ.
    """
    n = chi.num_generators
    out: Dict[MultiIndex, GrassmannElement] = {}
    for key, m in gamma.parts.items():
        cm = mat_mul(basis.charge, m)
        total = GrassmannElement.zero(n)
        for a in range(4):
            for b in range(4):
                if cm[a][b]:
                    total = total + (chi.components[a] * psi.components[b]) * cm[a][b]
        out[key] = total * sign_of(psi.parity.bit * len(key))
    return VGrass(out)


def alpha_times(x: VGrass, alpha: Dict[Tuple[int, int], GaussRational]) -> VGrass:
    """x ∧ α for α ∈ Λ²V with rational components (even, no sign)"""
    n = next(iter(x.parts.values())).num_generators if x.parts else 1
    a2 = VGrass({(a, b): GrassmannElement.scalar(c, n) for (a, b), c in alpha.items() if c})
    return x.wedge(a2)


# ============================================================================
# SERVICE
# ============================================================================

GAMMA_IDENTITIES: Dict[str, str] = {
    "clifford-relation": "§2.1 footnote, {γ_a,γ_b}=-2η_{ab}𝟙",
    "charge-conjugation": "App. B, (Cγ^N)^t=-t_N Cγ^N; C^T=-C",
    "gamma5-square": "App. B, γ^5:=iγ^0γ^1γ^2γ^3 (regression value)",
    "gamma5-anticommutes": "App. B, γ^5:=iγ^0γ^1γ^2γ^3",
    "gamma-contract-1": "App. B, γ^aγ_a=-D",
    "gamma-contract-2": "App. B, γ^aγ^bγ_a=(D-2)γ^b",
    "gamma-contract-3": "App. B, γ^aγ^bγ^cγ_a=(4-D)γ^bγ^c+4η^{bc}",
    "gamma-contract-4": "App. B, γ^aγ^bγ^cγ^dγ_a=2γ^dγ^cγ^b",
    "gamma-product-3": "App. B, γ^aγ^bγ^c=-η^{ab}γ^c-η^{bc}γ^a+η^{ac}γ^b+iε^{dabc}γ_dγ^5",
    "gamma5-2form": "App. B, γ^5γ^{[c}γ^{d]}=-(i/2)ε^{abcd}γ_{ab} (sign corrected)",
    "gamma5-3form": "App. B, γ^5γ^c=(i/6)ε^{abcd}γ_{abc}",
    "v-gamma-N": "App. B, id:v_a,gamma^N",
    "v-gamma-N-alt": "App. B, id:v_a,gamma^N2",
    "gamma-covariance": "§2.1 footnote, d_ωγ=0 ([α,γ]_S+[α,γ]_V=0)",
}

FIERZ_KINDS: Dict[str, str] = {
    "completeness": "App. B, (γ^a)_{α(δ}(γ_a)_{ρβ)}=0",
    "fierz1": "App. B, Fierz:1 (overall sign corrected)",
    "fierz2": "App. B, Fierz:2",
    "lemma-fierz": "App. B, Lemma Fierz, λ̄γ³χ χ̄γψ=0 modulo χ̄γχ",
    "action-of-omega": "App. B, id. action of omega, χ̄γ³[α,ψ]=3χ̄γψα+½χ̄[α,γ³]_Vψ",
}

T_TABLE = (1, -1, -1, 1)


class CliffordService(BaseService):
    """
    Gamma-matrix representation and Appendix-B identity checks

    Provides:
    - The fixed representation and its t-table
    - Majorana spinor sampling and validation
    - Exact checks of contraction, γ^5, flip and Fierz identities
    """

    def __init__(self, epsilon_sign: int = 1, num_generators: int = 16):
        super().__init__()
        if epsilon_sign not in (1, -1):
            raise ConfigurationError("epsilon sign must be +1 or -1")
        self.num_generators = num_generators
        self.basis = build_gamma_basis(epsilon_sign)

    # ========================================================================
    # REPRESENTATION
    # ========================================================================

    def build_gamma_basis(self) -> GammaBasis:
        self._log_operation("build_gamma_basis", epsilon_sign=self.basis.epsilon_sign)
        return self.basis

    def t_table(self) -> Tuple[int, ...]:
        """
        Read t_N off (Cγ^N)^T = -t_N Cγ^N for N = 0..4.

        Raises:
            ValidationError: if some Cγ^{a1..aN} is neither symmetric nor antisymmetric
        """
        values = []
        for n in range(5):
            found = None
            for idx in increasing(DIM_V, n):
                cg = mat_mul(self.basis.charge, self.basis.antisymmetrized(idx))
                if mat_is_zero(mat_add(mat_T(cg), cg)):
                    t = 1
                elif mat_is_zero(mat_sub(mat_T(cg), cg)):
                    t = -1
                else:
                    raise ValidationError(f"Cγ^{idx} has no definite symmetry")
                if found is not None and found != t:
                    raise ValidationError(f"inconsistent t_{n}")
                found = t
            values.append(found)
        return tuple(values)

    def majorana_dimension(self) -> int:
        """Real dimension of {ψ ∈ C^4 : ψ^* = Bψ}, from the kernel of the real 8x8 condition"""
        B = self.basis.reality
        rows = []
        # ψ = x + i y: x = Re(B)x - Im(B)y and -y = Im(B)x + Re(B)y
        for i in range(4):
            rows.append([(gq(1) if i == j else ZERO) - gq(B[i][j].x) for j in range(4)]
                        + [gq(B[i][j].y) for j in range(4)])
        for i in range(4):
            rows.append([-gq(B[i][j].y) for j in range(4)]
                        + [-(gq(1) if i == j else ZERO) - gq(B[i][j].x) for j in range(4)])
        return len(kernel(rows, 8))

    # ========================================================================
    # SPINORS
    # ========================================================================

    def majorana_from_real(self, reals: Sequence[GrassmannElement], parity: Parity) -> MajoranaSpinor:
        """ψ = (r1 + i r2, r3 + i r4, -r3 + i r4, r1 - i r2) for real Grassmann r's"""
        r1, r2, r3, r4 = reals
        i = I_UNIT
        comps = (r1 + r2 * i, r3 + r4 * i, r4 * i - r3, r1 - r2 * i)
        return MajoranaSpinor(comps, parity)

    def random_majorana(self, rng: random.Random, parity: Parity) -> MajoranaSpinor:
        reals = [random_grassmann(rng, parity, self.num_generators) for _ in range(4)]
        return self.majorana_from_real(reals, parity)

    def is_majorana(self, psi: MajoranaSpinor) -> bool:
        """Dirac conjugate equals ψ^T C, i.e. ψ^* = Bψ componentwise"""
        return tuple(psi.conjugate()) == apply_matrix(self.basis.reality, psi.components)

    def majorana_project(self, psi: MajoranaSpinor) -> MajoranaSpinor:
        """P = (1 + J)/2 with J ψ = B^* ψ^*"""
        b_conj = tuple(tuple(conj(x) for x in row) for row in self.basis.reality)
        j_psi = apply_matrix(b_conj, psi.conjugate())
        comps = tuple((x + y) * frac(1, 2) for x, y in zip(psi.components, j_psi))
        return MajoranaSpinor(comps, psi.parity)

    def require_majorana(self, *spinors: MajoranaSpinor) -> None:
        for psi in spinors:
            if not self.is_majorana(psi):
                raise InputError("Majorana condition violated")

    def spin_action(self, alpha: Dict[Tuple[int, int], GaussRational], psi: MajoranaSpinor) -> MajoranaSpinor:
        """[α, ψ] = σ_α ψ"""
        self._log_debug("spin_action", terms=len(alpha))
        sigma = spin_matrix(self.basis, alpha)
        return MajoranaSpinor(apply_matrix(sigma, psi.components), psi.parity)

    # ========================================================================
    # FLIP RELATIONS
    # ========================================================================

    @staticmethod
    def flip_sign(n: int, p1: Parity, p2: Parity) -> int:
        """-t_N (-1)^{N(p1+p2) + p1 p2}, with t_{N+4} = t_N"""
        t = T_TABLE[n % 4]
        return -t * sign_of(n * (p1.bit + p2.bit) + p1.bit * p2.bit)

    def verify_flip(self, n: int, psi: MajoranaSpinor, chi: MajoranaSpinor) -> VerificationReport:
        """
        χ̄γ^Nψ = flip_sign(N, |χ|, |ψ|) ψ̄γ^Nχ for every index tuple.

        Raises:
            InputError: if either spinor violates the Majorana condition
        """
        self._validate_range("N", n, 0, 4)
        self.require_majorana(psi, chi)
        self._log_operation("verify_flip", n=n)
        g = gamma_form(self.basis, n)
        lhs = bilinear(self.basis, chi, g, psi)
        rhs = bilinear(self.basis, psi, g, chi).scaled(self.flip_sign(n, chi.parity, psi.parity))
        report = VerificationReport(suite="flip")
        diff = lhs - rhs
        report.add(f"flip-{n}-{chi.parity.value}-{psi.parity.value}", f"App. B, flip:{n}",
                   diff.is_zero(), witness=repr(diff))
        return report

    # ========================================================================
    # GAMMA IDENTITIES
    # ========================================================================

    def verify_gamma_identity(self, identity_id: str) -> VerificationReport:
        """
        Check one registered identity for every free index combination.

        Raises:
            UnknownIdentityError: if identity_id is not registered
        """
        if identity_id not in GAMMA_IDENTITIES:
            raise UnknownIdentityError(f"unknown identity '{identity_id}'")
        self._log_operation("verify_gamma_identity", identity=identity_id)
        checker: Callable[[], List[Tuple[tuple, bool]]] = getattr(
            self, "_check_" + identity_id.replace("-", "_").lower()
        )
        results = checker()
        failures = [idx for idx, ok in results if not ok]
        report = VerificationReport(suite="gamma-identity")
        report.add(identity_id, GAMMA_IDENTITIES[identity_id], not failures,
                   witness=f"fails at index tuples {failures[:5]}", cases=len(results))
        return report

    def _g(self, a: int) -> Mat:
        return self.basis.upper[a]

    def _gl(self, a: int) -> Mat:
        return self.basis.lower[a]

    def _eta_upper(self, a: int, b: int) -> int:
        return ETA[a] if a == b else 0

    def _contract(self, build: Callable[[int], Mat]) -> Mat:
        total = mat_zero()
        for a in range(DIM_V):
            total = mat_add(total, build(a))
        return total

    def _check_clifford_relation(self):
        out = []
        for a, b in itertools.product(range(DIM_V), repeat=2):
            expected = mat_scale(-2 * (ETA[a] if a == b else 0), mat_eye())
            out.append(((a, b), anticommutator(self._gl(a), self._gl(b)) == expected))
        return out

    def _check_charge_conjugation(self):
        C, Cinv = self.basis.charge, self.basis.charge_inverse
        out = [((), mat_mul(C, Cinv) == mat_eye()), (("T",), mat_T(C) == mat_scale(-1, C))]
        for a in range(DIM_V):
            lhs = mat_prod(C, self._g(a), Cinv)
            out.append(((a,), lhs == mat_scale(-1, mat_T(self._g(a)))))
        return out

    def _check_gamma5_square(self):
        g5 = self.basis.gamma5
        return [((), mat_mul(g5, g5) == mat_eye())]

    def _check_gamma5_anticommutes(self):
        g5 = self.basis.gamma5
        return [((a,), mat_is_zero(anticommutator(g5, self._g(a)))) for a in range(DIM_V)]

    def _check_gamma_contract_1(self):
        lhs = self._contract(lambda a: mat_mul(self._g(a), self._gl(a)))
        return [((), lhs == mat_scale(-4, mat_eye()))]

    def _check_gamma_contract_2(self):
        out = []
        for b in range(DIM_V):
            lhs = self._contract(lambda a: mat_prod(self._g(a), self._g(b), self._gl(a)))
            out.append(((b,), lhs == mat_scale(2, self._g(b))))
        return out

    def _check_gamma_contract_3(self):
        out = []
        for b, c in itertools.product(range(DIM_V), repeat=2):
            lhs = self._contract(lambda a: mat_prod(self._g(a), self._g(b), self._g(c), self._gl(a)))
            out.append(((b, c), lhs == mat_scale(4 * self._eta_upper(b, c), mat_eye())))
        return out

    def _check_gamma_contract_4(self):
        out = []
        for b, c, d in itertools.product(range(DIM_V), repeat=3):
            lhs = self._contract(
                lambda a: mat_prod(self._g(a), self._g(b), self._g(c), self._g(d), self._gl(a))
            )
            out.append(((b, c, d), lhs == mat_scale(2, mat_prod(self._g(d), self._g(c), self._g(b)))))
        return out

    def _check_gamma_product_3(self):
        eps = self.basis.epsilon_sign
        g5 = self.basis.gamma5
        out = []
        for a, b, c in itertools.product(range(DIM_V), repeat=3):
            lhs = mat_prod(self._g(a), self._g(b), self._g(c))
            rhs = mat_add(
                mat_add(mat_scale(-self._eta_upper(a, b), self._g(c)),
                        mat_scale(-self._eta_upper(b, c), self._g(a))),
                mat_scale(self._eta_upper(a, c), self._g(b)),
            )
            for d in range(DIM_V):
                e = levi_civita((d, a, b, c), eps)
                if e:
                    rhs = mat_add(rhs, mat_scale(I_UNIT * e, mat_mul(self._gl(d), g5)))
            out.append(((a, b, c), lhs == rhs))
        return out

    def _check_gamma5_2form(self):
        eps = self.basis.epsilon_sign
        g5 = self.basis.gamma5
        out = []
        for c, d in itertools.product(range(DIM_V), repeat=2):
            lhs = mat_mul(g5, self.basis.antisymmetrized((c, d)))
            rhs = mat_zero()
            for a, b in itertools.product(range(DIM_V), repeat=2):
                e = levi_civita((a, b, c, d), eps)
                if e:
                    rhs = mat_add(rhs, mat_scale(I_UNIT * frac(e, 2), self.basis.antisymmetrized((a, b), lower=True)))
            out.append(((c, d), lhs == rhs))
        return out

    def _check_gamma5_3form(self):
        eps = self.basis.epsilon_sign
        g5 = self.basis.gamma5
        out = []
        for d in range(DIM_V):
            lhs = mat_mul(g5, self._g(d))
            rhs = mat_zero()
            for a, b, c in itertools.product(range(DIM_V), repeat=3):
                e = levi_civita((a, b, c, d), eps)
                if e:
                    rhs = mat_add(rhs, mat_scale(I_UNIT * frac(e, 6), self.basis.antisymmetrized((a, b, c), lower=True)))
            out.append(((d,), lhs == rhs))
        return out

    def _check_v_gamma_n(self):
        out = []
        gamma1 = gamma_form(self.basis, 1)
        for n in range(2, 5):
            gn, gn1, gn2 = (gamma_form(self.basis, k) for k in (n, n - 1, n - 2))
            for a in range(DIM_V):
                lhs = gn.contract(a)
                rhs = gamma1.contract(a).wedge(gn1).scaled(n) + VMatrix.basis_vector(a).wedge(gn2).scaled(n * (n - 1))
                out.append(((n, a), (lhs - rhs).is_zero()))
        return out

    def _check_v_gamma_n_alt(self):
        out = []
        for n in range(2, 5):
            gn, gn1, gn2 = (gamma_form(self.basis, k) for k in (n, n - 1, n - 2))
            for a in range(DIM_V):
                lhs = gn.contract(a)
                rhs = (gn1.right_matrix(self._gl(a)).scaled(n)
                       + gn2.wedge(VMatrix.basis_vector(a)).scaled(n * (n - 1))).scaled(sign_of(n - 1))
                out.append(((n, a), (lhs - rhs).is_zero()))
        return out

    def _check_gamma_covariance(self):
        out = []
        for n in range(1, 4):
            g = gamma_form(self.basis, n)
            for a, b in increasing(DIM_V, 2):
                alpha = {(a, b): ONE}
                sigma = spin_matrix(self.basis, alpha)
                spin_part = g.left_matrix(sigma) - g.right_matrix(sigma)
                vector_part = lambda2_action_on_vmatrix(alpha, g)
                out.append(((n, a, b), (spin_part + vector_part).is_zero()))
        return out

    # ========================================================================
    # FIERZ IDENTITIES
    # ========================================================================

    def verify_fierz(self, kind: str, rng: Optional[random.Random] = None, trials: int = 100,
                     parities: Optional[Dict[str, Parity]] = None) -> VerificationReport:
        """
        Check one Fierz-type identity on random Majorana samples.

        Args:
            kind: one of FIERZ_KINDS
            parities: for lemma-fierz, overrides of the parities of
                λ, χ, ψ (the lemma needs |χ| = 0, |ψ| = 1)

        Raises:
            UnknownIdentityError: for an unknown kind
            InputError: when the parity precondition is violated
        """
        if kind not in FIERZ_KINDS:
            raise UnknownIdentityError(f"unknown Fierz identity '{kind}'")
        rng = rng or random.Random(1)
        self._log_operation("verify_fierz", kind=kind, trials=trials)
        report = VerificationReport(suite="fierz")
        if kind == "completeness":
            bad = self._fierz_completeness_failures()
            report.add(kind, FIERZ_KINDS[kind], not bad, witness=f"nonzero components {bad[:5]}",
                       cases=4 ** 4)
            return report
        check = {
            "fierz1": self._fierz_rearrangement_1,
            "fierz2": self._fierz_rearrangement_2,
            "lemma-fierz": self._fierz_lemma,
            "action-of-omega": self._action_of_omega,
        }[kind]
        if kind == "lemma-fierz":
            chosen = {"lambda": Parity.ODD, "chi": Parity.EVEN, "psi": Parity.ODD}
            chosen.update(parities or {})
            if chosen["chi"] is not Parity.EVEN or chosen["psi"] is not Parity.ODD:
                raise InputError("lemma-fierz requires |χ| = 0 and |ψ| = 1")
            check = lambda r: self._fierz_lemma(r, chosen)
        failures = 0
        witness = None
        for trial in range(trials):
            ok, detail = check(rng)
            if not ok:
                failures += 1
                if witness is None:
                    witness = f"trial {trial}: {detail}"
                    self._log_warning("Fierz counterexample", kind=kind, trial=trial)
        report.add(kind, FIERZ_KINDS[kind], failures == 0, witness=witness, trials=trials)
        return report

    def _fierz_completeness_failures(self) -> List[tuple]:
        cg = [mat_mul(self.basis.charge, self._g(a)) for a in range(DIM_V)]
        cgl = [mat_mul(self.basis.charge, self._gl(a)) for a in range(DIM_V)]
        bad = []
        for al, de, rho, be in itertools.product(range(4), repeat=4):
            total = ZERO
            for x, y, z in itertools.permutations((de, rho, be)):
                for a in range(DIM_V):
                    total = total + cg[a][al][x] * cgl[a][y][z]
            if total:
                bad.append((al, de, rho, be))
        return bad

    def _random_parity(self, rng: random.Random) -> Parity:
        return Parity.ODD if rng.random() < 0.5 else Parity.EVEN

    def _fierz_operands(self, rng: random.Random):
        return [self.random_majorana(rng, self._random_parity(rng)) for _ in range(4)]

    def _fierz_rearrangement_1(self, rng: random.Random):
        l1, l2, l3, l4 = self._fierz_operands(rng)
        p2, p3, p4 = l2.parity.bit, l3.parity.bit, l4.parity.bit
        g1, g3 = gamma_form(self.basis, 1), gamma_form(self.basis, 3)
        b = lambda x, g, y: bilinear(self.basis, x, g, y)
        lhs = b(l1, g3, l2).wedge(b(l3, g1, l4))
        # γ∧γ³ = -γ³∧γ on the top degree, hence the overall minus
        rhs = (b(l1, g1, l3).wedge(b(l2, g3, l4)).scaled(-sign_of(p2 * p3))
               + b(l1, g1, l4).wedge(b(l2, g3, l3)).scaled(-sign_of(p4 * (p2 + p3 + 1) + p3)))
        return (lhs - rhs).is_zero(), [x.parity.value for x in (l1, l2, l3, l4)]

    def _fierz_rearrangement_2(self, rng: random.Random):
        l1, l2, l3, l4 = self._fierz_operands(rng)
        p2, p3, p4 = l2.parity.bit, l3.parity.bit, l4.parity.bit
        g1, g3 = gamma_form(self.basis, 1), gamma_form(self.basis, 3)
        b = lambda x, g, y: bilinear(self.basis, x, g, y)
        lhs = b(l1, g3, l2).wedge(b(l3, g1, l4))
        rhs = (b(l1, g3, l3).wedge(b(l2, g1, l4)).scaled(-sign_of(p2 * p3))
               + b(l1, g3, l4).wedge(b(l2, g1, l3)).scaled(-sign_of(p4 * (p2 + p3 + 1) + p3)))
        return (lhs - rhs).is_zero(), [x.parity.value for x in (l1, l2, l3, l4)]

    def lemma_rows(self, lam: MajoranaSpinor, chi: MajoranaSpinor,
                   psi: MajoranaSpinor) -> Tuple[VGrass, VGrass, VGrass]:
        """λ̄γ³χ χ̄γψ, χ̄γχ λ̄γ³ψ and λ̄γχ χ̄γ³ψ"""
        g1, g3 = gamma_form(self.basis, 1), gamma_form(self.basis, 3)
        b = lambda x, g, y: bilinear(self.basis, x, g, y)
        return (
            b(lam, g3, chi).wedge(b(chi, g1, psi)),
            b(chi, g1, chi).wedge(b(lam, g3, psi)),
            b(lam, g1, chi).wedge(b(chi, g3, psi)),
        )

    def _fierz_lemma(self, rng: random.Random, parities: Optional[Dict[str, Parity]] = None):
        """
        For |χ| = 0, |ψ| = 1 the rows reduce to χ̄γχ: the first and third
        equal ½ and -½ of λ̄γ³ψ χ̄γχ and the second is its reordering, so
        all three vanish exactly when χ̄γχ does.
        """
        chosen = {"lambda": Parity.ODD, "chi": Parity.EVEN, "psi": Parity.ODD}
        chosen.update(parities or {})
        lam = self.random_majorana(rng, chosen["lambda"])
        chi = self.random_majorana(rng, chosen["chi"])
        psi = self.random_majorana(rng, chosen["psi"])
        row1, row2, row3 = self.lemma_rows(lam, chi, psi)
        g1, g3 = gamma_form(self.basis, 1), gamma_form(self.basis, 3)
        reduced = bilinear(self.basis, lam, g3, psi).wedge(bilinear(self.basis, chi, g1, chi))
        residuals = (
            row1 - reduced.scaled(frac(1, 2)),
            row2 - reduced.scaled(sign_of(lam.parity.bit)),
            row3 + row1,
        )
        bad = [i for i, r in enumerate(residuals) if not r.is_zero()]
        return not bad, f"rows off their χ̄γχ reduction: {bad}"

    def _random_alpha(self, rng: random.Random) -> Dict[Tuple[int, int], GaussRational]:
        return {idx: gq(rng.randint(-3, 3)) for idx in increasing(DIM_V, 2)}

    def _action_of_omega(self, rng: random.Random):
        chi = self.random_majorana(rng, self._random_parity(rng))
        psi = self.random_majorana(rng, self._random_parity(rng))
        alpha = self._random_alpha(rng)
        g1, g3 = gamma_form(self.basis, 1), gamma_form(self.basis, 3)
        lhs = bilinear(self.basis, chi, g3, self.spin_action(alpha, psi))
        rhs = (alpha_times(bilinear(self.basis, chi, g1, psi), alpha).scaled(3)
               + bilinear(self.basis, chi, lambda2_action_on_vmatrix(alpha, g3), psi).scaled(frac(1, 2)))
        return (lhs - rhs).is_zero(), {"alpha": {str(k): str(v) for k, v in alpha.items()}}

    # ========================================================================
    # SUITE HELPERS
    # ========================================================================

    def verify_all_gamma_identities(self) -> VerificationReport:
        report = VerificationReport(suite="gamma-identities")
        for identity_id in GAMMA_IDENTITIES:
            report.extend(self.verify_gamma_identity(identity_id))
        return report

    def verify_t_table(self) -> VerificationReport:
        report = VerificationReport(suite="t-table")
        table = self.t_table()
        report.add("t-table", "App. B, t_0=1, t_1=-1, t_2=-1, t_3=1; t_{N+4}=t_N",
                   table == T_TABLE + (T_TABLE[0],), witness=f"computed {table}")
        return report

    def verify_flips_random(self, rng: random.Random, trials: int) -> VerificationReport:
        report = VerificationReport(suite="flip-random")
        for n in range(4):
            failures = 0
            witness = None
            for trial in range(trials):
                p1, p2 = self._random_parity(rng), self._random_parity(rng)
                chi = self.random_majorana(rng, p1)
                psi = self.random_majorana(rng, p2)
                sub = self.verify_flip(n, psi, chi)
                if not sub.passed:
                    failures += 1
                    witness = witness or f"trial {trial} parities ({p1.value}, {p2.value})"
            report.add(f"flip-{n}", f"App. B, flip:{n}", failures == 0, witness=witness, trials=trials)
        return report

    def verify_majorana_structure(self, rng: random.Random, trials: int) -> VerificationReport:
        report = VerificationReport(suite="majorana")
        report.add("majorana-dimension", "§2.1 footnote, ψ̄=ψ^t C (real dimension 4)",
                   self.majorana_dimension() == 4)
        idempotent = True
        for _ in range(trials):
            psi = self.random_majorana(rng, self._random_parity(rng))
            projected = self.majorana_project(psi)
            if projected != psi or not self.is_majorana(psi):
                idempotent = False
                break
        report.add("majorana-projection", "§2.1 footnote, ψ̄=ψ^t C (projection idempotent)", idempotent)
        return report
