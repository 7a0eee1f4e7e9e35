"""
Decomposition Service

Constructive solvers for the unique-decomposition lemmas of the fiber
algebra and for the representative-fixing of the boundary structural
constraints. Every split is an exact linear solve against explicit
subspace bases; results carry their residual.
"""

import random
from typing import Callable, Dict, List, Optional, Sequence, Tuple

from src.services.base_service import BaseService, SingularSystemError, ValidationError
from src.services.clifford_service import GammaBasis, build_gamma_basis
from src.services.exact_linalg import rank, solve_unique, transpose
from src.services.fiber_service import (
    FiberForm,
    FiberService,
    FiberSpace,
    Frame,
    certify,
    random_frame,
    wedge,
    wedge_all,
)
from src.services.models import MapCertificate, Parity, SplitResult, VerificationReport
from src.services.scalars import I_UNIT, ZERO, frac, gq

Generator = Tuple[str, FiberForm, FiberForm]


def _basis_forms(space: FiberSpace) -> List[FiberForm]:
    return [FiberForm(space, {key: 1}) for key in space.basis]


def _kernel_forms(cert: MapCertificate, space: FiberSpace) -> List[FiberForm]:
    return [FiberForm.from_vector(space, v) for v in cert.kernel_basis]


def _reshuffle(forms: List[FiberForm]) -> List[FiberForm]:
    """An alternative basis of the same span: reversed, then partial sums"""
    forms = list(reversed(forms))
    out = []
    for i, f in enumerate(forms):
        combo = f
        for g in forms[i + 1:i + 2]:
            combo = combo + g
        out.append(combo)
    return out


def lorentz_transform(x: FiberForm, lam: Sequence[Sequence]) -> FiberForm:
    """Act with Λ^a_b on every V index of x (spinor indices untouched)"""
    base = x.base_dim
    images = [
        FiberForm(FiberSpace(base, 0, 1), {((), (a,), None): gq(lam[a][b]) for a in range(4)})
        for b in range(4)
    ]
    total = FiberForm(x.space)
    for (I, J, s), c in x.coeffs.items():
        head = FiberForm(FiberSpace(base, len(I), 0, x.spinor, x.parity), {(I, (), s): c})
        if J:
            total = total + wedge(head, wedge_all([images[b] for b in J]))
        else:
            total = total + head
    return total


def lorentz_transform_frame(frame: Frame, lam: Sequence[Sequence]) -> Frame:
    e = [[sum((gq(lam[a][b]) * frame.e[m][b] for b in range(4)), ZERO) for a in range(4)]
         for m in range(frame.base_dim)]
    eps = None
    if frame.epsilon_n is not None:
        eps = [sum((gq(lam[a][b]) * frame.epsilon_n[b] for b in range(4)), ZERO) for a in range(4)]
    return Frame(frame.base_dim, e, eps)


# boost in the (0,1) plane followed by a rotation in the (2,3) plane; both rational
SAMPLE_LORENTZ = (
    (frac(5, 4), frac(3, 4), 0, 0),
    (frac(3, 4), frac(5, 4), 0, 0),
    (0, 0, frac(3, 5), frac(-4, 5)),
    (0, 0, frac(4, 5), frac(3, 5)),
)


class DecompositionService(BaseService):
    """
    Unique-decomposition solvers

    Provides:
    - Boundary splits (2,2), (1,3), k̃ = ǩ + r and the structural fix
    - Membership checks of the (2,1) and (1,2) lemmas
    - Bulk spinor splits (3,1) and (2,1)
    - Isomorphism certificates of the spinor lemmas
    """

    def __init__(self, basis: Optional[GammaBasis] = None):
        super().__init__()
        self.gammas = basis or build_gamma_basis()
        self.fibers = FiberService(self.gammas)

    # ========================================================================
    # GENERIC SOLVER
    # ========================================================================

    def _split(self, name: str, target: FiberForm, groups: Dict[str, List[Generator]]) -> SplitResult:
        """
        Solve target = Σ_groups Σ_i c_i image_i and rebuild the preimages.

        Each generator is (label, preimage, image).

        Raises:
            SingularSystemError: if the images do not form a basis of a
                subspace containing target
        """
        columns = []
        for gens in groups.values():
            columns.extend(image.vector() for _, _, image in gens)
        n = len(columns)
        if not n:
            raise SingularSystemError(f"{name}: no generators")
        matrix = transpose(columns)
        coeffs = solve_unique(matrix, target.vector(), n)
        parts: Dict[str, FiberForm] = {}
        images: Dict[str, FiberForm] = {}
        offset = 0
        for group, gens in groups.items():
            pre = FiberForm(gens[0][1].space)
            img = FiberForm(target.space)
            for idx, (_, preimage, image) in enumerate(gens):
                c = coeffs[offset + idx]
                if c:
                    pre = pre + preimage.scaled(c)
                    img = img + image.scaled(c)
            parts[group] = pre
            images[group] = img
            offset += len(gens)
        reconstructed = FiberForm(target.space)
        for img in images.values():
            reconstructed = reconstructed + img
        result = SplitResult(name=name, parts=parts, residual=target - reconstructed)
        self._log_debug(f"{name} solved", generators=n)
        return result

    def _require_boundary(self, frame: Frame) -> None:
        if not frame.is_boundary:
            raise ValidationError("this decomposition lives on the boundary")
        frame.require_nondegenerate()

    def _require_bulk(self, frame: Frame) -> None:
        if frame.is_boundary:
            raise ValidationError("this decomposition lives in the bulk")
        frame.require_nondegenerate()

    def _check_degree(self, x: FiberForm, k: int, l: int, spinor: str = "none") -> None:
        if (x.k, x.l, x.spinor) != (k, l, spinor):
            raise ValidationError(f"expected an element of Ω({k},{l}{'' if spinor == 'none' else ',' + spinor}), got {x.space.label()}")

    # ========================================================================
    # BOUNDARY SUBSPACES
    # ========================================================================

    def ker_W12(self, frame: Frame, variant: int = 0) -> List[FiberForm]:
        """Basis of ker W_1^{∂(1,2)} (dimension 6 on nondegenerate frames)"""
        key = "ker_W12"
        if key not in frame._cache:
            cert = self.fibers.W_map(frame, 1, 1, 2)
            frame._cache[key] = _kernel_forms(cert, FiberSpace(3, 1, 2))
        forms = frame._cache[key]
        return _reshuffle(forms) if variant else list(forms)

    def _image_generators(self, frame: Frame, i: int, j: int, variant: int) -> List[Generator]:
        space = FiberSpace(frame.base_dim, i, j)
        forms = _basis_forms(space)
        if variant:
            forms = _reshuffle(forms)
        e = frame.e_form()
        return [(f"e·{idx}", f, wedge(e, f)) for idx, f in enumerate(forms)]

    # ========================================================================
    # BOUNDARY SPLITS
    # ========================================================================

    def split_22(self, beta: FiberForm, frame: Frame, variant: int = 0) -> SplitResult:
        """
        β = e ρ + ε_n [e, v] with ρ ∈ Ω∂(1,1), v ∈ ker W_1^{∂(1,2)}.

        Raises:
            SingularSystemError: on a degenerate frame
        """
        self._require_boundary(frame)
        self._check_degree(beta, 2, 2)
        self._log_operation("split_22", variant=variant)
        eps = frame.epsilon_form()
        v_gens = [
            (f"v{idx}", v, wedge(eps, self.fibers.bracket_e(frame, v)))
            for idx, v in enumerate(self.ker_W12(frame, variant))
        ]
        groups = {"rho": self._image_generators(frame, 1, 1, variant), "v": v_gens}
        return self._split("split_22", beta, groups)

    def check_21(self, alpha: FiberForm, frame: Frame) -> bool:
        """e α = 0 and ε_n α ∈ Im W_1^{∂(1,1)}; by the lemma this holds iff α = 0"""
        self._require_boundary(frame)
        self._check_degree(alpha, 2, 1)
        if not wedge(frame.e_form(), alpha).is_zero():
            return False
        return self._in_image(frame, 1, 1, wedge(frame.epsilon_form(), alpha))

    def check_12(self, a: FiberForm, frame: Frame) -> bool:
        """e a = 0 and ε_n a ∈ Im W_1^{∂(0,2)}; by the lemma this holds iff a = 0"""
        self._require_boundary(frame)
        self._check_degree(a, 1, 2)
        if not wedge(frame.e_form(), a).is_zero():
            return False
        return self._in_image(frame, 0, 2, wedge(frame.epsilon_form(), a))

    def _in_image(self, frame: Frame, i: int, j: int, target: FiberForm) -> bool:
        cert = self.fibers.W_map(frame, 1, i, j)
        columns = cert.image_basis
        if not columns:
            return target.is_zero()
        return rank(transpose(columns + [target.vector()])) == len(columns)

    def split_cdag(self, k_tilde: FiberForm, frame: Frame, variant: int = 0) -> SplitResult:
        """
        k̃ = ǩ + r with e r = 0 and ε_n ǩ = e ǎ.

        Parts: k_check, r, a_check (ǎ), b_check (b̌ with r = [e, b̌]).
        """
        self._require_boundary(frame)
        self._check_degree(k_tilde, 2, 1)
        self._log_operation("split_cdag", variant=variant)
        inner = self.split_22(wedge(frame.epsilon_form(), k_tilde), frame, variant)
        r = self.fibers.bracket_e(frame, inner["v"])
        k_check = k_tilde - r
        residual = wedge(frame.epsilon_form(), k_check) - wedge(frame.e_form(), inner["rho"])
        if not wedge(frame.e_form(), r).is_zero():
            self._log_warning("split_cdag: e r does not vanish")
            residual = residual + wedge(frame.epsilon_form(), k_tilde)
        return SplitResult(
            name="split_cdag",
            parts={"k_check": k_check, "r": r, "a_check": inner["rho"], "b_check": inner["v"]},
            residual=residual,
        )

    def split_13(self, theta: FiberForm, frame: Frame, variant: int = 0) -> SplitResult:
        """Θ = e α + ε_n β with α ∈ Ω∂(0,2), β ∈ ker W_1^{∂(1,2)} (α_∂, β_∂)"""
        self._require_boundary(frame)
        self._check_degree(theta, 1, 3)
        self._log_operation("split_13", variant=variant)
        eps = frame.epsilon_form()
        beta_gens = [(f"b{idx}", b, wedge(eps, b)) for idx, b in enumerate(self.ker_W12(frame, variant))]
        groups = {"alpha": self._image_generators(frame, 0, 2, variant), "beta": beta_gens}
        return self._split("split_13", theta, groups)

    def alpha_boundary(self, theta: FiberForm, frame: Frame) -> FiberForm:
        return self.split_13(theta, frame)["alpha"]

    def beta_boundary(self, theta: FiberForm, frame: Frame) -> FiberForm:
        return self.split_13(theta, frame)["beta"]

    def structural_fix(self, torsion: FiberForm, frame: Frame, variant: int = 0) -> SplitResult:
        """
        Unique v ∈ ker W_1^{∂(1,2)} and σ ∈ Ω∂(1,1) with ε_n(T - [v, e]) = e σ.

        T is the (2,1) fiber value of d_ω e - ½ ψ̄γψ; shifting ω -> ω - v
        shifts T by -[v, e], and [v, e] = [e, v] for two 1-forms.
        """
        self._require_boundary(frame)
        self._check_degree(torsion, 2, 1)
        self._log_operation("structural_fix", variant=variant)
        inner = self.split_22(wedge(frame.epsilon_form(), torsion), frame, variant)
        v, sigma = inner["v"], inner["rho"]
        fixed = torsion - self.fibers.bracket_e(frame, v)
        residual = wedge(frame.epsilon_form(), fixed) - wedge(frame.e_form(), sigma)
        return SplitResult(name="structural_fix", parts={"v": v, "sigma": sigma}, residual=residual)

    # ========================================================================
    # BULK SPINOR SPLITS
    # ========================================================================

    def _spinor_space(self, frame: Frame, k: int, l: int) -> FiberSpace:
        return FiberSpace(frame.base_dim, k, l, "column", Parity.ODD)

    def _kernel_of(self, frame: Frame, cache_key: str, source: FiberSpace, target: FiberSpace,
                   fn: Callable[[FiberForm], FiberForm]) -> List[FiberForm]:
        if cache_key not in frame._cache:
            cert = certify(cache_key, source, target, fn)
            frame._cache[cache_key] = _kernel_forms(cert, source)
        return frame._cache[cache_key]

    def gamma3_kernel_31(self, frame: Frame) -> List[FiberForm]:
        """Basis of ker(β -> γ^3 β) on spinor Ω(3,1)"""
        g3 = frame.gamma_power(3, self.gammas)
        return self._kernel_of(frame, "ker_gamma3_31", self._spinor_space(frame, 3, 1),
                               self._spinor_space(frame, 3, 4), lambda b: wedge(g3, b))

    def gamma_gamma3_kernel_21(self, frame: Frame) -> List[FiberForm]:
        """Basis of ker(β -> γ̲ γ^3 β) on spinor Ω(2,1)"""
        g3 = frame.gamma_power(3, self.gammas)
        gu = frame.gamma_underline(self.gammas)
        return self._kernel_of(frame, "ker_ugamma_gamma3_21", self._spinor_space(frame, 2, 1),
                               self._spinor_space(frame, 3, 4), lambda b: wedge(gu, wedge(g3, b)))

    def spinor_split_31(self, theta: FiberForm, frame: Frame, variant: int = 0) -> SplitResult:
        """θ = i e γ̲ α + β with α a spinor 1-form and γ^3 β = 0"""
        self._require_bulk(frame)
        self._check_degree(theta, 3, 1, "column")
        self._log_operation("spinor_split_31", variant=variant)
        e = frame.e_form()
        gu = frame.gamma_underline(self.gammas)
        alphas = _basis_forms(self._spinor_space(frame, 1, 0))
        betas = list(self.gamma3_kernel_31(frame))
        if variant:
            alphas, betas = _reshuffle(alphas), _reshuffle(betas)
        groups = {
            "alpha": [(f"a{i}", a, wedge(e, wedge(gu, a)).scaled(I_UNIT)) for i, a in enumerate(alphas)],
            "beta": [(f"b{i}", b, b) for i, b in enumerate(betas)],
        }
        return self._split("spinor_split_31", theta.with_parity(Parity.ODD), groups)

    def spinor_split_21(self, theta: FiberForm, frame: Frame, variant: int = 0) -> SplitResult:
        """θ = e κ + ϰ with κ a spinor 1-form and γ̲ γ^3 ϰ = 0"""
        self._require_bulk(frame)
        self._check_degree(theta, 2, 1, "column")
        self._log_operation("spinor_split_21", variant=variant)
        e = frame.e_form()
        kappas = _basis_forms(self._spinor_space(frame, 1, 0))
        rests = list(self.gamma_gamma3_kernel_21(frame))
        if variant:
            kappas, rests = _reshuffle(kappas), _reshuffle(rests)
        groups = {
            "kappa": [(f"k{i}", k, wedge(e, k)) for i, k in enumerate(kappas)],
            "varkappa": [(f"r{i}", r, r) for i, r in enumerate(rests)],
        }
        return self._split("spinor_split_21", theta.with_parity(Parity.ODD), groups)

    def invert_e_gamma3(self, target: FiberForm, frame: Frame) -> FiberForm:
        """
        Solve e γ^3 X = target for a spinor 1-form X on the boundary.

        Raises:
            SingularSystemError: if the map is not invertible on this frame
        """
        self._require_boundary(frame)
        self._check_degree(target, 2, 4, "column")
        e, g3 = frame.e_form(), frame.gamma_power(3, self.gammas)
        source = self._spinor_space(frame, 1, 0)
        gens = [(f"x{i}", x, wedge(e, wedge(g3, x))) for i, x in enumerate(_basis_forms(source))]
        result = self._split("invert_e_gamma3", target.with_parity(Parity.ODD), {"x": gens})
        return result["x"]

    # ========================================================================
    # ISOMORPHISM CERTIFICATES
    # ========================================================================

    def spinor_map_certificates(self, frame: Frame) -> Dict[str, Tuple[MapCertificate, str, str]]:
        """Certificates of the spinor lemmas with their claim ('iso' or 'inj') and anchor"""
        frame.require_nondegenerate()
        g3 = frame.gamma_power(3, self.gammas)
        g1 = frame.gamma_power(1, self.gammas)
        e = frame.e_form()
        sp = lambda k, l: self._spinor_space(frame, k, l)
        certs: Dict[str, Tuple[MapCertificate, str, str]] = {}
        if frame.is_boundary:
            e3 = frame.e_power(3)
            eps = frame.epsilon_form()
            scalar = certify("eps_n e^3/3!", FiberSpace(3, 0, 0), FiberSpace(3, 3, 4),
                             lambda x: wedge(eps, wedge(e3, x)))
            certs["eps-e3"] = (scalar, "iso", 'App. B, Lemma iso (3,4)=(0,4), "is an isomorphism"')
            spinor = certify("e^3 gamma/3!", sp(0, 0), sp(3, 4), lambda x: wedge(e3, wedge(g1, x)))
            certs["e3-gamma"] = (spinor, "iso", 'App. B, Corollary "\\frac{1}{3!}e^3γ"')
            eg3 = certify("e gamma^3 (boundary)", sp(1, 0), sp(2, 4), lambda x: wedge(e, wedge(g3, x)))
            certs["e-gamma3-boundary"] = (eg3, "iso", "§3.2.2, eγ³ inversion for 𝕄_ψ and ℍ_ψ")
        else:
            gu = frame.gamma_underline(self.gammas)
            sixth = frac(1, 6)
            inj = certify("e gamma^3/3!", sp(1, 0), sp(2, 4), lambda x: wedge(e, wedge(g3, x)).scaled(sixth))
            certs["e-gamma3"] = (inj, "inj", 'App. B, Lemma "injectivity egamma^3"')
            iso = certify("e gamma^3 ugamma/3!", sp(1, 0), sp(3, 4),
                          lambda x: wedge(e, wedge(g3, wedge(gu, x))).scaled(sixth))
            certs["e-gamma3-ugamma"] = (iso, "iso", 'App. B, Lemma "iso (1,0) (3,4)"')
            iso_bar = certify("e ugamma gamma^3/3!", sp(1, 0), sp(3, 4),
                              lambda x: wedge(e, wedge(gu, wedge(g3, x))).scaled(sixth))
            certs["e-ugamma-gamma3"] = (iso_bar, "iso", 'App. B, Remark after Lemma "iso (1,0) (3,4)"')
        return certs

    def certify_isos(self, frame: Frame) -> VerificationReport:
        """
        Injectivity/bijectivity of every map cited by the spinor lemmas.

        Raises:
            DegenerateFrameError: if the frame fails the nondegeneracy guard
        """
        self._log_operation("certify_isos", boundary=frame.is_boundary)
        report = VerificationReport(suite="certify-isos")
        for name, (cert, claim, anchor) in self.spinor_map_certificates(frame).items():
            ok = cert.bijective if claim == "iso" else cert.injective
            report.add(f"{name}-{claim}", anchor, ok,
                       witness=f"rank {cert.rank} on {cert.source_dim}->{cert.target_dim}")
        if not frame.is_boundary:
            report.extend(self.fibers.certify_useful_isos(frame))
        return report

    # ========================================================================
    # RANDOMIZED SUITE CHECKS
    # ========================================================================

    def random_form(self, rng: random.Random, space: FiberSpace, bound: int = 3) -> FiberForm:
        return FiberForm.from_vector(space, [gq(rng.randint(-bound, bound)) for _ in range(space.dim)])

    def check_split(self, name: str, split: Callable[..., SplitResult], x: FiberForm,
                    frame: Frame) -> Tuple[bool, bool]:
        """(exact reconstruction, identical parts under the alternative basis)"""
        first = split(x, frame, 0)
        second = split(x, frame, 1)
        same = all(first[key] == second[key] for key in first.parts)
        return first.exact, same

    def verify_decompositions(self, trials: int, seed: int) -> VerificationReport:
        """Reconstruction and basis-change stability of every split on random inputs"""
        self._log_operation("verify_decompositions", trials=trials, seed=seed)
        rng = random.Random(seed)
        specs = [
            ("split_22", self.split_22, 3, (2, 2, "none"), 'App. B, Lemma splitting (2,2), "there exist a unique v"'),
            ("split_cdag", self.split_cdag, 3, (2, 1, "none"), 'App. B, Lemma split cdag'),
            ("split_13", self.split_13, 3, (1, 3, "none"), 'App. B, Lemma decomposition (1,3)'),
            ("structural_fix", self.structural_fix, 3, (2, 1, "none"), 'Thm "fix rep of omega bdry"'),
            ("spinor_split_31", self.spinor_split_31, 4, (3, 1, "column"), 'App. B, Lemma splitting (3,1)'),
            ("spinor_split_21", self.spinor_split_21, 4, (2, 1, "column"), 'App. B, Lemma splitting (2,1) spin'),
        ]
        report = VerificationReport(suite="decompositions")
        for name, split, base_dim, (k, l, spinor), anchor in specs:
            exact_fail = unique_fail = None
            parity = Parity.ODD if spinor != "none" else Parity.EVEN
            for trial in range(trials):
                frame = random_frame(rng, base_dim)
                x = self.random_form(rng, FiberSpace(base_dim, k, l, spinor, parity))
                exact, same = self.check_split(name, split, x, frame)
                if not exact and exact_fail is None:
                    exact_fail = f"trial {trial}"
                if not same and unique_fail is None:
                    unique_fail = f"trial {trial}"
            report.add(f"{name}-reconstruct", anchor, exact_fail is None, witness=exact_fail, trials=trials)
            report.add(f"{name}-unique", anchor, unique_fail is None, witness=unique_fail, trials=trials)
        report.extend(self.verify_membership_lemmas(rng, trials))
        report.extend(self.verify_covariance(rng, min(trials, 10)))
        return report

    def verify_membership_lemmas(self, rng: random.Random, trials: int) -> VerificationReport:
        """(2,1) and (1,2) lemmas: the membership system holds only for zero"""
        report = VerificationReport(suite="membership-lemmas")
        bad_21 = bad_12 = None
        for trial in range(trials):
            frame = random_frame(rng, 3)
            k21 = self.fibers.W_map(frame, 1, 2, 1)
            alpha = FiberForm.from_vector(FiberSpace(3, 2, 1), self._random_combo(rng, k21.kernel_basis, 12))
            if self.check_21(alpha, frame) != alpha.is_zero() or not self.check_21(FiberForm(FiberSpace(3, 2, 1)), frame):
                bad_21 = bad_21 or f"trial {trial}"
            a = FiberForm.from_vector(FiberSpace(3, 1, 2), self._random_combo(rng, self.fibers.W_map(frame, 1, 1, 2).kernel_basis, 18))
            if self.check_12(a, frame) != a.is_zero() or not self.check_12(FiberForm(FiberSpace(3, 1, 2)), frame):
                bad_12 = bad_12 or f"trial {trial}"
        report.add("check_21", 'App. B, Lemma splitting (2,1), "ϵ_n α ∈ Ima W_1^{∂,(1,1)}"', bad_21 is None,
                   witness=bad_21, trials=trials)
        report.add("check_12", 'App. B, Lemma splitting (1,2), "Let a∈Ω^{(1,2)}_∂"', bad_12 is None,
                   witness=bad_12, trials=trials)
        return report

    @staticmethod
    def _random_combo(rng: random.Random, basis: List[List], dim: int) -> List:
        out = [ZERO] * dim
        for v in basis:
            c = gq(rng.randint(-3, 3))
            out = [o + c * x for o, x in zip(out, v)]
        return out

    def verify_covariance(self, rng: random.Random, trials: int) -> VerificationReport:
        """split_22 commutes with a rational Lorentz transformation of (e, ε_n, β)"""
        report = VerificationReport(suite="covariance")
        bad = None
        for trial in range(trials):
            frame = random_frame(rng, 3)
            beta = self.random_form(rng, FiberSpace(3, 2, 2))
            moved = lorentz_transform_frame(frame, SAMPLE_LORENTZ)
            before = self.split_22(beta, frame)
            after = self.split_22(lorentz_transform(beta, SAMPLE_LORENTZ), moved)
            ok = (lorentz_transform(before["rho"], SAMPLE_LORENTZ) == after["rho"]
                  and lorentz_transform(before["v"], SAMPLE_LORENTZ) == after["v"])
            if not ok:
                bad = bad or f"trial {trial}"
        report.add("split_22-covariance", 'App. B, Lemma splitting (2,2) (frame covariance)', bad is None,
                   witness=bad, trials=trials)
        return report
