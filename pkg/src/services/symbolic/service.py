"""
Symbolic Service

Facade over the expression engine and the jet-level functional calculus:
parsing and normalization, the boundary constraints with their
Hamiltonian vector fields, the constraint bracket table and the bulk
classical master equation.
"""

import random
from typing import Dict, Optional

from src.services.base_service import BaseService, UnmatchedVariationError
from src.services.clifford_service import GammaBasis, build_gamma_basis
from src.services.models import VerificationReport
from src.services.symbolic.brackets import (
    BRACKET_TABLE,
    control_residual,
    poisson_bracket_density,
    verify_rows,
)
from src.services.symbolic.calculus import normalize
from src.services.symbolic.cme import cme_residual, pc_bv_action, truncated_pc_action
from src.services.symbolic.compiler import JetEnvironment
from src.services.symbolic.constraints import build_constraints, pure_gravity_constraints, sample_boundary_point
from src.services.symbolic.expression import DEFAULT_TERM_CEILING, Expression
from src.services.symbolic.functional import LocalFunctional, Residual, equals_mod_d, local_functional
from src.services.symbolic.hamiltonian import (
    VectorFieldAssignment,
    hamiltonian_vf,
    require_matched,
    round_trip_residual,
)
from src.services.symbolic.jets import Jet
from src.services.symbolic.parser import parse
from src.services.symbolic.registry import FieldRegistry, boundary_registry, registry_for

JET_ORDER = 4

LC_SPINOR_TEXT = "1/6*e^bar(psi)^G3^br(c,psi)"
LC_REWRITTEN_TEXT = "-1/2*c^e^bar(psi)^G1^psi"

CONSTRAINT_ANCHORS: Dict[str, str] = {
    "L": "§3.2, L_c",
    "P": "§3.2, P_ξ",
    "M": "§3.2, M_χ",
    "H": "§3.2, H_λ",
}


class SymbolicService(BaseService):
    """
    Expression and local-functional operations

    Provides:
    - parse / normalize over the boundary and bulk registries
    - Constraint functionals and their Hamiltonian vector fields
    - The Poisson bracket table and the master equation residual
    """

    def __init__(self, term_ceiling: int = DEFAULT_TERM_CEILING, gammas: Optional[GammaBasis] = None,
                 order: int = JET_ORDER):
        super().__init__()
        self._validate_range("jet order", order, 1, 8)
        self.term_ceiling = term_ceiling
        self.gammas = gammas or build_gamma_basis()
        self.order = order

    # ========================================================================
    # EXPRESSIONS
    # ========================================================================

    def registry(self, domain: str = "boundary") -> FieldRegistry:
        return registry_for(domain)

    def parse(self, text: str, domain: str = "boundary") -> Expression:
        self._log_debug("parse", domain=domain, length=len(text))
        return parse(text, self.registry(domain))

    def normalize(self, x: Expression, domain: str = "boundary") -> Expression:
        return normalize(x, self.registry(domain), self.term_ceiling)

    # ========================================================================
    # CONSTRAINTS AND VECTOR FIELDS
    # ========================================================================

    def build_constraints(self, reference: str = "w0", pure_gravity: bool = False) -> Dict[str, LocalFunctional]:
        """
        Raises:
            InputError: if the reference connection is not registered
        """
        self._log_operation("build_constraints", reference=reference, pure_gravity=pure_gravity)
        if pure_gravity:
            return pure_gravity_constraints(boundary_registry(), reference)
        return build_constraints(boundary_registry(), reference)

    def hamiltonian_vf(self, name: str, seed: int = 0) -> VectorFieldAssignment:
        """
        X_F of a boundary constraint at one random boundary point.

        Raises:
            UnmatchedVariationError: for an unknown constraint or an
                unmatched variation
        """
        functional = self._constraint(name)
        self._log_operation("hamiltonian_vf", constraint=name, seed=seed)
        return hamiltonian_vf(functional, self.boundary_point(random.Random(seed)))

    def _constraint(self, name: str) -> LocalFunctional:
        constraints = build_constraints()
        if name not in constraints:
            raise UnmatchedVariationError(name, "is not a boundary constraint")
        return constraints[name]

    def boundary_point(self, rng: random.Random) -> JetEnvironment:
        return sample_boundary_point(rng, self.order, self.gammas)

    def check_vector_field(self, name: str, trials: int = 1, seed: int = 0) -> Residual:
        """
        ι_X ϖ − δF at random boundary points; zero when X_F is Hamiltonian.

        Raises:
            UnmatchedVariationError: naming the first unmatched variation
        """
        functional = self._constraint(name)
        self._log_operation("check_vector_field", constraint=name, trials=trials, seed=seed)
        rng = random.Random(seed)
        for _ in range(trials):
            env = self.boundary_point(rng)
            residual = round_trip_residual(functional, hamiltonian_vf(functional, env).components, env)
            require_matched(name, residual)
        return Residual()

    def poisson_bracket(self, f_name: str, g_name: str, seed: int = 0) -> Jet:
        """Density of {F, G} = X_F(G) at one random boundary point"""
        env = self.boundary_point(random.Random(seed))
        return poisson_bracket_density(self._constraint(f_name), self._constraint(g_name), env)

    # ========================================================================
    # REPORTS
    # ========================================================================

    def verify_vector_fields(self, trials: int, seed: int) -> VerificationReport:
        report = VerificationReport(suite="vector-fields")
        for name, anchor in CONSTRAINT_ANCHORS.items():
            try:
                self.check_vector_field(name, trials, seed)
                ok, witness = True, None
            except UnmatchedVariationError as e:
                ok, witness = False, str(e)
                self._log_warning("vector field unmatched", constraint=name, seed=seed)
            report.add(f"vf-{name}", f"{anchor}, ι_X ϖ = δ{name}", ok, witness=witness, trials=trials)
        return report

    def verify_bracket_table(self, trials: int, seed: int) -> VerificationReport:
        """Every row of the bracket table modulo d, plus the sign-flipped control"""
        self._log_operation("verify_bracket_table", trials=trials, seed=seed)
        report = VerificationReport(suite="bracket-table")
        residuals = verify_rows(BRACKET_TABLE, trials, seed, self.order, self.gammas)
        for row in BRACKET_TABLE:
            residual = residuals[row.row_id]
            if not residual.is_zero:
                self._log_warning("bracket row failed", row=row.row_id, seed=seed)
            report.add(f"row-{row.row_id}", f"{row.anchor} = {row.expected}", residual.is_zero,
                       witness=residual.witness(), trials=trials)
        env = self.boundary_point(random.Random(seed))
        control = control_residual(env, build_constraints())
        report.add("control-perturbed-L", "App. C, {L_c,L_c} with a sign-flipped L_c must fail",
                   not control.is_zero, witness="perturbed row closed")
        return report

    def verify_lc_rewriting(self, trials: int, seed: int) -> VerificationReport:
        """The two printed spinor parts of L_c agree modulo d"""
        registry = boundary_registry()
        left = local_functional("L_spinor", LC_SPINOR_TEXT, registry)
        right = local_functional("L_rewritten", LC_REWRITTEN_TEXT, registry)
        residual = equals_mod_d(left, right, self.boundary_point, trials, seed)
        report = VerificationReport(suite="lc-rewriting")
        report.add("lc-rewriting", "§3.2 footnote, −½c e ψ̄γψ = (1/3!) e ψ̄γ³[c,ψ]", residual.is_zero,
                   witness=residual.witness(), trials=trials)
        return report

    def cme_residual(self, truncated: bool = False, trials: int = 1, seed: int = 0) -> Residual:
        action = truncated_pc_action() if truncated else pc_bv_action()
        self._log_operation("cme_residual", action=action.name, trials=trials, seed=seed)
        return cme_residual(action, trials, seed, self.order)

    def verify_cme(self, trials: int, seed: int) -> VerificationReport:
        report = VerificationReport(suite="cme-pc")
        residual = self.cme_residual(False, trials, seed)
        report.add("cme-pc", "§4, BV PC action, (S,S) ≡ 0 mod d", residual.is_zero,
                   witness=residual.witness(), trials=trials, action=pc_bv_action().integrand_text())
        control = self.cme_residual(True, 1, seed)
        report.add("cme-control-no-ghost-terms", "§4, BV PC action without ghost terms must fail",
                   not control.is_zero, witness="truncated action satisfied the master equation")
        return report

