"""
Cylinder Service

Entry point for the cylinder computations: splitting bulk expressions
along the collar, substitution maps, transgression and the symplectic
and k‡ verifications built on them.
"""

from src.services.base_service import BaseService
from src.services.cylinder.kdag import q_of_structural, verify_kdag
from src.services.cylinder.ledger import verify_aksz_symplectic
from src.services.cylinder.phi1 import verify_phi1_symplectic
from src.services.cylinder.pullback import verify_pc_pullback
from src.services.cylinder.split import split_cylinder
from src.services.cylinder.substitutions import SubstitutionMap, apply_substitution
from src.services.cylinder.transgression import transgress
from src.services.models import VerificationReport
from src.services.symbolic.expression import DEFAULT_TERM_CEILING, Expression


class CylinderService(BaseService):
    """
    Cylinder-level BV data

    Provides:
    - Tangential/transversal splitting of bulk expressions
    - Substitution maps and transgression
    - φ1, Φ_r, k‡ and PC pullback reports
    """

    def __init__(self, term_ceiling: int = DEFAULT_TERM_CEILING):
        super().__init__()
        self.term_ceiling = term_ceiling

    def split_cylinder(self, x: Expression, expand_normal_frame: bool = True) -> Expression:
        self._log_operation("split_cylinder", terms=len(x.terms))
        return split_cylinder(x, expand_normal_frame)

    def apply_substitution(self, smap: SubstitutionMap, x: Expression) -> Expression:
        """
        Raises:
            RuleTableGapError: if x mentions a symbol the map has no rule for
        """
        self._log_operation("apply_substitution", map=smap.name, terms=len(x.terms))
        return apply_substitution(x, smap, self.term_ceiling)

    def transgress(self, x: Expression, out_degree: int) -> Expression:
        self._validate_range("out_degree", out_degree, 0, 2)
        self._log_operation("transgress", out_degree=out_degree)
        return transgress(x, out_degree, self.term_ceiling)

    def q_of_structural(self) -> Expression:
        return q_of_structural()

    # ========================================================================
    # REPORTS
    # ========================================================================

    def check_kdag_equivalence(self, trials: int, seed: int) -> VerificationReport:
        self._log_operation("check_kdag_equivalence", trials=trials, seed=seed)
        return verify_kdag(trials, seed)

    def verify_phi1_symplectic(self) -> VerificationReport:
        self._log_operation("verify_phi1_symplectic")
        return verify_phi1_symplectic()

    def verify_aksz_symplectic(self) -> VerificationReport:
        self._log_operation("verify_aksz_symplectic")
        report = verify_aksz_symplectic()
        for item in report.failures():
            self._log_debug("ledger row open", check=item.check_id)
        return report

    def pc_action_pullback_check(self, trials: int, seed: int) -> VerificationReport:
        self._log_operation("pc_action_pullback_check", trials=trials, seed=seed)
        return verify_pc_pullback(trials, seed)
