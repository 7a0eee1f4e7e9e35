"""
Verification Service

Registry of the named verification suites and the runner that turns a
SuiteConfig into a VerificationReport. Reports depend only on
(suite, seed, trials) and the recorded options.
"""

import random
import time
from dataclasses import dataclass, fields
from collections import Counter
from typing import Any, Callable, Dict, List, Mapping, Tuple

from src.services.base_service import BaseService, UnknownSuiteError, ValidationError
from src.services.clifford_service import FIERZ_KINDS, CliffordService
from src.services.cylinder.service import CylinderService
from src.services.decomposition_service import DecompositionService
from src.services.fiber_service import FiberService, random_frame
from src.services.models import ReportFormat, SuiteConfig, VerificationReport
from src.services.symbolic.service import SymbolicService

# jet-point checks are far heavier than fiber samples
MAX_JET_POINTS = 2


@dataclass(frozen=True)
class SuiteEntry:
    """A registered suite and the claims it checks"""
    name: str
    description: str
    checks: Tuple[str, ...]

    def to_dict(self) -> dict:
        return {'name': self.name, 'description': self.description, 'checks': list(self.checks)}


SUITES: Dict[str, SuiteEntry] = {entry.name: entry for entry in (
    SuiteEntry("appendixB", "Gamma-matrix, flip and Fierz identities", (
        "gamma identities: App. B contraction block through γ^5γ^c=(i/6)ε^{abcd}γ_{abc}",
        "t-table: App. B, t_0=1, t_1=-1, t_2=-1, t_3=1",
        "flip-0..3: App. B, flip:N",
        "Fierz completeness, Fierz:1, Fierz:2, Lemma Fierz, action of omega: App. B",
        "Majorana structure: §2.1 footnote",
    )),
    SuiteEntry("diagrams", "W_1 property diagrams on random frames", (
        'bulk-W1-(i,j): diagram "prop e bulk"',
        'boundary-W1-(i,j): diagram "prop e bdry"',
        'boundary-kerW1-(1,2)-dim6: §3.2 remark, "another 6 local components"',
        "W_k normalization 1/k!: §2.1",
        "boundary volume: App. B remark",
        "presymplectic kernel: §3.2",
    )),
    SuiteEntry("decompositions", "Unique splits and isomorphism certificates", (
        "split_22, split_cdag, split_13, structural_fix, spinor_split_31/21: App. B lemmas",
        "check_21, check_12: App. B, Lemmas splitting (2,1) and (1,2)",
        "split_22 covariance: App. B, Lemma splitting (2,2)",
        "certify_isos: App. B, spinor lemmas and Lemma useful isos",
    )),
    SuiteEntry("bracket-table", "Boundary constraint algebra modulo d", (
        "row-*: App. C, Poisson brackets of L, P, M, H",
        "control-perturbed-L: sign-flipped L_c must fail",
        "vf-*: §3.2, Hamiltonian vector fields",
        "lc-rewriting: §3.2 footnote",
    )),
    SuiteEntry("kdag-equivalence", "The reduced k‡ constraint", (
        "kdag-divisible, kdag-tau, kdag-membership, kdag-structural: Prop k‡",
    )),
    SuiteEntry("phi1-symplectic", "The φ1 antifield shift", (
        "phi1-types, phi1-gravitino, phi1-zero, phi1-fixed, phi1-hedgehog: Lemma φ1",
        "phi1-pc-shift, phi1-target: Lemma φ1, closed-form shift of ϖ^r_PC",
    )),
    SuiteEntry("aksz-symplectic", "Φ_r and the AKSZ ledger", (
        "item-k*, item-l*, item-h*: App. D items",
        "bullet-*: App. D bullet pairings",
        "coverage-targets, coverage-items: App. D",
        "gravitino-pullback: App. D, products of Φ_r^* of the gravitino part",
        "phi_r-types, phi_r-constraint, transgression-toy: Thm AKSZ",
    )),
    SuiteEntry("pc-pullback", "The ṽ-quadratic PC term", (
        "quadratic-degree, quadratic-in-v, quadratic-from-split: Thm PC pullback",
        "quadratic-phi1-fixed, quadratic-nondegenerate: Thm PC pullback",
    )),
    SuiteEntry("cme-pc", "Master equation of the bulk PC BV action", (
        "cme-pc: §4, BV PC action",
        "cme-control-no-ghost-terms: negative control",
    )),
)}


class VerificationService(BaseService):
    """
    Suite registry and runner

    Provides:
    - Lookup of registered suites
    - run_suite: configuration in, report out
    """

    def __init__(self):
        super().__init__()
        self._runners: Dict[str, Callable[[SuiteConfig], VerificationReport]] = {
            "appendixB": self._run_appendix_b,
            "diagrams": self._run_diagrams,
            "decompositions": self._run_decompositions,
            "bracket-table": self._run_bracket_table,
            "kdag-equivalence": self._run_kdag,
            "phi1-symplectic": self._run_phi1,
            "aksz-symplectic": self._run_aksz,
            "pc-pullback": self._run_pc_pullback,
            "cme-pc": self._run_cme,
        }
        self._outcomes: Counter = Counter()

    def suites(self) -> List[SuiteEntry]:
        return [SUITES[name] for name in self._runners]

    def lookup(self, name: str) -> SuiteEntry:
        """
        Raises:
            UnknownSuiteError: if no suite is registered under name
        """
        if name not in self._runners:
            raise UnknownSuiteError(f"unknown suite '{name}' (known: {', '.join(self._runners)})")
        return SUITES[name]

    def config_from_mapping(self, data: Mapping[str, Any]) -> SuiteConfig:
        """
        SuiteConfig from loose options; None values keep the defaults.

        Raises:
            ValidationError: if no suite is named or an option is unknown
        """
        options = {key: value for key, value in data.items() if value is not None}
        self._validate_required(options, ['suite'])
        unknown = sorted(set(options) - {f.name for f in fields(SuiteConfig)})
        if unknown:
            raise ValidationError(f"unknown options: {', '.join(unknown)}")
        if 'report_format' in options:
            options['report_format'] = ReportFormat(options['report_format'])
        if 'epsilon_sign' in options:
            options['epsilon_sign'] = int(options['epsilon_sign'])
        return SuiteConfig(**options)

    def run_suite(self, cfg: SuiteConfig) -> VerificationReport:
        """
        Run one suite.

        Raises:
            UnknownSuiteError: for an unregistered suite
            ConfigurationError: if the configuration is invalid
            TermCeilingError: if an expression outgrows the ceiling
        """
        entry = self.lookup(cfg.suite)
        cfg.validate()
        self._log_operation("run_suite", suite=entry.name, seed=cfg.seed, trials=cfg.trials)
        started = time.perf_counter()
        try:
            report = self._runners[entry.name](cfg)
        except Exception as e:
            self._handle_error(e, f"suite {entry.name}")
        report.suite = entry.name
        report.metadata.update({
            'seed': cfg.seed,
            'trials': cfg.trials,
            'epsilon_sign': cfg.epsilon_sign,
            'term_ceiling': cfg.term_ceiling,
        })
        report.elapsed_ms = round((time.perf_counter() - started) * 1000, 1)
        self._outcomes['passed' if report.passed else 'failed'] += 1
        for item in report.failures():
            self._log_warning("check failed", suite=entry.name, check=item.check_id, seed=cfg.seed,
                              witness=item.witness)
        return report

    def get_stats(self) -> Dict[str, Any]:
        stats = super().get_stats()
        stats['suites_passed'] = self._outcomes['passed']
        stats['suites_failed'] = self._outcomes['failed']
        return stats

    # ========================================================================
    # SUITES
    # ========================================================================

    def _run_appendix_b(self, cfg: SuiteConfig) -> VerificationReport:
        clifford = CliffordService(cfg.epsilon_sign, cfg.num_generators)
        rng = random.Random(cfg.seed)
        report = VerificationReport(suite=cfg.suite)
        report.extend(clifford.verify_all_gamma_identities())
        report.extend(clifford.verify_t_table())
        report.extend(clifford.verify_flips_random(rng, cfg.trials))
        for kind in FIERZ_KINDS:
            report.extend(clifford.verify_fierz(kind, rng, cfg.trials))
        report.extend(clifford.verify_majorana_structure(rng, cfg.trials))
        return report

    def _run_diagrams(self, cfg: SuiteConfig) -> VerificationReport:
        fibers = FiberService(CliffordService(cfg.epsilon_sign).basis)
        report = VerificationReport(suite=cfg.suite)
        report.extend(fibers.check_diagram("bulk", cfg.trials, cfg.seed))
        report.extend(fibers.check_diagram("boundary", cfg.trials, cfg.seed))
        rng = random.Random(cfg.seed)
        report.extend(fibers.check_factorial_normalization(random_frame(rng, 4)))
        boundary = random_frame(rng, 3)
        report.extend(fibers.check_boundary_volume(boundary))
        report.extend(fibers.check_presymplectic_kernel(boundary))
        return report

    def _run_decompositions(self, cfg: SuiteConfig) -> VerificationReport:
        decompositions = DecompositionService(CliffordService(cfg.epsilon_sign).basis)
        report = decompositions.verify_decompositions(cfg.trials, cfg.seed)
        rng = random.Random(cfg.seed)
        report.extend(decompositions.certify_isos(random_frame(rng, 3)))
        report.extend(decompositions.certify_isos(random_frame(rng, 4)))
        return report

    def _symbolic(self, cfg: SuiteConfig) -> SymbolicService:
        return SymbolicService(cfg.term_ceiling, CliffordService(cfg.epsilon_sign).basis)

    def _run_bracket_table(self, cfg: SuiteConfig) -> VerificationReport:
        symbolic = self._symbolic(cfg)
        points = min(cfg.trials, MAX_JET_POINTS)
        report = symbolic.verify_bracket_table(points, cfg.seed)
        report.extend(symbolic.verify_vector_fields(points, cfg.seed))
        report.extend(symbolic.verify_lc_rewriting(points, cfg.seed))
        report.metadata['jet_points'] = points
        return report

    def _run_cme(self, cfg: SuiteConfig) -> VerificationReport:
        points = min(cfg.trials, MAX_JET_POINTS)
        report = self._symbolic(cfg).verify_cme(points, cfg.seed)
        report.metadata['jet_points'] = points
        return report

    def _run_kdag(self, cfg: SuiteConfig) -> VerificationReport:
        return CylinderService(cfg.term_ceiling).check_kdag_equivalence(cfg.trials, cfg.seed)

    def _run_phi1(self, cfg: SuiteConfig) -> VerificationReport:
        return CylinderService(cfg.term_ceiling).verify_phi1_symplectic()

    def _run_aksz(self, cfg: SuiteConfig) -> VerificationReport:
        return CylinderService(cfg.term_ceiling).verify_aksz_symplectic()

    def _run_pc_pullback(self, cfg: SuiteConfig) -> VerificationReport:
        return CylinderService(cfg.term_ceiling).pc_action_pullback_check(cfg.trials, cfg.seed)
