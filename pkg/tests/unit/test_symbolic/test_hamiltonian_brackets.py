"""
Unit Tests for Hamiltonian Vector Fields, Brackets and the Master Equation

Derived vector fields are compared against the printed components, and
the bracket table and the PC master equation are run at one jet point.
"""

import random

import pytest

from src.services import UnmatchedVariationError, ValidationError
from src.services.symbolic.brackets import BRACKET_TABLE, control_residual, verify_rows
from src.services.symbolic.cme import cme_residual, pc_bv_action, truncated_pc_action
from src.services.symbolic.compiler import compile_expression, sample_environment
from src.services.symbolic.components import wedge
from src.services.symbolic.constraints import build_constraints, sample_boundary_point
from src.services.symbolic.functional import local_functional
from src.services.symbolic.hamiltonian import hamiltonian_vf, round_trip_residual
from src.services.symbolic.parser import parse
from src.services.symbolic.registry import boundary_registry
from src.services.symbolic.service import SymbolicService

pytestmark = pytest.mark.symbolic

# printed components: field -> (text, dressed). Dressed ω entries give
# e·X_ω, dressed ψ entries give e γ³ X_ψ.
PRINTED_FIELDS = {
    "L": {
        "e": ("br(c,e)", False),
        "w": ("d[w](c)", False),
        "psi": ("br(c,psi)", False),
    },
    "P": {
        "e": ("-L[xi,w0](e)", False),
        "w": ("-i[xi](F[w0]) - L[xi,w0](w - w0)", False),
        "psi": ("-L[xi,w0](psi)", False),
    },
    "H": {
        "e": ("d[w](lam^eps) + lam^sigma", False),
        "w": ("lam^eps^F[w] - 1/6*bar(X_psi)^G3^psi", True),
        "psi": ("lam^eps^G3^d[w](psi) + 1/2*lam^sigma^G3^psi", True),
    },
    "M": {
        "e": ("-bar(chi)^G1^psi", False),
        "w": ("1/6*bar(d[w](chi))^G3^psi + 1/6*bar(chi)^G3^d[w](psi) - 1/6*bar(psi)^G3^X_psi", True),
        "psi": ("e^G3^d[w](chi) - 1/2*d[w](e)^G3^chi", True),
    },
}


def compile_text(text, env):
    return compile_expression(parse(text, env.registry, raw=True), env)


def origin_entries(form):
    return {key: value.at_origin().terms for key, value in form.entries.items() if not value.at_origin().is_zero()}


@pytest.fixture(scope="module")
def point():
    return sample_boundary_point(random.Random(1), 4)


@pytest.fixture(scope="module")
def constraints():
    return build_constraints()


class TestHamiltonianVectorFields:
    """Test X_F derived from ι_X ϖ = δF"""

    def test_requires_ghost_one_functional(self):
        """Test that a ghost-zero top form has no Hamiltonian vector field here"""
        registry = boundary_registry()
        volume = local_functional("V", "e^e^e^eps", registry)
        env = sample_environment(registry, random.Random(1), 1, names=("e",))
        with pytest.raises(ValidationError, match="ghost-one boundary functional"):
            hamiltonian_vf(volume, env)

    def test_unknown_constraint(self):
        """Test that only boundary constraints are looked up by name"""
        with pytest.raises(UnmatchedVariationError, match="is not a boundary constraint") as excinfo:
            SymbolicService().hamiltonian_vf("Q")
        assert excinfo.value.field_name == "Q"

    @pytest.mark.slow
    @pytest.mark.parametrize("name", ["L", "P", "M", "H"])
    def test_derived_field_matches_printed_components(self, name, point, constraints):
        """Test X_e, e·X_ω and X_ψ (or e γ³ X_ψ) against the printed rows"""
        assignment = hamiltonian_vf(constraints[name], point)
        printed = PRINTED_FIELDS[name]
        env = point.with_bindings({"X_psi": assignment.components["psi"]})

        assert origin_entries(assignment.components["e"]) == origin_entries(compile_text(printed["e"][0], env))

        text, dressed = printed["w"]
        expected_w = compile_text(text, env) if dressed else wedge(point.form("e"), compile_text(text, env))
        assert origin_entries(assignment.dressed["w"]) == origin_entries(expected_w)

        text, dressed = printed["psi"]
        derived_psi = assignment.dressed["psi"] if dressed else assignment.components["psi"]
        assert origin_entries(derived_psi) == origin_entries(compile_text(text, env))

    @pytest.mark.slow
    @pytest.mark.parametrize("name", ["L", "M"])
    def test_round_trip(self, name, point, constraints):
        """Test that ι_X ϖ − δF vanishes modulo d"""
        functional = constraints[name]
        residual = round_trip_residual(functional, hamiltonian_vf(functional, point).components, point)
        assert residual.is_zero, residual.witness()

    @pytest.mark.slow
    def test_assignment_serializes(self):
        """Test the shape summary of a derived field"""
        assignment = SymbolicService(order=2).hamiltonian_vf("L")
        data = assignment.to_dict()
        assert data['functional'] == "L"
        assert data['components']['w']['shape'] == [1, 2]


@pytest.mark.slow
class TestBracketTable:
    """Test the constraint bracket table at one jet point"""

    def test_every_row_closes(self):
        """Test that each row holds modulo d"""
        residuals = verify_rows(BRACKET_TABLE, 1, 1, 4)
        failing = {row_id: r.witness() for row_id, r in residuals.items() if not r.is_zero}
        assert not failing

    def test_sign_flipped_l_does_not_close(self, point, constraints):
        """Test that the perturbed L_c breaks its own row"""
        assert not control_residual(point, constraints).is_zero

    def test_bracket_suite_passes(self):
        """Test the bracket-table report including the control row"""
        report = SymbolicService().verify_bracket_table(1, 1)
        assert report.passed, [item.witness for item in report.failures()]


@pytest.mark.slow
class TestMasterEquation:
    """Test (S, S) = 0 for the PC BV action"""

    def test_pc_action_satisfies_master_equation(self):
        """Test that the PC BV action has zero residual"""
        residual = cme_residual(pc_bv_action(), 1, 1)
        assert residual.is_zero, residual.witness()

    def test_truncated_action_fails(self):
        """Test that dropping the ghost terms leaves a residual"""
        assert not cme_residual(truncated_pc_action(), 1, 1).is_zero

    def test_cme_suite_passes(self):
        """Test the cme-pc report with its control"""
        report = SymbolicService().verify_cme(1, 1)
        assert report.passed, [item.witness for item in report.failures()]
