"""
Field Registry

Every symbol an expression may mention: degrees, ghost number, parity
and the role it plays in the canonical ordering of factors.
"""

from dataclasses import dataclass
from typing import Dict, Iterable, List, Optional, Tuple

from src.services.base_service import InputError, ValidationError
from src.services.models import Parity

BUNDLES = ("scalar", "lambda", "spinor", "vector-field", "covector-density", "marker")
ROLES = ("dynamical", "parameter", "antifield", "auxiliary", "variation")

# ordering classes; spinor-bar factors sort between connection and spinor
ORDER = {
    "parameter": 0,
    "frame": 1,
    "connection": 2,
    "spinor-bar": 3,
    "spinor": 4,
    "ghost": 5,
    "antifield": 6,
    "auxiliary": 7,
    "variation": 8,
    "marker": 9,
}


@dataclass(frozen=True)
class FieldRegistryEntry:
    """
    One registered symbol.

    parity is the parity of the coefficient functions (ghost number plus
    intrinsic spinor parity plus δ-degree), not the total parity of the
    form.
    """
    name: str
    form_degree: int
    v_degree: int
    ghost: int
    parity: Parity
    bundle: str = "lambda"
    role: str = "dynamical"
    category: str = "frame"
    curvature_of: Optional[str] = None
    description: str = ""
    # contraction along it carries dx^n and acts as an even derivation
    transversal: bool = False

    def __post_init__(self):
        if self.bundle not in BUNDLES:
            raise ValidationError(f"unknown bundle '{self.bundle}' for {self.name}")
        if self.role not in ROLES:
            raise ValidationError(f"unknown role '{self.role}' for {self.name}")
        if self.category not in ORDER:
            raise ValidationError(f"unknown ordering class '{self.category}' for {self.name}")
        if self.parity is Parity.MIXED:
            raise ValidationError(f"{self.name} must have a definite parity")

    @property
    def is_spinor(self) -> bool:
        return self.bundle == "spinor"

    @property
    def is_vector(self) -> bool:
        return self.bundle == "vector-field"

    @property
    def is_odd(self) -> bool:
        return self.parity is Parity.ODD

    def rank(self, bar: bool = False) -> int:
        if self.is_spinor and self.category == "spinor":
            return ORDER["spinor-bar"] if bar else ORDER["spinor"]
        return ORDER[self.category]

    def to_dict(self) -> dict:
        return {
            'name': self.name,
            'form_degree': self.form_degree,
            'v_degree': self.v_degree,
            'ghost': self.ghost,
            'parity': self.parity.value,
            'bundle': self.bundle,
            'role': self.role,
        }


class FieldRegistry:
    """Symbols of one domain, each registered exactly once"""

    def __init__(self, domain: str, base_dim: int, entries: Iterable[FieldRegistryEntry] = ()):
        if base_dim not in (3, 4):
            raise ValidationError("registries live over a 3- or 4-dimensional base")
        self.domain = domain
        self.base_dim = base_dim
        self._entries: Dict[str, FieldRegistryEntry] = {}
        for entry in entries:
            self.register(entry)

    def register(self, entry: FieldRegistryEntry) -> None:
        if entry.name in self._entries:
            raise ValidationError(f"symbol '{entry.name}' registered twice in {self.domain}")
        self._entries[entry.name] = entry

    def lookup(self, name: str) -> FieldRegistryEntry:
        """
        Raises:
            InputError: for an unregistered symbol
        """
        try:
            return self._entries[name]
        except KeyError:
            raise InputError(f"symbol '{name}' is not registered in the {self.domain} registry") from None

    def __contains__(self, name: str) -> bool:
        return name in self._entries

    def names(self) -> List[str]:
        return list(self._entries)

    def entries(self) -> List[FieldRegistryEntry]:
        return list(self._entries.values())

    def with_role(self, role: str) -> List[FieldRegistryEntry]:
        return [entry for entry in self._entries.values() if entry.role == role]

    def extended(self, entries: Iterable[FieldRegistryEntry], domain: Optional[str] = None) -> "FieldRegistry":
        """Copy with extra symbols"""
        copy = FieldRegistry(domain or self.domain, self.base_dim, self._entries.values())
        for entry in entries:
            copy.register(entry)
        return copy


def _entry(name: str, k: int, l: int, ghost: int, odd: bool, **kwargs) -> FieldRegistryEntry:
    return FieldRegistryEntry(name, k, l, ghost, Parity.ODD if odd else Parity.EVEN, **kwargs)


def _curvatures(*connections: str) -> List[FieldRegistryEntry]:
    return [
        _entry(f"F[{name}]", 2, 2, 0, False, role="auxiliary", category="connection",
               curvature_of=name, description=f"curvature of {name}")
        for name in connections
    ]


# ============================================================================
# BOUNDARY (Σ, three-dimensional)
# ============================================================================

def boundary_registry() -> FieldRegistry:
    """Fields, ghosts, antifields and auxiliary symbols of the boundary BFV theory"""
    entries = [
        # fields
        _entry("e", 1, 1, 0, False, category="frame", description="coframe"),
        _entry("w", 1, 2, 0, False, category="connection", description="spin connection"),
        _entry("psi", 1, 0, 0, True, bundle="spinor", category="spinor", description="gravitino"),
        # fixed data
        _entry("w0", 1, 2, 0, False, role="parameter", category="parameter", description="reference connection"),
        _entry("eps", 0, 1, 0, False, role="parameter", category="parameter", description="ε_n"),
        # ghosts
        _entry("c", 0, 2, 1, True, category="ghost", description="Lorentz ghost"),
        _entry("xi", 0, 0, 1, True, bundle="vector-field", category="ghost", description="diffeomorphism ghost"),
        _entry("lam", 0, 0, 1, True, bundle="scalar", category="ghost", description="normal ghost λ"),
        _entry("chi", 0, 0, 1, False, bundle="spinor", category="ghost", description="supersymmetry ghost"),
        _entry("mu", 0, 1, 1, True, category="ghost", description="μ = λε_n + ι_ξ e"),
        # ghost momenta
        _entry("kd", 3, 2, -1, True, role="antifield", category="antifield", description="k‡"),
        _entry("zd", 3, 4, -1, True, bundle="covector-density", role="antifield", category="antifield",
               description="ζ‡"),
        _entry("lamd", 3, 4, -1, True, bundle="scalar", role="antifield", category="antifield", description="λ‡"),
        _entry("thd", 3, 4, -1, False, bundle="spinor", role="antifield", category="antifield",
               description="θ‡, conjugate to χ"),
        # auxiliary
        _entry("sigma", 1, 1, 0, False, role="auxiliary", category="auxiliary",
               description="structural-constraint multiplier σ"),
        _entry("phi", 0, 0, 2, False, bundle="vector-field", role="auxiliary", category="auxiliary",
               description="φ = e^i_a χ̄γ^aχ ∂_i"),
        _entry("phi_n", 0, 0, 2, False, bundle="scalar", role="auxiliary", category="auxiliary",
               description="normal component of χ̄γχ"),
        _entry("zeta", 0, 0, 2, False, bundle="vector-field", role="auxiliary", category="auxiliary",
               description="tangential part of [c, λε_n]"),
        _entry("zeta_n", 0, 0, 2, False, bundle="scalar", role="auxiliary", category="auxiliary",
               description="normal part of [c, λε_n]"),
        _entry("theta", 0, 0, 2, False, bundle="vector-field", role="auxiliary", category="auxiliary",
               description="tangential part of L_ξ(λε_n)"),
        _entry("theta_n", 0, 0, 2, False, bundle="scalar", role="auxiliary", category="auxiliary",
               description="normal part of L_ξ(λε_n)"),
        # Hamiltonian vector field components and variations
        _entry("X_e", 1, 1, 1, True, role="auxiliary", category="auxiliary"),
        _entry("X_w", 1, 2, 1, True, role="auxiliary", category="auxiliary"),
        _entry("X_psi", 1, 0, 1, False, bundle="spinor", role="auxiliary", category="auxiliary"),
        _entry("u_e", 1, 1, 0, True, role="variation", category="variation", description="δe"),
        _entry("u_w", 1, 2, 0, True, role="variation", category="variation", description="δω"),
        _entry("u_psi", 1, 0, 0, False, bundle="spinor", role="variation", category="variation",
               description="δψ"),
    ]
    return FieldRegistry("boundary", 3, entries + _curvatures("w", "w0"))


# ============================================================================
# BULK (M, four-dimensional)
# ============================================================================

def bulk_registry() -> FieldRegistry:
    """Palatini–Cartan BV fields and antifields"""
    entries = [
        _entry("e", 1, 1, 0, False, category="frame"),
        _entry("w", 1, 2, 0, False, category="connection"),
        _entry("psi", 1, 0, 0, True, bundle="spinor", category="spinor"),
        _entry("c", 0, 2, 1, True, category="ghost"),
        _entry("xi", 0, 0, 1, True, bundle="vector-field", category="ghost"),
        _entry("chi", 0, 0, 1, False, bundle="spinor", category="ghost"),
        _entry("e_dag", 3, 3, -1, True, role="antifield", category="antifield"),
        _entry("w_dag", 3, 2, -1, True, role="antifield", category="antifield"),
        _entry("c_dag", 4, 2, -2, False, role="antifield", category="antifield"),
        _entry("xi_dag", 4, 4, -2, False, bundle="covector-density", role="antifield", category="antifield"),
        _entry("psi_dag", 3, 4, -1, False, bundle="spinor", role="antifield", category="antifield"),
        _entry("chi_dag", 4, 4, -2, True, bundle="spinor", role="antifield", category="antifield"),
        _entry("u_e", 1, 1, 0, True, role="variation", category="variation"),
        _entry("u_w", 1, 2, 0, True, role="variation", category="variation"),
        _entry("u_c", 0, 2, 1, False, role="variation", category="variation"),
        _entry("u_e_dag", 3, 3, -1, False, role="variation", category="variation"),
        _entry("u_w_dag", 3, 2, -1, False, role="variation", category="variation"),
        _entry("u_c_dag", 4, 2, -2, True, role="variation", category="variation"),
    ]
    return FieldRegistry("bulk", 4, entries + _curvatures("w"))


def registry_for(domain: str) -> FieldRegistry:
    """
    Raises:
        ValidationError: for an unknown domain
    """
    if domain == "boundary":
        return boundary_registry()
    if domain == "bulk":
        return bulk_registry()
    raise ValidationError(f"unknown domain '{domain}'")


def degree_signature(entry: FieldRegistryEntry) -> Tuple[int, int, int, int]:
    """(form degree, V-degree, ghost number, parity bit)"""
    return entry.form_degree, entry.v_degree, entry.ghost, entry.parity.bit
