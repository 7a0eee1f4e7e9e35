"""
Rule tables of the cylinder maps: the shift φ1 of the reduced
Palatini–Cartan antifields, the map Φ_r from reduced fields to AKSZ
superfield components, and the dt-extension used by transgression.
"""

from functools import lru_cache
from typing import Dict

from src.services.cylinder.split import aksz_registry, reduced_registry
from src.services.cylinder.substitutions import SubstitutionMap
from src.services.symbolic.registry import _entry, boundary_registry

# ============================================================================
# φ1: reduced -> reduced
# ============================================================================

PHI1_RULES: Dict[str, str] = {
    "e_dag": "e_dag + v^kc",
    "e_dag_n": "e_dag_n - v^kc_n - i[z](v)^kc",
    "c": "c - i[xi](v) + i[z](v)^xin",
    "xi_dag": "xi_dag - v^c_dag_n",
    "xi_dag_n": "xi_dag_n + i[z](v)^c_dag_n",
    "w_n": "w_n + i[z](v)",
}


@lru_cache(maxsize=None)
def phi1_map() -> SubstitutionMap:
    registry = reduced_registry()
    fixed = [name for name in registry.names() if name not in PHI1_RULES]
    return SubstitutionMap.from_text("phi1", registry, registry, PHI1_RULES, fixed)


# ============================================================================
# Φ_r: reduced -> AKSZ
# ============================================================================

# Transversal coefficients map to dt-components; their dn is implicit.
PHI_R_RULES: Dict[str, str] = {
    "e": "e + lm^f_dag",
    "e_n": "mu^eps + i[z](e) + lam^i[epsv](f_dag)",
    "w": "w - lm^u_dag",
    "w_n": "cw - i[xi](u_dag) - lam^i[epsv](u_dag)",
    "psi": "psi + lm^sig_dag",
    "psi_n": "epsi - i[xi](sig_dag) + lm^i[z](sig_dag)",
    "psi_dag": "theta_dag",
    "psi_dag_n": (
        "i[z](theta_dag) + i[xi](chi_dag) - 1/3*e^G3^sig_dag - 1/3*f_dag^G3^psi"
        " + 1/3*lm^f_dag^G3^sig_dag"
    ),
    "chi": "chi + lm^i[xi](sig_dag)",
    "chi_dag_n": "chi_dag",
    "c": "c - lm^i[xi](u_dag)",
    "c_dag_n": "c_dag",
    "w_dag": "k_dag",
    "w_dag_n": "e^f_dag + i[z](k_dag) + i[xi](c_dag)",
    "xi": "xi - lm^z",
    "xi_dag": (
        "e^y_dag + f_dag^e_dag - u_dag^k_dag + c_dag^lm^u_dag + 1i*bar(sig_dag)^theta_dag"
        " - 1i*lm^bar(sig_dag)^chi_dag"
    ),
    "e_dag": "e_dag - lm^y_dag",
    "xin": "lm",
    "e_dag_n": (
        "e^u_dag + i[z](e_dag) - lam^i[epsv](y_dag) + lm^f_dag^u_dag"
        " - 1/6*bar(sig_dag)^G3^psi - 1/6*lm^bar(sig_dag)^G3^sig_dag"
    ),
    "xi_dag_n": (
        "mu^eps^y_dag + i[z](e)^y_dag + e^f_dag^u_dag + f_dag^i[z](e_dag) + u_dag^i[z](k_dag)"
        " + c_dag^lam^i[epsv](u_dag) - 1/6*f_dag^bar(psi)^G3^sig_dag - 1/6*e^bar(sig_dag)^G3^sig_dag"
        " + 1i*i[z](bar(sig_dag))^theta_dag - 1i*lm^i[z](bar(sig_dag))^chi_dag"
    ),
}

PHI_R_FIXED = ("eps", "epsv", "z", "mu", "dn", "dxi", "dz")


@lru_cache(maxsize=None)
def phi_r_map() -> SubstitutionMap:
    return SubstitutionMap.from_text("phi_r", reduced_registry(), aksz_registry(), PHI_R_RULES, PHI_R_FIXED)


# ============================================================================
# TRANSGRESSION: boundary -> AKSZ superfields
# ============================================================================

SUPERFIELD_RULES: Dict[str, str] = {
    "e": "e + f_dag^dn",
    "w": "w + u_dag^dn",
    "psi": "psi + sig_dag^dn",
    "chi": "chi + epsi^dn",
    "c": "c + cw^dn",
    "xi": "xi + z^dn",
    "lam": "lam + mu^dn",
    "kd": "k_dag + c_dag^dn",
    "thd": "theta_dag + chi_dag^dn",
    "yd": "e_dag + y_dag^dn",
}

SUPERFIELD_FIXED = ("eps",)


@lru_cache(maxsize=None)
def superfield_map() -> SubstitutionMap:
    """
    Boundary BFV fields (plus y‡, the momentum of e) extended over the
    interval. `xi` only ever appears inside ι, where z̲ carries the dt.
    """
    source = boundary_registry().extended(
        [_entry("yd", 3, 3, -1, True, role="antifield", category="antifield", description="y‡")],
        domain="boundary+",
    )
    return SubstitutionMap.from_text("superfield", source, aksz_registry(), SUPERFIELD_RULES, SUPERFIELD_FIXED)
