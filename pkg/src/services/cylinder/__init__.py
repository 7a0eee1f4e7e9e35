"""
Cylinder BV data: collar splitting, substitution maps, transgression and
the symplectic ledgers relating the reduced and AKSZ theories.
"""

from src.services.cylinder.service import CylinderService
from src.services.cylinder.substitutions import SubstitutionMap, apply_substitution

__all__ = ['CylinderService', 'SubstitutionMap', 'apply_substitution']
