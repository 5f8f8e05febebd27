"""Exact homology and cohomology of finite groups over Z and Z[1/l]."""

from .complexes import (
    ChainComplex,
    ChainMap,
    HomologySummary,
    bar_complex,
    bar_homology_type,
    cobar_complex,
    homology,
    periodic_complex,
    product_complex,
)
from .gmodules import (
    GModule,
    GModuleMap,
    alpha,
    coinvariants,
    invariants,
    negation_gmodule,
    norm,
    random_gmodule,
    trivial_gmodule,
)
from .group_homology import (
    CheckReport,
    PreconditionFailure,
    comparison_with_abelianization,
    conjugation_pair_action,
    h,
    hc,
    induced,
    lhs_e2,
    uct_check,
    verify_theorem_ab,
    verify_vanishing,
)
from .groups import GroupHom, GroupTable, Subgroup, abelian_group, cyclic, dihedral, symmetric_group
from .linalg import BudgetExceeded, Lattice, snf
from .modules import ModuleMap, PresentedModule, Subquotient, is_isomorphism
from .ring import ZZ, RingSpec, parse_ring

__all__ = [name for name in dir() if not name.startswith("_")]
