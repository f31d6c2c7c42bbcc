"""经典性判据"""

from mtc.checks.analyzer import analyze
from mtc.checks.commutativity import (
    check_absolute_commutativity,
    check_commutators,
    check_fixed_points,
    check_lueders_fixed_point,
    check_weak_commutativity,
)
from mtc.checks.consistency import check_kolmogorov, check_kolmogorov_operational
from mtc.checks.ncgd import check_ncgd, dephasing_instrument, ncgd_terms
from mtc.checks.subspaces import check_inclusion, compute_F, compute_H

__all__ = [
    "analyze",
    "check_absolute_commutativity",
    "check_commutators",
    "check_fixed_points",
    "check_inclusion",
    "check_kolmogorov",
    "check_kolmogorov_operational",
    "check_lueders_fixed_point",
    "check_ncgd",
    "check_weak_commutativity",
    "compute_F",
    "compute_H",
    "dephasing_instrument",
    "ncgd_terms",
]
