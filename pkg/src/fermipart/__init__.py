"""Partitions of integers into distinct parts, read as an ideal Fermi gas in a harmonic trap.

Exact counts and distributions live in :mod:`fermipart.partitions` and
:mod:`fermipart.distribution`; canonical cumulants and their residue series
in :mod:`fermipart.canonical`; the saddle-point treatment of the
microcanonical distribution in :mod:`fermipart.saddle`.
"""
from ._precision import DEFAULT_DPS, precision
from .canonical import (
    asymptotic_canonical_cumulant,
    bosonic_cumulant,
    canonical_cumulant,
    canonical_cumulant_b_derivative,
    check_fermion_boson_identity,
    log_xi_ex,
)
from .distribution import (
    CumulantSet,
    MicroDistribution,
    canonical_probability,
    exact_cumulants,
    micro_distribution,
)
from .partitions import PartitionTable, build_table, enumerate_distinct, m_max, omega_distinct, phi_distinct
from .saddle import (
    gamma_asymptotic,
    log_upsilon_gaussian,
    mc_cumulant_asymptotic,
    mc_cumulant_saddle,
    solve_saddle,
)
from .special import bernoulli, eta, fermi_fn, zeta

__version__ = "0.1.0"
