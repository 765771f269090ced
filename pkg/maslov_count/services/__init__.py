"""Numerical services for eigenvalue counting.

This module contains:
- Systems: Sturm-Liouville, traveling-wave, fourth-order and differential-algebraic
  families with their Hamiltonian forms
- frame_evolution: QR-stabilized transport of frames along x
- maslov_engine: spectral-flow tracking, Maslov indices and the Maslov box
- counting: count_interval, count_below, kernel sums and target exchanges
- oracle: finite-difference reference counts
- pipeline: configured runs for the command line

All systems implement the protocol in maslov_count.interfaces.
See ARCHITECTURE.md for detailed descriptions.
"""

from maslov_count.services.counting import (
    conjugate_point_totals,
    count_below,
    count_interval,
    hormander_exchange,
    kernel_sum_count,
)
from maslov_count.services.differential_algebraic import DASystem, da_reduce
from maslov_count.services.fourth_order import FourthOrderSystem, fourth_to_hamiltonian
from maslov_count.services.hamiltonian import validate_system
from maslov_count.services.maslov_engine import maslov_box, maslov_index, track_spectral_flow
from maslov_count.services.oracle import DiscretizationSpec, oracle_count, oracle_eigenvalues
from maslov_count.services.sturm_liouville import SturmLiouvilleSystem, sl_to_hamiltonian
from maslov_count.services.traveling_wave import TravelingWaveSystem, traveling_to_hamiltonian

__all__ = [
    "DASystem",
    "DiscretizationSpec",
    "FourthOrderSystem",
    "SturmLiouvilleSystem",
    "TravelingWaveSystem",
    "conjugate_point_totals",
    "count_below",
    "count_interval",
    "da_reduce",
    "fourth_to_hamiltonian",
    "hormander_exchange",
    "kernel_sum_count",
    "maslov_box",
    "maslov_index",
    "oracle_count",
    "oracle_eigenvalues",
    "sl_to_hamiltonian",
    "track_spectral_flow",
    "traveling_to_hamiltonian",
    "validate_system",
]
