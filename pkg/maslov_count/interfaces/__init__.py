"""Abstract interfaces for the counting engine.

Protocol-based interfaces using Python's typing.Protocol:
- HamiltonianSystem: B(x; lambda), its lambda-derivative, limits, asymptotic frames,
  essential-spectrum data, monotone target and left-shelf floor
- Coefficient: matrix-valued coefficient function with endstates and decay data

Concrete system classes live in maslov_count.services; new system classes only
need to satisfy HamiltonianSystem to run through every counting pipeline.
"""

from maslov_count.interfaces.coefficient import Coefficient
from maslov_count.interfaces.hamiltonian_system import HamiltonianSystem

__all__ = ["Coefficient", "HamiltonianSystem"]
