"""Value types for complex symplectic linear algebra."""

from dataclasses import dataclass, field

import numpy as np

from maslov_count.core.errors import ContractViolationError


def standard_symplectic(n: int) -> np.ndarray:
    """Return the 2n x 2n matrix [[0, -I], [I, 0]]."""
    if n < 1:
        raise ContractViolationError(f"symplectic dimension must be positive, got {n}")
    eye = np.eye(n)
    zero = np.zeros((n, n))
    return np.block([[zero, -eye], [eye, zero]])


@dataclass(frozen=True)
class SymplecticForm:
    """The standard symplectic form on C^{2n}."""

    n: int
    matrix: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        object.__setattr__(self, "matrix", standard_symplectic(self.n))

    def pair(self, left: np.ndarray, right: np.ndarray) -> np.ndarray:
        """Return left* J right for stacked 2n x k matrices."""
        return left.conj().T @ self.matrix @ right


@dataclass(frozen=True)
class LagrangianFrame:
    """A 2n x n frame [X; Y] whose columns span a (numerically) Lagrangian plane.

    Frames are stored as given; normalization is an explicit operation
    (see ``maslov_count.services.symplectic.reframe``).
    """

    X: np.ndarray
    Y: np.ndarray

    def __post_init__(self) -> None:
        X = np.asarray(self.X, dtype=complex)
        Y = np.asarray(self.Y, dtype=complex)
        if X.ndim != 2 or X.shape[0] != X.shape[1]:
            raise ContractViolationError(f"upper block must be square, got shape {X.shape}")
        if Y.shape != X.shape:
            raise ContractViolationError(
                f"frame blocks differ in shape: X {X.shape}, Y {Y.shape}"
            )
        object.__setattr__(self, "X", X)
        object.__setattr__(self, "Y", Y)

    @property
    def n(self) -> int:
        return self.X.shape[0]

    @property
    def stacked(self) -> np.ndarray:
        """The 2n x n matrix [X; Y]."""
        return np.vstack([self.X, self.Y])

    @classmethod
    def from_stacked(cls, matrix: np.ndarray) -> "LagrangianFrame":
        matrix = np.asarray(matrix, dtype=complex)
        rows, cols = matrix.shape
        if rows != 2 * cols:
            raise ContractViolationError(f"stacked frame must be 2n x n, got {matrix.shape}")
        return cls(matrix[:cols], matrix[cols:])

    @classmethod
    def dirichlet(cls, n: int) -> "LagrangianFrame":
        """The plane with frame (0; I)."""
        return cls(np.zeros((n, n)), np.eye(n))

    @classmethod
    def neumann(cls, n: int) -> "LagrangianFrame":
        """The plane with frame (I; 0)."""
        return cls(np.eye(n), np.zeros((n, n)))

    def times(self, M: np.ndarray) -> "LagrangianFrame":
        """Right-multiply by an n x n matrix (a change of basis when M is invertible)."""
        return LagrangianFrame(self.X @ M, self.Y @ M)


@dataclass(frozen=True)
class UnitaryMatrix:
    """An n x n matrix that is unitary within tolerance."""

    W: np.ndarray

    def __post_init__(self) -> None:
        W = np.asarray(self.W, dtype=complex)
        if W.ndim != 2 or W.shape[0] != W.shape[1]:
            raise ContractViolationError(f"unitary matrix must be square, got shape {W.shape}")
        object.__setattr__(self, "W", W)

    @property
    def n(self) -> int:
        return self.W.shape[0]

    def unitarity_residual(self) -> float:
        """Return max-abs entry of W*W - I."""
        return float(np.max(np.abs(self.W.conj().T @ self.W - np.eye(self.n))))

    def eigenvalues(self) -> np.ndarray:
        return np.linalg.eigvals(self.W)

    def angles(self) -> np.ndarray:
        """Eigenvalue arguments in (-pi, pi]."""
        return np.angle(self.eigenvalues())
