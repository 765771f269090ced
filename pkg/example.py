"""Example usage of the eigenvalue counter."""

from maslov_count.core.errors import MaslovCountError
from maslov_count.services.coefficients import Constant, MatrixCoefficient, poschl_teller
from maslov_count.services.counting import count_below, count_interval
from maslov_count.services.oracle import DiscretizationSpec, oracle_count
from maslov_count.services.sturm_liouville import SturmLiouvilleSystem, sl_to_hamiltonian


def main():
    """Example: Count the eigenvalues -9, -4, -1 of -phi'' - 12 sech^2(x) phi."""
    one = MatrixCoefficient.scalar(Constant(value=1.0))
    system = sl_to_hamiltonian(
        SturmLiouvilleSystem(P=one, V=MatrixCoefficient.scalar(poschl_teller(3)), Q=one)
    )

    print("Counting eigenvalues of -phi'' - 12 sech^2(x) phi...")

    try:
        below = count_below(system, -0.5)
        print(f"Below -0.5: {below.N} (truncation c={below.c:.3g})")

        box = count_interval(system, -5.0, -2.0)
        print(f"In [-5, -2): {box.N} (shelves {box.shelf_indices})")

        spec = DiscretizationSpec(L=max(20.0, 2.0 * box.c))
        reference = oracle_count(system, -5.0, -2.0, spec, c=box.c)
        print(f"Finite-difference reference: {reference}")

    except MaslovCountError as e:
        print(f"\n✗ Error [{e.code}]: {e}")
        raise


if __name__ == "__main__":
    main()
