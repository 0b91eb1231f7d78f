"""Log-fronts of plane curves: exact elimination, lattice predictions, numerics."""

__version__ = "0.1.0"
