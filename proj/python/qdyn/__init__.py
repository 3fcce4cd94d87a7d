"""Exact Euclidean minima, Markov partitions and dimension bounds for real quadratic fields."""

from ._qdyn import (
    ConfigError,
    Field,
    InvariantError,
    IoError,
    Partition,
    __version__,
    certify,
    code_qpoint,
    davenport_minima,
    dim_curve,
    entropy,
    euclidean_min,
    lattice_set,
    make_field,
    partition,
    t_infinity,
)

__all__ = [
    "ConfigError",
    "Field",
    "InvariantError",
    "IoError",
    "Partition",
    "__version__",
    "certify",
    "code_qpoint",
    "davenport_minima",
    "dim_curve",
    "entropy",
    "euclidean_min",
    "lattice_set",
    "make_field",
    "partition",
    "t_infinity",
]
