"""Independent finite-difference eigenvalue oracles."""

from ._backend import BACKEND
from .solvers import OracleResult, default_box, fd_system, kleingordon_fd, schrodinger_fd
from .tridiagonal import TridiagonalSystem, count_below, eigen_smallest

__all__ = [
    "BACKEND",
    "OracleResult",
    "TridiagonalSystem",
    "count_below",
    "default_box",
    "eigen_smallest",
    "fd_system",
    "kleingordon_fd",
    "schrodinger_fd",
]
