"""Klein-Gordon bound states by splitting the wavefunction into a
non-relativistic part chi and a relativistic correction factor phi."""

from . import coulombic, hulthen, perturb
from .errors import KGError
from .grid import RadialGrid, default_grid
from .potentials import HulthenPair, PhysParams, PowerSeriesPair, Sampled, evaluate

__all__ = [
    "coulombic", "hulthen", "perturb", "KGError", "RadialGrid", "default_grid",
    "HulthenPair", "PhysParams", "PowerSeriesPair", "Sampled", "evaluate",
]
__version__ = "0.1.0"
