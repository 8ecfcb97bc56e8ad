"""Boundary behaviour on the infinite torus at finite truncation.

Subpackages: ``bohr`` (multi-index arithmetic and the Dirichlet series
correspondence), ``series`` (sparse Fourier series), ``extension`` (twisted
radial extensions and Poisson kernels), ``radial`` (approach schemes,
step-size sequences, approach paths), ``special`` (explicit functions and a
lacunary product measure), ``verify`` (seeded Monte Carlo experiments), and
``cli`` (the command-line front end).
"""

from . import bohr, cli, extension, radial, series, special, verify
from .errors import ConfigError, DomainError, PolytorusError, ResourceError, SpectrumError

__all__ = [
    "bohr",
    "cli",
    "extension",
    "radial",
    "series",
    "special",
    "verify",
    "ConfigError",
    "DomainError",
    "PolytorusError",
    "ResourceError",
    "SpectrumError",
]

__version__ = "0.1.0"
