"""Entanglement phenomenology of non-Hermitian two-band chains.

Biorthogonal ground states, complex entanglement spectra, central-charge
fits, and spin-chain analogues, built on a self-contained dense complex
eigensolver (compiled kernel with pure NumPy fallback).
"""

__version__ = "0.1.0"

from . import band, entanglement, errors, numerics, scaling, spins, states  # noqa: F401
from .numerics import BACKEND  # noqa: F401
