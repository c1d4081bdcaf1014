"""Fourier-space toolkit for the strongly damped wave equation ``u_tt - Δu - Δu_t = 0``."""

from ._backend import name as backend

__version__ = "0.1.0"

__all__ = ["backend", "__version__"]
