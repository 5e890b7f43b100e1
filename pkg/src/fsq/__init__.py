"""Guided-wave analogies for photons and massive particles.

Hollow-guide dispersion, per-cell quanta, Gaussian packets as equivalent
guided modes, de Broglie waves as cutoff modes, LP modes of fibers and
dielectric-sphere resonances, with a shared numerical kernel.
"""

__version__ = "0.1.0"
