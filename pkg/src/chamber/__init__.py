"""Closed-chamber decay-triggered interferometer simulator.

Evolves the sealed laser / switching-mirror / Geiger-counter system
under both dynamical laws of quantum mechanics — continuous unitary
branching and stochastic state-vector collapse — and computes the
observable that tells them apart: the interference pattern on the
screen.  Also covers the quantitative side results: decay statistics,
branch overlaps, and macroscopic wave-packet spreading.
"""

__version__ = "0.1.0"

from . import branching, constants, decay, density, interferometer, overlap, wavepacket

__all__ = [
    "__version__",
    "branching",
    "constants",
    "decay",
    "density",
    "interferometer",
    "overlap",
    "wavepacket",
]
