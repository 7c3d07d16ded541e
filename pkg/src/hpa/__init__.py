"""Homotopy path algebra toolkit.

Finite acyclic quivers with cancellative path congruences, their geometric
realizations, cellular bimodule resolutions, discrete Morse minimization,
Tor/Koszul invariants, and toric constructions from integer weight data.
"""

__version__ = "0.1.0"
