"""Entanglement dynamics in quantum-chaotic systems.

Two model systems share one analysis pipeline: a spin-4 atom moving in a
1-D magneto-optical lattice (spin x motion entanglement) and the quantum
kicked top realized as N = 2j symmetric qubits (pair vs rest entanglement).
Dynamics are propagated through the spectral decomposition of either the
Hamiltonian or the one-kick Floquet operator, and chaos signatures are read
off the linear-entropy time series: eigenstate support, power spectra and
the initial rise law.
"""

__version__ = "0.1.0"
