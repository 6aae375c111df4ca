"""Numerical laboratory for compressible two-phase porous-media flow.

Equilibria, thermodynamic and spectral stability, boundary-symbol
parabolicity checks, and a radially symmetric nonlinear moving-interface
simulator for Darcy/Forchheimer flow with surface tension, with and
without interfacial phase transition.
"""

__version__ = "0.1.0"
