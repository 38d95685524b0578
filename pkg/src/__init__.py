"""
NUCA Toolkit

Exact finite-window analysis of non-uniform cellular automata over Z and Z^2:
images and pre-injectivity witnesses, densities of lattice sets, entropy and
mean-dimension sequences, linear NUCA, subshifts of finite type and
quasi-tilings.
"""

__version__ = "0.1.0"
