"""Exact verification of local Iwahori-level zeta integral computations on GSp(4)."""

__version__ = "0.1.0"
