"""Exact and numeric verification of theta-function, Macdonald-polynomial and elliptic hypergeometric identities."""

__version__ = "0.1.0"
