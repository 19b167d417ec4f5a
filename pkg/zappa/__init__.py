"""Zappa-Szép products of cyclic groups and their automorphism groups."""

__version__ = "0.1.0"
