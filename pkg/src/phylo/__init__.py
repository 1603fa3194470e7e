"""Rooted triple formulas: tame-clause solver, classification and hardness tools."""

__version__ = "0.1.0"
