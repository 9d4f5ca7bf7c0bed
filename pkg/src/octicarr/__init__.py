"""Exact classification toolkit for arrangements of eight planes in P^3.

The package enumerates candidate incidence tables, decides realizability over
the rationals, quadratic fields and small prime fields, computes topological
invariants of the associated double-cover Calabi-Yau threefolds, lifts table
symmetries to projective transformations, and assembles structured fibration
reports.
"""

__version__ = "0.1.0"
