"""Exact toolkit for 2-dimensional rigid, conservative and terminal algebras.

Everything here runs over exact rational arithmetic: structure constants,
identity deciders with witness solvers, a small Buchberger engine for
orbit-emptiness certificates, and degeneration/orbit-closure verification
for the bundled classification tables.
"""

__version__ = "0.1.0"
