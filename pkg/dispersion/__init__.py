"""
Dispersion Solvers

Obnoxious-facility placement on a segment and on a circle: decision and
optimization solvers, their supporting data structures, brute-force oracles
and a JSON/SVG command-line interface.
"""

__version__ = "1.0.0"
