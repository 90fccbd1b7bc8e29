"""Solvers for the line, circle and min-sum coverage problems."""
