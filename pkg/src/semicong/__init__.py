"""Exact workbench for semiring congruences, positive models of real orders and flatness certificates."""

__version__ = "0.1.0"
