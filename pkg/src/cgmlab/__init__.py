"""Simulation laboratory for exponential last-passage percolation on Z^2:
Busemann functions, semi-infinite geodesic trees and competition interfaces."""

__version__ = "0.1.0"
