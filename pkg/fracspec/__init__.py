"""
fracspec: first eigenvalue of the one-dimensional fractional p-Laplacian with a
potential and zero exterior condition, and the optimization of that eigenvalue
over L^q balls and rearrangement classes of potentials.
"""

from .main import main, run
