"""Exact verification toolkit for H_q-module algebra structures on crossed
products S(V) #_f G and the formal deformations they produce."""

__version__ = "0.1.0"
