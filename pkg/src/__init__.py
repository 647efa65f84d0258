"""
ergograph
Spectral gaps, drift conditions and Lyapunov synthesis for finite Markov chains
"""

__version__ = "0.1.0"
