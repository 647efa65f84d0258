"""
Finite Markov chains: validation, structure and truncation of countable families
"""

from src.chain_core.chain import MarkovChain, validate_chain
from src.chain_core.families import CountableChainSpec, register_family
from src.chain_core.structure import ChainStructure, analyze_structure, stationary_distribution
from src.chain_core.truncation import BoundaryPolicy, truncate

__all__ = [
    "BoundaryPolicy",
    "ChainStructure",
    "CountableChainSpec",
    "MarkovChain",
    "analyze_structure",
    "register_family",
    "stationary_distribution",
    "truncate",
    "validate_chain",
]
