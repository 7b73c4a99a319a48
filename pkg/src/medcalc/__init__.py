"""Verifiable medical-calculation environment.

Procedurally generates equation- and scale-based clinical calculation cases
from a declarative catalog, renders them as prompts, and grades free-text
answers into binary rewards.
"""

__version__ = "0.1.0"
