"""Partitioning highly connected tournaments into robust parts and cycles."""
from .core import (
    Tournament,
    build,
    induced,
    paley,
    random_tournament,
    reverse,
    transitive,
)

__all__ = [
    "Tournament",
    "build",
    "induced",
    "paley",
    "random_tournament",
    "reverse",
    "transitive",
]
