"""Induce tree-generating programs from examples by Bayesian program merging.

Programs and observations are passed around as s-expression text, the same
format the command-line tool reads and writes.
"""

from ._progmerge import (
    ResourceLimitError,
    compressions,
    deargument_candidates,
    incorporate,
    normalize,
    program_size,
    sample,
    score,
    search,
)

__all__ = [
    "ResourceLimitError",
    "compressions",
    "deargument_candidates",
    "incorporate",
    "normalize",
    "program_size",
    "sample",
    "score",
    "search",
]
