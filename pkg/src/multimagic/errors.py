"""Shared exception types.

The CLI maps these onto its exit-code contract: usage problems
(ValueError / FormatError) exit 2, construction failures exit 3, and a
verification that completes with a negative verdict exits 1 without
raising at all.
"""


class ConstructionError(RuntimeError):
    """A constructive pipeline could not produce a verified artifact."""


class SearchExhausted(ConstructionError):
    """A deterministic candidate search ran out of candidates."""


class FormatError(ValueError):
    """A file does not conform to its declared format."""
