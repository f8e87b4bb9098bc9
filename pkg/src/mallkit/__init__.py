"""mallkit: type isomorphisms for multiplicative-additive linear logic."""

__version__ = "0.1.0"
