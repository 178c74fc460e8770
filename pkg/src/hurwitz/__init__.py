"""Branched covers of surfaces as transposition tuples: move calculus,
orbit censuses, canonical forms with replayable certificates."""

__version__ = "0.1.0"
