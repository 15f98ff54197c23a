"""Randomized quantum oblivious transfer: protocol, bounds and tooling."""

__version__ = "0.1.0"
