"""Compress an incoming symbol pattern against stored patterns by building
multiple alignments, and read codes, inferences, and probabilities off the
best ones."""

__version__ = "0.1.0"
