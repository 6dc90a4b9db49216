"""Exact tropical convexity and the classification of polytropes."""
