"""Spreads, parallelisms and optimal line colorings of finite projective spaces."""

__version__ = "0.1.0"
