"""Whispering-gallery resonances of radially symmetric Helmholtz problems."""

__version__ = "0.1.0"
