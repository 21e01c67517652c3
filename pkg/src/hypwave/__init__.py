"""Small-amplitude periodic traveling waves of hyperbolic balance laws with relaxation."""
__version__ = "0.1.0"
