"""Numerical laboratory for Bergman-Toeplitz operators on fat Hartogs triangles."""
__version__ = "0.1.0"
