"""Index and nullity of vacuum harmonic maps T^2 -> S^2."""

__version__ = "0.1.0"
