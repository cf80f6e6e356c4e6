"""HoloMed: gesture-driven lesson server with a pyramid-projection scheduler."""

__version__ = "0.1.0"
