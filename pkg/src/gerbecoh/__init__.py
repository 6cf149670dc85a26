"""gerbecoh: exact non-abelian Cech cohomology over finite covers and groups."""

__version__ = "0.1.0"
