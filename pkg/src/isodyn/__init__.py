"""Exact Schlesinger transformations of Fuchsian systems and the discrete Painleve maps they induce."""

__version__ = "0.1.0"
