"""Exact integral cohomology computations for oriented Grassmannians."""

__version__ = "0.1.0"
