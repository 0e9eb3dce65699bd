"""Properly colored spanning spiders and tree subdivisions in edge-colored
complete graphs without monochromatic triangles."""

__version__ = "0.1.0"
