"""Link diagrams of complex plane curves cut by spheres."""

__version__ = "0.1.0"
