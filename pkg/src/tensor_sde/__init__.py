"""Large-N Schwinger-Dyson tools for a rank-3 complex tensor model with pillow interactions."""

__version__ = "0.1.0"
