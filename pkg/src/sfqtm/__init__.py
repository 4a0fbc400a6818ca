"""Technology mapping for single-flux-quantum circuits."""

__version__ = "0.1.0"
