"""releq: numerical quantum information built around relative entropy."""

__version__ = "0.1.0"
