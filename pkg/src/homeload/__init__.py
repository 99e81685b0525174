"""Multivariate household electricity-load forecasting toolkit."""

__version__ = "0.1.0"
