"""Card-based zero-knowledge proof for Shikaku: simulation engine and audit harness."""

__version__ = "0.1.0"
