"""Triple-crossing projections and diagrams of knots and links."""

__version__ = "0.1.0"
