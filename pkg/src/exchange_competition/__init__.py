"""Two-term competing-exchange model with numerical cross-checks."""

__version__ = "0.1.0"
