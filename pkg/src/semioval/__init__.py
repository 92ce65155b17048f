"""Search and verification of blocking semiovals in PG(2,q)."""

__version__ = "0.1.0"
