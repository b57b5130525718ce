"""Standalone utilities: python -m app.scripts.<name>."""
