"""Seeded property sweeps over random instances."""
