"""Seeded verification sweeps."""
