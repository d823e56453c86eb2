"""Sweep configuration loading."""
