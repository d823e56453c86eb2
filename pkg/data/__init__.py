"""Data loading and ingestion modules."""

