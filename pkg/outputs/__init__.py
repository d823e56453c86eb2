"""Output generation and export modules."""

