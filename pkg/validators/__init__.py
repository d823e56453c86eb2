"""Report validation and diagnostics modules."""
