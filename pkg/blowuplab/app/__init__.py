"""Command orchestration."""
