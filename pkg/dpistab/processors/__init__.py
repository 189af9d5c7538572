"""Processors turning library results into output records."""
