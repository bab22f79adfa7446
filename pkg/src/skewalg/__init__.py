"""Skew algebroid toolkit."""
