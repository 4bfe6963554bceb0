"""Tests for negations, aggregations and implications."""
