"""Test suite for aggreason."""
