"""Tests for the inference methods."""
