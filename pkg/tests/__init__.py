"""Tests for xy-disentangler."""
