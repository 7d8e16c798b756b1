"""Tests for different test runners."""
