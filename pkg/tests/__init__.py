"""Test package for iquantum."""
