"""Shared utilities for the iquantum audits.

This package provides the error hierarchy, run configuration, report writers and scalar formatting.
"""
