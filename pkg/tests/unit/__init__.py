"""
Unit tests, one module per package.
"""
