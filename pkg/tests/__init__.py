"""
Tests package for the nlslab laboratory.
"""
