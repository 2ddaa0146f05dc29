"""
Graded polarisation package.
"""
