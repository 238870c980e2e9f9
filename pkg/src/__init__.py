"""
Exact verification toolkit for generalized q-Onsager algebras
"""
