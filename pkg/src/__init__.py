# src/__init__.py
"""
Exact Grothendieck residues, free resolutions and residue duality checks
"""
__version__ = "1.0.0"
