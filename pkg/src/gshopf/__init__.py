"""Exact GF(2) machinery for DG Hopf algebras.

Bar constructions with homotopy-Gerstenhaber perturbations,
Gerstenhaber-Schack triple complexes, the order-4 structure-relation
checks, the deformation-triviality decision, and the low-order transfer
of structure from a bar complex to its homology.
"""

__version__ = "0.1.0"
