"""Exact kernel for quantum supermatrix coordinate algebras.

Subpackages cover Laurent-polynomial coefficients, the straightening
kernel, quantum superspaces and minors, the determinant localization,
dual canonical bases, and quantum-group actions.
"""

__version__ = "0.1.0"
