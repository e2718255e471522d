"""Constraint-preserving FR/DG solver for the 2-D transverse-electric
Maxwell equations with spatially varying permittivity and permeability.

Face-based normal components of D evolve with a flux reconstruction scheme,
the cell-interior B_z with a modal DG scheme, and (for k >= 3) curl-type cell
moments close the divergence-free reconstruction. A per-cell compatibility
functional is preserved to machine precision by construction.

Keep this module import-light: the CLI must be able to configure BLAS
threading before numpy is first imported.
"""

__version__ = "0.1.0"
