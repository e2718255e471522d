"""Post-processing plots for solver output files.

This package is a read-only consumer of the CSV and snapshot files the
solver writes; it never imports the solver itself, so the file formats
are the only coupling between the two.
"""

from .io import SchemaError, read_energy, read_snapshot  # noqa: F401
