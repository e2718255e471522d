"""Uniform periodic Cartesian mesh.

Storage convention used throughout the solver: for cell (i, j),
vertical face i carries the face at x_{i+1/2} (the cell's right face),
horizontal face j the face at y_{j+1/2} (the cell's top face), and
vertex (i, j) the corner at (x_{i+1/2}, y_{j+1/2}). Left/bottom neighbors
are reached by periodic index rolls.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class Mesh:
    nx: int
    ny: int
    x0: float
    x1: float
    y0: float
    y1: float

    def __post_init__(self):
        if self.nx < 1 or self.ny < 1:
            raise ValueError("cell counts must be positive")
        if self.x1 <= self.x0 or self.y1 <= self.y0:
            raise ValueError("domain bounds must be increasing")

    @property
    def dx(self) -> float:
        return (self.x1 - self.x0) / self.nx

    @property
    def dy(self) -> float:
        return (self.y1 - self.y0) / self.ny

    @property
    def n_cells(self) -> int:
        return self.nx * self.ny

    @property
    def area(self) -> float:
        return (self.x1 - self.x0) * (self.y1 - self.y0)

    def cell_centers(self) -> tuple[np.ndarray, np.ndarray]:
        """xc, yc as 1-D arrays of length nx and ny."""
        xc = self.x0 + (np.arange(self.nx) + 0.5) * self.dx
        yc = self.y0 + (np.arange(self.ny) + 0.5) * self.dy
        return xc, yc

    def vertical_face_x(self) -> np.ndarray:
        """x_{i+1/2} for i = 0..nx-1 (right face of cell i)."""
        return self.x0 + (np.arange(self.nx) + 1.0) * self.dx

    def horizontal_face_y(self) -> np.ndarray:
        """y_{j+1/2} for j = 0..ny-1 (top face of cell j)."""
        return self.y0 + (np.arange(self.ny) + 1.0) * self.dy

    def to_reference(self, x, y, i, j):
        """Physical point -> reference coordinates of cell (i, j)."""
        xc = self.x0 + (i + 0.5) * self.dx
        yc = self.y0 + (j + 0.5) * self.dy
        return (x - xc) / self.dx, (y - yc) / self.dy

    def to_physical(self, xi, eta, i, j):
        """Reference coordinates of cell (i, j) -> physical point."""
        xc = self.x0 + (i + 0.5) * self.dx
        yc = self.y0 + (j + 0.5) * self.dy
        return xc + xi * self.dx, yc + eta * self.dy
