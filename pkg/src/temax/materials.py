"""Pointwise material property fields eps(x, y) and mu(x, y), SI units.

All profiles are smooth analytic closures; a single value is returned per
point, however many cells share it (the Riemann formulas rely on that
single-valuedness).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

EPS0 = 8.85e-12          # F/m
MU0 = 4.0e-7 * np.pi     # H/m
C0 = 1.0 / np.sqrt(EPS0 * MU0)


@dataclass(frozen=True)
class Material:
    name: str
    eps: Callable[[np.ndarray, np.ndarray], np.ndarray]
    mu: Callable[[np.ndarray, np.ndarray], np.ndarray]

    def speed(self, x, y) -> np.ndarray:
        """Local light speed 1/sqrt(eps mu)."""
        return 1.0 / np.sqrt(self.eps(x, y) * self.mu(x, y))


def _const(value: float):
    def f(x, y):
        return np.full(np.broadcast(np.asarray(x), np.asarray(y)).shape, value)
    return f


def vacuum() -> Material:
    return Material("vacuum", _const(EPS0), _const(MU0))


def dielectric_disk() -> Material:
    """Dielectric disk of radius 0.75 m centered at the origin.

    eps_r = 5 - 4 tanh((r - 0.75)/0.08): about 9 inside, 1 far outside.
    """
    def eps(x, y):
        r = np.sqrt(np.asarray(x) ** 2 + np.asarray(y) ** 2)
        return EPS0 * (5.0 - 4.0 * np.tanh((r - 0.75) / 0.08))
    return Material("dielectric_disk", eps, _const(MU0))


def refraction_slab() -> Material:
    """Half-space slab: eps ramps from eps0 (x<0) to 2.25 eps0 (x>0)."""
    def eps(x, y):
        x = np.asarray(x, float)
        return EPS0 * (1.625 + 0.625 * np.tanh(1.0e8 * x)) + 0.0 * np.asarray(y)
    return Material("refraction_slab", eps, _const(MU0))


def tir_slab() -> Material:
    """Half-space slab: eps drops from 4 eps0 (x<0) to eps0 (x>0)."""
    def eps(x, y):
        x = np.asarray(x, float)
        return EPS0 * (2.5 - 1.5 * np.tanh(4.0e8 * x)) + 0.0 * np.asarray(y)
    return Material("tir_slab", eps, _const(MU0))


def analytic(name: str, eps_fn, mu_fn) -> Material:
    """User-supplied analytic profile (mainly for tests)."""
    return Material(name, eps_fn, mu_fn)
