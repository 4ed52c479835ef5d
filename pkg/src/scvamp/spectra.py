"""Limit spectral models of the normalized Gram matrices of the design blocks.

A model describes the spectrum of (1/B) A^T A as the bulk density on the
nonzero support (`rho_supp`, normalized to integrate to 1) plus a point
mass 1 - alpha at zero, where alpha = m/n is the aspect ratio.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

_GL_NODES = 400  # Gauss-Legendre order for bulk quadrature


def _gauss_legendre(a: float, b: float, n: int = _GL_NODES):
    x, w = np.polynomial.legendre.leggauss(n)
    return 0.5 * (b - a) * x + 0.5 * (a + b), 0.5 * (b - a) * w


class Spectrum:
    """Common interface; subclasses provide expectation() over rho_supp."""

    alpha: float | None

    def expectation(self, fn: Callable[[np.ndarray], np.ndarray]) -> float:
        raise NotImplementedError

    def first_moment(self) -> float:
        return self.expectation(lambda lam: lam)

    def transfer(self, x: float, sigma2: float) -> float:
        """E[lambda / (lambda x + sigma^2)] over the nonzero support."""
        return self.expectation(lambda lam: lam / (lam * x + sigma2))

    def transfer_integral(self, x: float, sigma2: float) -> float:
        """Integral of transfer(t) over t in [0, x]; closed under the expectation."""
        return self.expectation(lambda lam: np.log1p(lam * x / sigma2))

    def lmmse_error(self, gamma: float, B: int, snr: float) -> float:
        """E[(snr*B*lambda + gamma)^-1] over the full spectrum incl. zero mass."""
        if gamma <= 0:
            raise ValueError(f"gamma must be positive, got {gamma}")
        if self.alpha is None:
            raise ValueError("aspect ratio required for the LMMSE error")
        bulk = self.expectation(lambda lam: 1.0 / (snr * B * lam + gamma))
        return (1.0 - self.alpha) / gamma + self.alpha * bulk


@dataclass(frozen=True)
class DeltaAtOne(Spectrum):
    """Unit point mass: bulk spectrum of row-orthogonal designs, and the
    alpha -> 0 limit of the Marchenko-Pastur bulk."""

    alpha: float | None = None

    def expectation(self, fn):
        return float(fn(np.asarray(1.0)))

    def lmmse_error(self, gamma: float, B: int, snr: float) -> float:
        if gamma <= 0:
            raise ValueError(f"gamma must be positive, got {gamma}")
        if self.alpha is None:
            raise ValueError("aspect ratio required for the LMMSE error")
        return (1.0 - self.alpha) / gamma + self.alpha / (snr * B + gamma)


@dataclass(frozen=True)
class MarchenkoPastur(Spectrum):
    """Marchenko-Pastur bulk with unit mean, support [(1-sqrt(a))^2, (1+sqrt(a))^2]."""

    alpha: float

    def __post_init__(self):
        if not 0 < self.alpha < 1:
            raise ValueError(f"aspect ratio must lie in (0,1), got {self.alpha}")

    @property
    def support(self) -> tuple[float, float]:
        s = math.sqrt(self.alpha)
        return (1 - s) ** 2, (1 + s) ** 2

    def density(self, lam: np.ndarray) -> np.ndarray:
        lo, hi = self.support
        lam = np.asarray(lam, dtype=float)
        inside = (lam > lo) & (lam < hi)
        out = np.zeros_like(lam)
        out[inside] = np.sqrt((lam[inside] - lo) * (hi - lam[inside])) / (
            2 * math.pi * self.alpha * lam[inside])
        return out

    def expectation(self, fn):
        # Substituting lam = lo + (hi-lo) sin^2(t) removes the square-root
        # endpoint singularities, so fixed Gauss-Legendre converges fast.
        lo, hi = self.support
        t, w = _gauss_legendre(0.0, math.pi / 2)
        s, c = np.sin(t), np.cos(t)
        lam = lo + (hi - lo) * s * s
        jac = (hi - lo) ** 2 * s * s * c * c / (math.pi * self.alpha * lam)
        return float(np.sum(w * jac * fn(lam)))


@dataclass(frozen=True)
class AtomicSpectrum(Spectrum):
    """Finite mixture of point masses on the nonzero support (test spectra)."""

    atoms: tuple[float, ...]
    weights: tuple[float, ...]
    alpha: float | None = None

    def __post_init__(self):
        if len(self.atoms) != len(self.weights):
            raise ValueError("atoms and weights must have equal length")
        if abs(sum(self.weights) - 1.0) > 1e-12:
            raise ValueError("weights must sum to 1")

    def expectation(self, fn):
        lam = np.asarray(self.atoms, dtype=float)
        return float(np.dot(self.weights, fn(lam)))
