"""Per-row-block design operators: dense Gaussian and subsampled DCT.

Operators are immutable after construction and expose forward/adjoint
application plus the spectral summary the decoder and state evolution need.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg
from scipy.fft import dct, idct

from .code_spec import CodeSpec, Dimensions, Ensemble
from .spectra import DeltaAtOne, MarchenkoPastur, Spectrum

# Dense Gaussian blocks above this entry count are stored in float32 to fit
# desk-scale memory (the uncoupled L=2^12 baseline is a 10240 x 65536 matrix).
_F32_ENTRY_THRESHOLD = 2 ** 27


@dataclass(frozen=True)
class GaussianDesign:
    """Dense i.i.d. Gaussian block with a precomputed eigendecomposition of A A^T."""

    r: int
    matrix: np.ndarray        # (m, n)
    gram_eigvals: np.ndarray  # eigenvalues of A A^T, float64, length m
    gram_eigvecs: np.ndarray  # (m, m), same dtype as matrix

    @property
    def m(self) -> int:
        return self.matrix.shape[0]

    @property
    def n(self) -> int:
        return self.matrix.shape[1]

    @property
    def alpha(self) -> float:
        return self.m / self.n

    def forward(self, x: np.ndarray) -> np.ndarray:
        if x.shape != (self.n,):
            raise ValueError(f"expected length {self.n}, got {x.shape}")
        return np.asarray(self.matrix @ x.astype(self.matrix.dtype, copy=False),
                          dtype=np.float64)

    def adjoint(self, y: np.ndarray) -> np.ndarray:
        if y.shape != (self.m,):
            raise ValueError(f"expected length {self.m}, got {y.shape}")
        return np.asarray(self.matrix.T @ y.astype(self.matrix.dtype, copy=False),
                          dtype=np.float64)

    def gram_solve(self, shift: float, v: np.ndarray) -> np.ndarray:
        """(shift*I + A A^T)^-1 v via the cached eigendecomposition."""
        q = self.gram_eigvecs
        u = q.T @ v.astype(q.dtype, copy=False)
        u = u / (shift + self.gram_eigvals).astype(q.dtype, copy=False)
        return np.asarray(q @ u, dtype=np.float64)

    def materialize(self) -> np.ndarray:
        return np.asarray(self.matrix, dtype=np.float64)

    def spectral_model(self) -> Spectrum:
        return MarchenkoPastur(self.alpha)


@dataclass(frozen=True)
class DctDesign:
    """Row-orthogonal block: scaled, sign-flipped, column-permuted DCT rows.

    A = sqrt(B) * P_rows . DCT . Pi . diag(signs), so A A^T = B I exactly.
    """

    r: int
    m: int
    n: int
    scale: float              # sqrt(B)
    rows: np.ndarray          # selected row indices, length m
    perm: np.ndarray          # column permutation, length n
    signs: np.ndarray         # +-1 per column, length n

    @property
    def alpha(self) -> float:
        return self.m / self.n

    def forward(self, x: np.ndarray) -> np.ndarray:
        if x.shape != (self.n,):
            raise ValueError(f"expected length {self.n}, got {x.shape}")
        return self.scale * dct((self.signs * x)[self.perm], norm="ortho")[self.rows]

    def adjoint(self, y: np.ndarray) -> np.ndarray:
        if y.shape != (self.m,):
            raise ValueError(f"expected length {self.m}, got {y.shape}")
        full = np.zeros(self.n)
        full[self.rows] = y
        u = idct(full, norm="ortho")
        out = np.empty(self.n)
        out[self.perm] = u
        return self.scale * self.signs * out

    def materialize(self) -> np.ndarray:
        a = np.empty((self.m, self.n))
        e = np.zeros(self.n)
        for j in range(self.n):
            e[j] = 1.0
            a[:, j] = self.forward(e)
            e[j] = 0.0
        return a

    def spectral_model(self) -> Spectrum:
        return DeltaAtOne(self.alpha)


DesignOperator = GaussianDesign | DctDesign


def sample_design(spec: CodeSpec, dims: Dimensions, r: int,
                  rng: np.random.Generator, dct_randomize: bool = True
                  ) -> DesignOperator:
    """Draw the design block for row block r from the spec's ensemble.

    The rng stream must be derived from (seed, trial, r); reusing a stream
    across blocks breaks reproducibility guarantees.
    """
    if not 1 <= r <= dims.num_row_blocks:
        raise ValueError(f"row block {r} out of range")
    m, n = dims.M_r, dims.N_r[r - 1]
    if m > n:
        raise ValueError(
            f"row block {r} has m={m} > n={n}; aspect ratio must be < 1")
    if spec.ensemble is Ensemble.GAUSSIAN:
        # Variance 1/(sections in the stacked block) = B/n keeps the bulk of
        # (1/B) A^T A at unit mean and the per-block codeword power at 1.
        std = np.sqrt(spec.B / n)
        if m * n > _F32_ENTRY_THRESHOLD:
            a = rng.standard_normal((m, n), dtype=np.float32)
            a *= np.float32(std)
        else:
            a = std * rng.standard_normal((m, n))
        gram = a @ a.T
        # scipy's eigh reuses the gram buffer; numpy's copies it and asks
        # LAPACK for an O(m^2) workspace, which does not fit at the
        # uncoupled desk-scale baseline (m ~ 10^4) next to the matrix.
        d, q = scipy.linalg.eigh(gram, overwrite_a=True, check_finite=False)
        return GaussianDesign(r=r, matrix=a,
                              gram_eigvals=np.asarray(d, dtype=np.float64),
                              gram_eigvecs=q)
    rows = np.sort(rng.choice(n, size=m, replace=False))
    if dct_randomize:
        perm = rng.permutation(n)
        signs = rng.choice(np.array([-1.0, 1.0]), size=n)
    else:
        perm = np.arange(n)
        signs = np.ones(n)
    return DctDesign(r=r, m=m, n=n, scale=float(np.sqrt(spec.B)),
                     rows=rows, perm=perm, signs=signs)


def sample_design_set(spec: CodeSpec, dims: Dimensions,
                      rngs: list[np.random.Generator],
                      dct_randomize: bool = True) -> list[DesignOperator]:
    """One operator per row block; rngs[r-1] drives block r."""
    if len(rngs) != dims.num_row_blocks:
        raise ValueError("need one rng stream per row block")
    return [sample_design(spec, dims, r, rngs[r - 1], dct_randomize)
            for r in range(1, dims.num_row_blocks + 1)]
