"""The two VAMP estimators: section-wise Bayes denoiser and LMMSE stage.

Both return the estimate together with its exact mean derivative (the
divergence used for the precision bookkeeping); no stochastic trace
estimation anywhere.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .ensembles import DctDesign, GaussianDesign


@dataclass(frozen=True)
class DenoiserOutput:
    estimate: np.ndarray
    divergence: float


def _check_gamma(gamma: float):
    if not gamma > 0:
        raise ValueError(f"precision must be positive, got {gamma}")


def _check_finite(name: str, v: np.ndarray):
    if not np.all(np.isfinite(v)):
        raise ValueError(f"non-finite values in {name}")


def g2_denoise(p: np.ndarray, gamma: float, B: int,
               amplitudes: np.ndarray | None = None) -> DenoiserOutput:
    """Posterior mean under the one-hot section prior: per-section softmax.

    With per-section amplitudes c_l (power allocation), the posterior over
    positions is softmax(gamma*c_l*p) and the estimate is c_l times it; the
    constant gamma*c_l^2/2 shift cancels within a section.
    """
    _check_gamma(gamma)
    _check_finite("p", p)
    if len(p) % B != 0:
        raise ValueError("input length not divisible by section size")
    pm = p.reshape(-1, B)
    if amplitudes is None:
        logits = gamma * pm
        scale2 = 1.0
    else:
        amp = np.asarray(amplitudes).reshape(-1, 1)
        if amp.shape[0] != pm.shape[0]:
            raise ValueError("one amplitude per section required")
        logits = gamma * amp * pm
        scale2 = amp ** 2
    logits = logits - logits.max(axis=1, keepdims=True)
    q = np.exp(logits)
    q /= q.sum(axis=1, keepdims=True)
    div = float(np.mean(gamma * scale2 * q * (1.0 - q)))
    est = q if amplitudes is None else amp * q
    return DenoiserOutput(estimate=est.ravel(), divergence=div)


def g1_lmmse_dense(p: np.ndarray, gamma: float, y: np.ndarray,
                   op: GaussianDesign, snr: float) -> DenoiserOutput:
    """LMMSE stage (snr A^T A + gamma I)^-1 (snr A^T y + gamma p).

    Solved through the Woodbury identity with the operator's cached
    eigendecomposition of A A^T, so nothing of size n x n is ever formed.
    """
    _check_gamma(gamma)
    _check_finite("p", p)
    _check_finite("y", y)
    m, n = op.m, op.n
    # v = snr A^T y + gamma p; (snr A^T A + gamma I)^-1 v
    #   = (v - A^T (gamma/snr I + A A^T)^-1 A v) / gamma
    # with A v = snr (A A^T) y + gamma A p computed in the eigenbasis.
    ay = op.gram_eigvecs.T @ y.astype(op.gram_eigvecs.dtype, copy=False)
    gram_y = op.gram_eigvecs @ (ay * op.gram_eigvals.astype(ay.dtype))
    av = snr * np.asarray(gram_y, dtype=np.float64) + gamma * op.forward(p)
    v = snr * op.adjoint(y) + gamma * p
    est = (v - op.adjoint(op.gram_solve(gamma / snr, av))) / gamma
    trace = (n - m) / gamma + float(np.sum(1.0 / (snr * op.gram_eigvals + gamma)))
    return DenoiserOutput(estimate=est, divergence=gamma * trace / n)


def g1_lmmse_roworth(p: np.ndarray, gamma: float, y: np.ndarray,
                     op: DctDesign, snr: float, B: int) -> DenoiserOutput:
    """Fast LMMSE for operators with all singular values equal to sqrt(B)."""
    _check_gamma(gamma)
    _check_finite("p", p)
    _check_finite("y", y)
    est = p + snr / (gamma + B * snr) * op.adjoint(y - op.forward(p))
    alpha = op.alpha
    div = (1.0 - alpha) + alpha * gamma / (snr * B + gamma)
    return DenoiserOutput(estimate=est, divergence=div)


def g1_lmmse(p: np.ndarray, gamma: float, y: np.ndarray, op, snr: float,
             B: int) -> DenoiserOutput:
    if isinstance(op, DctDesign):
        return g1_lmmse_roworth(p, gamma, y, op, snr, B)
    return g1_lmmse_dense(p, gamma, y, op, snr)
