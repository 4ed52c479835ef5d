"""SC-VAMP decoding loop, its uncoupled reduction, and the power-allocated baseline.

One decode is a strict sequence of three phases per iteration: LMMSE per row
block, section denoising per column block (with precision-weighted message
merging), and concatenation with harmonic-mean precision pooling.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .code_spec import CodeSpec, CouplingWindow, Dimensions, block_position
from .codec import BlockMetrics, Message, hard_decision, metrics
from .denoisers import g1_lmmse, g2_denoise
from .errors import DecodeDivergedError

GAMMA_MIN = 1e-9
STALL_TOL = 1e-8


@dataclass
class DecodeReport:
    iterations: int
    converged: bool
    clip_events: int
    final_estimate: np.ndarray
    final_message: Message
    history: list[BlockMetrics] = field(default_factory=list)

    @property
    def final_ser(self) -> float:
        if not self.history:
            raise ValueError("no truth was supplied; SER history is empty")
        return self.history[-1].overall_ser

    def ser_table(self) -> np.ndarray:
        """(iterations, Gamma) per-block SER, truth required."""
        return np.array([h.ser for h in self.history])

    def mse_table(self) -> np.ndarray:
        return np.array([h.mse for h in self.history])


def scvamp_decode(y: np.ndarray, ops, spec: CodeSpec, dims: Dimensions,
                  windows: CouplingWindow, K_max: int,
                  truth: Message | None = None,
                  amplitudes: np.ndarray | None = None,
                  damping: float = 0.0,
                  gamma_min: float = GAMMA_MIN) -> DecodeReport:
    """Run the coupled decoder for up to K_max iterations.

    Early-stops when the overall SER hits zero (truth supplied) or when the
    denoised estimate stalls. Non-positive precision updates are clipped to
    gamma_min and counted, never fatal.
    """
    if K_max < 1:
        raise ValueError("K_max must be >= 1")
    if len(y) != dims.M:
        raise ValueError(f"received word has length {len(y)}, expected {dims.M}")
    R, Gamma, W, B = dims.num_row_blocks, dims.num_col_blocks, spec.W, spec.B
    n_c = dims.block_len
    sections_per_block = spec.L // Gamma
    y_r = [y[(r - 1) * dims.M_r: r * dims.M_r] for r in range(1, R + 1)]
    amp_c = None
    if amplitudes is not None:
        amp_c = [amplitudes[(c - 1) * sections_per_block: c * sections_per_block]
                 for c in range(1, Gamma + 1)]

    p1 = [np.zeros(dims.N_r[r - 1]) for r in range(1, R + 1)]
    gamma1 = np.full(R, float(B))
    clip_events = 0
    history: list[BlockMetrics] = []
    prev_xhat = None
    converged = False
    k = 0

    def clip(v: float) -> float:
        nonlocal clip_events
        if v < gamma_min:
            clip_events += 1
            return gamma_min
        return v

    for k in range(1, K_max + 1):
        # LMMSE phase
        gamma2 = np.empty(R)
        p2 = [None] * R
        for i in range(R):
            out = g1_lmmse(p1[i], gamma1[i], y_r[i], ops[i], spec.snr, B)
            eta1 = gamma1[i] / out.divergence
            gamma2[i] = clip(eta1 - gamma1[i])
            p2[i] = (eta1 * out.estimate - gamma1[i] * p1[i]) / gamma2[i]

        # Denoising phase
        xhat = [None] * Gamma
        eta_hat = np.empty(Gamma)
        for c in range(1, Gamma + 1):
            rows = windows.rows_covering(c)
            gamma_hat = float(sum(gamma2[r - 1] for r in rows))
            acc = np.zeros(n_c)
            for r in rows:
                pos = block_position(c, r, windows) - 1
                acc += gamma2[r - 1] * p2[r - 1][pos * n_c: (pos + 1) * n_c]
            p_hat = acc / gamma_hat
            out = g2_denoise(p_hat, gamma_hat, B,
                             amplitudes=None if amp_c is None else amp_c[c - 1])
            xhat[c - 1] = out.estimate
            eta_hat[c - 1] = gamma_hat / out.divergence

        # Concatenating phase
        new_gamma1 = np.empty(R)
        for i, r in enumerate(range(1, R + 1)):
            win = windows.window(r)
            x2 = np.concatenate([xhat[c - 1] for c in win])
            eta2 = len(win) / float(sum(1.0 / eta_hat[c - 1] for c in win))
            g1_next = clip(eta2 - gamma2[i])
            p1_next = (eta2 * x2 - gamma2[i] * p2[i]) / g1_next
            if damping > 0.0:
                g1_next = (1 - damping) * g1_next + damping * gamma1[i]
                p1_next = (1 - damping) * p1_next + damping * p1[i]
            new_gamma1[i] = g1_next
            p1[i] = p1_next
        gamma1 = new_gamma1

        full = np.concatenate(xhat)
        if not np.all(np.isfinite(full)) or not np.all(np.isfinite(gamma1)):
            raise DecodeDivergedError(k)
        if truth is not None:
            history.append(metrics(full, truth, Gamma, B))
            if history[-1].overall_ser == 0.0:
                converged = True
        if prev_xhat is not None and \
                float(np.max(np.abs(full - prev_xhat))) < STALL_TOL:
            converged = True
        prev_xhat = full
        if converged:
            break

    return DecodeReport(iterations=k, converged=converged,
                        clip_events=clip_events, final_estimate=prev_xhat,
                        final_message=hard_decision(prev_xhat, B),
                        history=history)


def vamp_decode(y: np.ndarray, op, spec: CodeSpec, K_max: int,
                truth: Message | None = None,
                amplitudes: np.ndarray | None = None,
                damping: float = 0.0) -> DecodeReport:
    """Uncoupled VAMP: the coupled loop with a single row and column block."""
    from .code_spec import derive_dimensions
    flat = CodeSpec(L=spec.L, B=spec.B, R_all=spec.R_all, snr=spec.snr,
                    Gamma=1, W=1, ensemble=spec.ensemble, seed=spec.seed)
    dims = derive_dimensions(flat)
    windows = CouplingWindow.build(1, 1)
    return scvamp_decode(y, [op], flat, dims, windows, K_max, truth=truth,
                         amplitudes=amplitudes, damping=damping)


def exp_pa_vamp_decode(y: np.ndarray, op, spec: CodeSpec, K_max: int,
                       amplitudes: np.ndarray,
                       truth: Message | None = None,
                       damping: float = 0.0) -> DecodeReport:
    """Uncoupled VAMP with per-section amplitudes (power-allocated baseline)."""
    if len(amplitudes) != spec.L:
        raise ValueError("one amplitude per section required")
    return vamp_decode(y, op, spec, K_max, truth=truth,
                       amplitudes=amplitudes, damping=damping)


def exp_power_allocation(L: int, snr: float, decay_scale: float = 1.0
                         ) -> np.ndarray:
    """Exponentially decaying section amplitudes c_l, normalized to sum c^2 = L.

    c_l^2 is proportional to 2^(-2 C l / L) with C the channel capacity in
    bits, optionally stretched by decay_scale.
    """
    cap_bits = 0.5 * np.log2(1.0 + snr)
    ell = np.arange(L)
    c2 = np.exp2(-2.0 * cap_bits * decay_scale * ell / L)
    c2 *= L / c2.sum()
    return np.sqrt(c2)
