"""Message sampling, coupled encoding, AWGN corruption, and error metrics."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .code_spec import CouplingWindow, Dimensions


@dataclass(frozen=True)
class Message:
    """Section-sparse message: one nonzero per length-B section.

    positions are 0-based within each section; amplitudes default to 1 and
    carry the per-section scaling when power allocation is in use.
    """

    x: np.ndarray           # length N
    positions: np.ndarray   # length L, ints in [0, B)

    @staticmethod
    def from_positions(positions: np.ndarray, B: int,
                       amplitudes: np.ndarray | None = None) -> "Message":
        L = len(positions)
        x = np.zeros(L * B)
        vals = np.ones(L) if amplitudes is None else amplitudes
        x[np.arange(L) * B + positions] = vals
        return Message(x=x, positions=np.asarray(positions))

    def block(self, c: int, num_blocks: int) -> np.ndarray:
        """Entries of column block c (1-based)."""
        n_c = len(self.x) // num_blocks
        return self.x[(c - 1) * n_c: c * n_c]


@dataclass(frozen=True)
class Channel:
    snr: float

    @property
    def sigma2(self) -> float:
        return 1.0 / self.snr

    @property
    def capacity_bits(self) -> float:
        return 0.5 * np.log2(1.0 + self.snr)

    @property
    def capacity_nats(self) -> float:
        return 0.5 * np.log1p(self.snr)


@dataclass(frozen=True)
class BlockMetrics:
    """Per-column-block MSE and section error rate, plus their overall mean."""

    mse: np.ndarray      # E_c, per section, length Gamma
    ser: np.ndarray      # SER_c, length Gamma
    overall_ser: float

    @staticmethod
    def compute(xhat: np.ndarray, truth: Message, num_blocks: int, B: int
                ) -> "BlockMetrics":
        L = len(truth.positions)
        per_block = L // num_blocks
        dec = xhat.reshape(L, B).argmax(axis=1)
        wrong = (dec != truth.positions).reshape(num_blocks, per_block)
        ser = wrong.mean(axis=1)
        err = (xhat - truth.x).reshape(num_blocks, -1)
        mse = (err ** 2).sum(axis=1) / per_block
        return BlockMetrics(mse=mse, ser=ser, overall_ser=float(ser.mean()))


def sample_message(L: int, B: int, Gamma: int, rng: np.random.Generator,
                   amplitudes: np.ndarray | None = None) -> Message:
    if L % Gamma != 0:
        raise ValueError(f"L={L} not divisible by Gamma={Gamma}")
    positions = rng.integers(0, B, size=L)
    return Message.from_positions(positions, B, amplitudes)


def encode(msg: Message, ops, windows: CouplingWindow, dims: Dimensions
           ) -> np.ndarray:
    """z = [A_1 stacked-blocks, ..., A_R stacked-blocks]."""
    if len(msg.x) != dims.N:
        raise ValueError("message length inconsistent with dimensions")
    parts = []
    for r in range(1, dims.num_row_blocks + 1):
        stacked = np.concatenate(
            [msg.block(c, dims.num_col_blocks) for c in windows.window(r)])
        parts.append(ops[r - 1].forward(stacked))
    return np.concatenate(parts)


def awgn(z: np.ndarray, sigma2: float, rng: np.random.Generator) -> np.ndarray:
    if sigma2 <= 0:
        raise ValueError(f"noise variance must be positive, got {sigma2}")
    return z + rng.normal(0.0, np.sqrt(sigma2), size=len(z))


def hard_decision(xhat: np.ndarray, B: int) -> Message:
    """Per section, put a 1 at the argmax entry; ties go to the lowest index."""
    if len(xhat) % B != 0:
        raise ValueError("estimate length not divisible by section size")
    positions = xhat.reshape(-1, B).argmax(axis=1)
    return Message.from_positions(positions, B)


def metrics(xhat: np.ndarray, truth: Message, num_blocks: int, B: int
            ) -> BlockMetrics:
    return BlockMetrics.compute(xhat, truth, num_blocks, B)
