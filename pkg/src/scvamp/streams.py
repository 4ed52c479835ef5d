"""Derivation of independent, reproducible RNG streams.

Every consumer gets its own stream keyed by (base_seed, trial, purpose[, block])
so no generator is ever shared or reused.
"""

from __future__ import annotations

import numpy as np

_PURPOSE = {"msg": 1, "noise": 2, "design": 3, "se": 4}


def stream(base_seed: int, *keys: int | str) -> np.random.Generator:
    ints = [int(base_seed) & 0xFFFFFFFFFFFFFFFF]
    for k in keys:
        ints.append(_PURPOSE[k] if isinstance(k, str) else int(k))
    return np.random.default_rng(np.random.SeedSequence(ints))


def design_streams(base_seed: int, trial: int, num_row_blocks: int
                   ) -> list[np.random.Generator]:
    return [stream(base_seed, trial, "design", r)
            for r in range(1, num_row_blocks + 1)]
