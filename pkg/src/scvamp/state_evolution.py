"""Deterministic performance prediction and threshold analysis.

Two recursions are provided: the finite-section-size tracker (mirrors the
decoder's precision bookkeeping, Monte-Carlo for the section posterior
variance) and the large-section-limit recursion over rescaled variables with
a 0/1 phase indicator. Thresholds and the wave-propagation constants are
computed in nats; user-facing rates are bits with explicit conversion.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq

from .code_spec import CodeSpec, CouplingWindow, Dimensions
from .decoder import GAMMA_MIN
from .errors import SEDivergedError
from .spectra import Spectrum

NATS_PER_BIT = math.log(2.0)


def bits_to_nats(r: float) -> float:
    return r * NATS_PER_BIT


def nats_to_bits(r: float) -> float:
    return r / NATS_PER_BIT


def transfer_fn(x: float, spectrum: Spectrum, sigma2: float) -> float:
    """F(x) = E[lambda / (lambda x + sigma^2)] over the limit bulk spectrum."""
    if x < 0:
        raise ValueError("argument must be nonnegative")
    return spectrum.transfer(x, sigma2)


def e1(gamma: float, spectrum: Spectrum, B: int, snr: float) -> float:
    """Predicted LMMSE-stage error E[(snr B lambda + gamma)^-1]."""
    return spectrum.lmmse_error(gamma, B, snr)


def e2_mc(gamma: float, B: int, n_samples: int, rng: np.random.Generator
          ) -> tuple[float, float]:
    """Monte-Carlo section posterior variance; returns (estimate, std error).

    Averages 1 - q_true where q_true is the posterior weight of the true
    position of a section observed at noise precision gamma.
    """
    if gamma <= 0:
        raise ValueError(f"gamma must be positive, got {gamma}")
    if n_samples < 10_000:
        raise ValueError("need at least 1e4 samples")
    u = rng.standard_normal((n_samples, B))
    z = np.sqrt(gamma) * u
    z[:, 0] += gamma  # true position gets the +gamma mean shift
    z -= z.max(axis=1, keepdims=True)
    q = np.exp(z)
    vals = 1.0 - q[:, 0] / q.sum(axis=1)
    return float(vals.mean()), float(vals.std(ddof=1) / np.sqrt(n_samples))


@dataclass(frozen=True)
class FiniteSEState:
    k: int
    gamma1: np.ndarray      # per row block
    gamma2: np.ndarray
    gamma2_hat: np.ndarray  # per column block
    eta2_hat: np.ndarray
    predicted_mse: np.ndarray  # E_c = B / eta2_hat


def finite_b_se(spec: CodeSpec, dims: Dimensions, windows: CouplingWindow,
                spectra: list[Spectrum], K: int,
                mc_samples: int, rng: np.random.Generator
                ) -> list[FiniteSEState]:
    """Finite-B tracker of the decoder's scalar precisions.

    spectra[r-1] describes row block r (must carry its aspect ratio).
    Uses the decoder's clipping policy so predictions stay comparable.
    """
    if K < 1:
        raise ValueError("K must be >= 1")
    R, Gamma, B = dims.num_row_blocks, dims.num_col_blocks, spec.B
    gamma1 = np.full(R, float(B))
    trace: list[FiniteSEState] = []
    for k in range(1, K + 1):
        gamma2 = np.empty(R)
        for i in range(R):
            err = e1(gamma1[i], spectra[i], B, spec.snr)
            gamma2[i] = max(1.0 / err - gamma1[i], GAMMA_MIN)
        gamma2_hat = np.empty(Gamma)
        eta2_hat = np.empty(Gamma)
        for c in range(1, Gamma + 1):
            gh = float(sum(gamma2[r - 1] for r in windows.rows_covering(c)))
            gamma2_hat[c - 1] = gh
            err2, _ = e2_mc(gh, B, mc_samples, rng)
            eta2_hat[c - 1] = B / err2
        new_gamma1 = np.empty(R)
        for i, r in enumerate(range(1, R + 1)):
            win = windows.window(r)
            eta2 = len(win) / float(sum(1.0 / eta2_hat[c - 1] for c in win))
            new_gamma1[i] = max(eta2 - gamma2[i], GAMMA_MIN)
        if not (np.all(np.isfinite(new_gamma1)) and np.all(np.isfinite(eta2_hat))):
            raise SEDivergedError(f"state evolution non-finite at iteration {k}")
        trace.append(FiniteSEState(
            k=k, gamma1=gamma1.copy(), gamma2=gamma2,
            gamma2_hat=gamma2_hat, eta2_hat=eta2_hat,
            predicted_mse=B / eta2_hat))
        gamma1 = new_gamma1
    return trace


@dataclass(frozen=True)
class LimitSEState:
    k: int
    sigma: np.ndarray  # per row block, in [0, 1]
    phi: np.ndarray    # per row block
    tau: np.ndarray    # per column block
    psi: np.ndarray    # per column block, 0/1


def limit_se(Gamma: int, W: int, R_all_nats: float, spectrum: Spectrum,
             sigma2: float, K: int) -> list[LimitSEState]:
    """Large-section-limit recursion over (sigma, phi, tau, psi).

    The rate must be supplied in nats; the 1/2 threshold on tau is
    natural-log consistent.
    """
    if K < 1:
        raise ValueError("K must be >= 1")
    windows = CouplingWindow.build(Gamma, W)
    vartheta = (Gamma + W - 1) / Gamma
    R = Gamma + W - 1
    sigma = np.ones(R)
    trace: list[LimitSEState] = []
    for k in range(K):
        phi = np.array([transfer_fn(sigma[i], spectrum, sigma2)
                        for i in range(R)])
        tau = np.empty(Gamma)
        for c in range(1, Gamma + 1):
            s = sum(phi[r - 1] / (vartheta * len(windows.window(r)))
                    for r in windows.rows_covering(c))
            tau[c - 1] = R_all_nats / s
        psi = (tau > 0.5).astype(float)
        trace.append(LimitSEState(k=k, sigma=sigma.copy(), phi=phi,
                                  tau=tau, psi=psi))
        sigma = np.array([psi[[c - 1 for c in windows.window(r)]].mean()
                          for r in range(1, R + 1)])
    return trace


@dataclass(frozen=True)
class Thresholds:
    R_alg_nats: float
    R_IT_nats: float
    capacity_nats: float

    @property
    def R_alg_bits(self) -> float:
        return nats_to_bits(self.R_alg_nats)

    @property
    def R_IT_bits(self) -> float:
        return nats_to_bits(self.R_IT_nats)

    @property
    def capacity_bits(self) -> float:
        return nats_to_bits(self.capacity_nats)


def thresholds(spectrum: Spectrum, sigma2: float) -> Thresholds:
    """Algorithmic and information-theoretic rate thresholds, in nats."""
    r_alg = 0.5 * transfer_fn(1.0, spectrum, sigma2)
    r_it = 0.5 * spectrum.transfer_integral(1.0, sigma2)
    cap = 0.5 * math.log1p(1.0 / sigma2)
    if r_it > cap + 1e-9:
        raise ArithmeticError(
            f"R_IT={r_it} exceeds capacity {cap}; spectrum not normalized?")
    return Thresholds(R_alg_nats=r_alg, R_IT_nats=r_it, capacity_nats=cap)


@dataclass(frozen=True)
class Prop1Constants:
    """Wave-propagation constants for the coupled regime."""

    regime: str              # "below_alg", "coupled", "above_it"
    delta_nats: float | None = None
    l_star: float | None = None
    h_star: float | None = None
    g: int | None = None
    K_bound: int | None = None
    W_min: int | None = None


def prop1_constants(vartheta: float, R_all_nats: float, spectrum: Spectrum,
                    sigma2: float, Gamma: int, W: int) -> Prop1Constants:
    """Solve the two monotone scalar equations defining the wave speed.

    Outside the open rate interval (R_alg/vartheta, R_IT/vartheta) only the
    regime flag is returned.
    """
    th = thresholds(spectrum, sigma2)
    if R_all_nats < th.R_alg_nats / vartheta:
        return Prop1Constants(regime="below_alg")
    if R_all_nats >= th.R_IT_nats / vartheta:
        return Prop1Constants(regime="above_it")
    delta = th.R_IT_nats / vartheta - R_all_nats
    target_l = vartheta * R_all_nats / th.R_alg_nats
    # l(x) = x - ln x decreases on (0,1) from +inf to 0
    l_star = brentq(lambda x: (x - math.log(x)) - target_l, 1e-300, 1.0,
                    xtol=1e-15, rtol=1e-15)
    f1 = transfer_fn(1.0, spectrum, sigma2)
    target_h = 2.0 * vartheta * delta

    def h(x):
        return spectrum.transfer_integral(x, sigma2) - f1 * x

    h_star = brentq(lambda x: h(x) - target_h, 1e-300, 1.0,
                    xtol=1e-15, rtol=1e-15)
    g = min(math.floor(h_star * W), math.floor(l_star * W))
    w_min = max(math.ceil(1.0 / l_star), math.ceil(1.0 / h_star))
    k_bound = 1 + math.ceil(Gamma / (2 * g)) if g >= 1 else None
    return Prop1Constants(regime="coupled", delta_nats=delta, l_star=l_star,
                          h_star=h_star, g=g, K_bound=k_bound, W_min=w_min)


@dataclass(frozen=True)
class Prop1Report:
    regime: str
    passed: bool
    detail: str
    constants: Prop1Constants | None = None
    decoded_at: int | None = None


def verify_prop1(Gamma: int, W: int, R_all_nats: float, spectrum: Spectrum,
                 sigma2: float) -> Prop1Report:
    """Check the wave-propagation guarantees on the limit recursion."""
    vartheta = (Gamma + W - 1) / Gamma
    consts = prop1_constants(vartheta, R_all_nats, spectrum, sigma2, Gamma, W)
    if consts.regime == "below_alg":
        trace = limit_se(Gamma, W, R_all_nats, spectrum, sigma2, K=1)
        ok = bool(np.all(trace[0].psi == 0.0))
        return Prop1Report(regime="below_alg", passed=ok,
                           detail="first-iteration indicator must vanish",
                           constants=consts)
    if consts.regime == "above_it":
        return Prop1Report(regime="above_it", passed=False,
                           detail="rate above the coupled threshold",
                           constants=consts)
    if consts.g is None or consts.g < 1 or W <= consts.W_min:
        return Prop1Report(regime="coupled", passed=False,
                           detail="sufficient condition not met: "
                                  f"W={W} <= W_min={consts.W_min}",
                           constants=consts)
    trace = limit_se(Gamma, W, R_all_nats, spectrum, sigma2,
                     K=consts.K_bound + 1)
    half = math.ceil(Gamma / 2)
    decoded_at = None
    for st in trace:
        front = min((st.k + 1) * consts.g, half)
        for c in range(1, front + 1):
            if st.psi[c - 1] != 0.0 or st.psi[Gamma - c] != 0.0:
                return Prop1Report(
                    regime="coupled", passed=False, constants=consts,
                    detail=f"front violation at iteration {st.k}, block {c}")
        if decoded_at is None and not st.psi.any():
            decoded_at = st.k
    if decoded_at is None or decoded_at > consts.K_bound:
        return Prop1Report(regime="coupled", passed=False, constants=consts,
                           detail=f"not fully decoded by K={consts.K_bound}",
                           decoded_at=decoded_at)
    return Prop1Report(regime="coupled", passed=True, constants=consts,
                       decoded_at=decoded_at,
                       detail=f"front speed >= {consts.g}/iteration, "
                              f"decoded at {decoded_at} <= {consts.K_bound}")
