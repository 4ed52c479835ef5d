"""Spatially coupled sparse superposition codes with an SC-VAMP decoder."""

from .code_spec import (CodeSpec, CouplingWindow, Dimensions, Ensemble,
                        block_position, coupling_window, derive_dimensions)
from .codec import (BlockMetrics, Channel, Message, awgn, encode,
                    hard_decision, metrics, sample_message)
from .decoder import (DecodeReport, exp_pa_vamp_decode, exp_power_allocation,
                      scvamp_decode, vamp_decode)
from .denoisers import (DenoiserOutput, g1_lmmse, g1_lmmse_dense,
                        g1_lmmse_roworth, g2_denoise)
from .ensembles import (DctDesign, DesignOperator, GaussianDesign,
                        sample_design, sample_design_set)
from .errors import (ConfigError, DecodeDivergedError, InfeasibleRateError,
                     SEDivergedError)
from .harness import ExperimentConfig, run_simulate, run_trial
from .spectra import AtomicSpectrum, DeltaAtOne, MarchenkoPastur, Spectrum
from .state_evolution import (LimitSEState, Prop1Constants, Thresholds,
                              bits_to_nats, e1, e2_mc, finite_b_se, limit_se,
                              nats_to_bits, prop1_constants, thresholds,
                              transfer_fn, verify_prop1)

__all__ = [name for name in dir() if not name.startswith("_")]
__version__ = "0.1.0"
