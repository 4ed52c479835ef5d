import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from scvamp import (CodeSpec, ConfigError, CouplingWindow, Ensemble,
                    InfeasibleRateError, block_position, coupling_window,
                    derive_dimensions)


def spec(**kw):
    base = dict(L=2 ** 14, B=16, R_all=1.60, snr=15.0, Gamma=16, W=2,
                ensemble=Ensemble.DCT, seed=0)
    base.update(kw)
    return CodeSpec(**base)


class TestCouplingWindow:
    def test_fig1_family(self):
        # Gamma=5, W=2: ramp-up, band, ramp-down
        assert coupling_window(1, 5, 2) == [1]
        assert coupling_window(2, 5, 2) == [1, 2]
        assert coupling_window(6, 5, 2) == [5]

    def test_uncoupled_is_singleton(self):
        assert coupling_window(3, 5, 1) == [3]

    def test_width_three(self):
        assert coupling_window(4, 5, 3) == [2, 3, 4]

    def test_out_of_range(self):
        with pytest.raises(ValueError):
            coupling_window(7, 5, 2)
        with pytest.raises(ValueError):
            coupling_window(0, 5, 2)

    @given(st.integers(1, 64), st.data())
    @settings(max_examples=80, deadline=None)
    def test_inverse_and_sizes(self, Gamma, data):
        W = data.draw(st.integers(1, min(Gamma, 8)))
        win = CouplingWindow.build(Gamma, W)
        assert sum(len(w) for w in win.windows) == Gamma * W
        for c in range(1, Gamma + 1):
            assert win.rows_covering(c) == tuple(range(c, c + W))


class TestBlockPosition:
    def test_examples(self):
        win = CouplingWindow.build(5, 2)
        assert block_position(1, 2, win) == 1
        assert block_position(5, 6, win) == 1

    def test_singleton(self):
        win = CouplingWindow.build(5, 1)
        for r in range(1, 6):
            assert block_position(r, r, win) == 1

    def test_not_in_window(self):
        win = CouplingWindow.build(5, 2)
        with pytest.raises(ValueError):
            block_position(4, 2, win)

    @given(st.integers(1, 64), st.data())
    @settings(max_examples=80, deadline=None)
    def test_closed_form_index(self, Gamma, data):
        # rank of c within the window equals c + N(r) - r where
        # N(r) = |W_r| for r <= W else W
        W = data.draw(st.integers(1, min(Gamma, 8)))
        win = CouplingWindow.build(Gamma, W)
        for r in range(1, Gamma + W):
            size = len(win.window(r))
            n_r = size if r <= W else W
            for c in win.window(r):
                assert block_position(c, r, win) == c + n_r - r


class TestDimensions:
    def test_fig3_arithmetic(self):
        dims = derive_dimensions(spec())
        assert dims.num_row_blocks == 17
        assert dims.M_r == 2409
        assert dims.M == 40953
        assert dims.M == dims.M_r * dims.num_row_blocks
        assert dims.R_eff == pytest.approx(1.60027, abs=1e-4)
        assert dims.vartheta == pytest.approx(17 / 16)

    def test_trivial_unit_case(self):
        dims = derive_dimensions(spec(L=4, B=2, R_all=1.0, Gamma=1, W=1))
        assert dims.M == 4
        assert dims.N == 8
        assert dims.vartheta == 1.0

    def test_column_sums(self):
        # each column block is covered by exactly W row blocks
        s = spec(L=256, B=4, Gamma=8, W=3, R_all=0.8)
        dims = derive_dimensions(s)
        assert sum(dims.N_r) == s.W * dims.N

    def test_deterministic_idempotent(self):
        assert derive_dimensions(spec()) == derive_dimensions(spec())

    def test_infeasible_rate(self):
        with pytest.raises(InfeasibleRateError):
            derive_dimensions(spec(L=16, B=2, R_all=50.0, Gamma=16, W=1))

    def test_rounding_drift_rejected(self):
        # tiny L with many row blocks forces >1% drift
        with pytest.raises(ConfigError):
            derive_dimensions(spec(L=64, B=2, R_all=0.73, Gamma=16, W=8))


class TestCodeSpecValidation:
    def test_divisibility(self):
        with pytest.raises(ConfigError):
            spec(L=100, Gamma=16)

    def test_bad_width(self):
        with pytest.raises(ConfigError):
            spec(Gamma=4, W=5)

    def test_json_roundtrip(self):
        s = CodeSpec.from_json(
            '{"l": 256, "b": 4, "r_all": 0.8, "snr": 15.0,'
            ' "gamma": 4, "w": 2, "ensemble": "dct", "seed": 3}')
        assert s.L == 256 and s.W == 2 and s.ensemble is Ensemble.DCT

    def test_unknown_field_rejected(self):
        with pytest.raises(ConfigError):
            CodeSpec.from_dict({"l": 256, "b": 4, "r_all": 0.8, "snr": 15.0,
                                "gamma": 4, "w": 2, "typo": 1})

    def test_capacity_consistency(self):
        # R_all = 1.60 bits sits below capacity 2 bits at snr 15
        s = spec()
        assert s.R_all < 0.5 * math.log2(1 + s.snr)
