import numpy as np
import pytest

from scvamp import (CodeSpec, Ensemble, derive_dimensions, g1_lmmse,
                    g1_lmmse_dense, g1_lmmse_roworth, g2_denoise,
                    sample_design)


def brute_force_posterior(p, gamma, B, amplitudes=None):
    """Independent enumeration of the one-hot posterior, no softmax tricks."""
    pm = np.asarray(p, dtype=float).reshape(-1, B)
    L = pm.shape[0]
    amp = np.ones(L) if amplitudes is None else np.asarray(amplitudes)
    out = np.empty_like(pm)
    for l in range(L):
        # weight of position j: exp(-gamma/2 ||p - c e_j||^2), constants cancel
        w = np.array([np.exp(-0.5 * gamma *
                             np.sum((pm[l] - amp[l] * np.eye(B)[j]) ** 2))
                      for j in range(B)])
        out[l] = amp[l] * w / w.sum()
    return out.ravel()


class TestG2:
    def test_matches_brute_force(self):
        rng = np.random.default_rng(0)
        p = rng.normal(0.2, 0.7, size=6 * 4)
        out = g2_denoise(p, 3.1, 4)
        np.testing.assert_allclose(out.estimate,
                                   brute_force_posterior(p, 3.1, 4), atol=1e-12)

    def test_matches_brute_force_amplitudes(self):
        rng = np.random.default_rng(1)
        p = rng.normal(0.0, 0.8, size=5 * 3)
        amp = rng.uniform(0.5, 2.0, size=5)
        out = g2_denoise(p, 2.4, 3, amplitudes=amp)
        np.testing.assert_allclose(
            out.estimate, brute_force_posterior(p, 2.4, 3, amp), atol=1e-12)

    @pytest.mark.parametrize("with_amp", [False, True])
    def test_divergence_finite_difference(self, with_amp):
        rng = np.random.default_rng(2)
        B, L = 4, 8
        p = rng.normal(0.1, 0.6, size=L * B)
        amp = rng.uniform(0.5, 1.5, size=L) if with_amp else None
        gamma = 1.7
        eps = 1e-6
        diag = np.empty(L * B)
        for i in range(L * B):
            d = np.zeros(L * B)
            d[i] = eps
            up = g2_denoise(p + d, gamma, B, amplitudes=amp).estimate[i]
            dn = g2_denoise(p - d, gamma, B, amplitudes=amp).estimate[i]
            diag[i] = (up - dn) / (2 * eps)
        out = g2_denoise(p, gamma, B, amplitudes=amp)
        assert out.divergence == pytest.approx(diag.mean(), abs=1e-6)

    def test_large_logits_stable(self):
        p = np.array([500.0, -500.0, 0.0, 0.0])
        out = g2_denoise(p, 10.0, 4)
        assert np.all(np.isfinite(out.estimate))
        assert out.estimate[0] == pytest.approx(1.0)

    def test_rejects_bad_input(self):
        with pytest.raises(ValueError):
            g2_denoise(np.zeros(4), 0.0, 4)
        with pytest.raises(ValueError):
            g2_denoise(np.array([np.nan, 0, 0, 0]), 1.0, 4)
        with pytest.raises(ValueError):
            g2_denoise(np.zeros(5), 1.0, 4)


def make_op(ensemble, seed=0):
    spec = CodeSpec(L=64, B=4, R_all=0.8, snr=15.0, Gamma=4, W=2,
                    ensemble=ensemble, seed=0)
    dims = derive_dimensions(spec)
    op = sample_design(spec, dims, 2, np.random.default_rng(seed))
    return spec, op


def direct_lmmse(a, p, gamma, y, snr):
    n = a.shape[1]
    prec = snr * a.T @ a + gamma * np.eye(n)
    est = np.linalg.solve(prec, snr * a.T @ y + gamma * p)
    div = gamma * np.trace(np.linalg.inv(prec)) / n
    return est, div


class TestG1:
    def test_dense_matches_direct_solve(self):
        spec, op = make_op(Ensemble.GAUSSIAN)
        rng = np.random.default_rng(3)
        p = rng.standard_normal(op.n)
        y = rng.standard_normal(op.m)
        out = g1_lmmse_dense(p, 0.9, y, op, spec.snr)
        est, div = direct_lmmse(op.materialize(), p, 0.9, y, spec.snr)
        np.testing.assert_allclose(out.estimate, est, atol=1e-8)
        assert out.divergence == pytest.approx(div, rel=1e-10)

    def test_roworth_matches_direct_solve(self):
        spec, op = make_op(Ensemble.DCT)
        rng = np.random.default_rng(4)
        p = rng.standard_normal(op.n)
        y = rng.standard_normal(op.m)
        out = g1_lmmse_roworth(p, 1.3, y, op, spec.snr, spec.B)
        est, div = direct_lmmse(op.materialize(), p, 1.3, y, spec.snr)
        np.testing.assert_allclose(out.estimate, est, atol=1e-8)
        assert out.divergence == pytest.approx(div, rel=1e-10)

    def test_dispatcher(self):
        rng = np.random.default_rng(5)
        for ens in (Ensemble.GAUSSIAN, Ensemble.DCT):
            spec, op = make_op(ens)
            p = rng.standard_normal(op.n)
            y = rng.standard_normal(op.m)
            out = g1_lmmse(p, 0.7, y, op, spec.snr, spec.B)
            est, div = direct_lmmse(op.materialize(), p, 0.7, y, spec.snr)
            np.testing.assert_allclose(out.estimate, est, atol=1e-8)
            assert out.divergence == pytest.approx(div, rel=1e-10)

    def test_noiseless_consistency(self):
        # with y = A x and huge snr the estimate lands near the row space
        # projection constraint: A est ~= y
        spec, op = make_op(Ensemble.DCT)
        rng = np.random.default_rng(6)
        x = rng.standard_normal(op.n)
        y = op.forward(x)
        out = g1_lmmse(np.zeros(op.n), 1.0, y, op, snr=1e10, B=spec.B)
        np.testing.assert_allclose(op.forward(out.estimate), y, atol=1e-4)

    def test_rejects_bad_input(self):
        spec, op = make_op(Ensemble.GAUSSIAN)
        with pytest.raises(ValueError):
            g1_lmmse_dense(np.zeros(op.n), -1.0, np.zeros(op.m), op, spec.snr)
        bad = np.full(op.n, np.inf)
        with pytest.raises(ValueError):
            g1_lmmse_dense(bad, 1.0, np.zeros(op.m), op, spec.snr)
