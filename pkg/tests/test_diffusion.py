import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from tilecanvas.conditioning import ModelInput, build_bundle
from tilecanvas.diffusion import (
    DenoiserRequest,
    cfg_combine,
    ddim_step,
    make_schedule,
    oracle_denoiser,
    predict_x0,
    procedural_denoiser,
)
from tilecanvas.embedding import RREVector
from tilecanvas.errors import InvalidConfigError, NumericError, ShapeError
from tilecanvas.geometry import Rect


class TestSchedule:
    def test_first_and_monotone(self):
        s = make_schedule()
        assert s.alphas_bar[0] == pytest.approx(1 - 1e-4, abs=1e-15)
        assert (np.diff(s.alphas_bar) < 0).all()
        assert ((s.alphas_bar > 0) & (s.alphas_bar <= 1)).all()
        assert len(s) == 40 and s.step_indices[0] == 975 and s.step_indices[-1] == 0

    def test_last_value(self):
        # 40-digit product over the linear beta ramp
        assert make_schedule().alphas_bar[999] == pytest.approx(4.0358297653756833e-05, rel=1e-9)

    def test_full_subsample(self):
        s = make_schedule(50, 50)
        np.testing.assert_array_equal(s.step_indices, np.arange(50)[::-1])

    def test_final_step_lands_on_clean(self):
        s = make_schedule(1000, 40)
        assert s.pair(39) == (0, s.alphas_bar[0], 1.0)
        assert s.pair(0)[2] == s.alphas_bar[950]

    @pytest.mark.parametrize("args", [(10, 0), (10, 11), (0, 1)])
    def test_invalid(self, args):
        with pytest.raises(InvalidConfigError):
            make_schedule(*args)


class TestDDIM:
    def test_zero_eps(self):
        x = np.random.default_rng(0).standard_normal((2, 4, 3, 3))
        np.testing.assert_allclose(ddim_step(x, np.zeros_like(x), 0.3, 0.6), np.sqrt(0.6 / 0.3) * x, rtol=1e-14)

    def test_scalar(self):
        out = ddim_step(np.array([1.0]), np.array([0.5]), 0.25, 0.5)
        assert out[0] == pytest.approx(1.1553945172705742865, abs=1e-14)

    @settings(max_examples=50)
    @given(st.integers(0, 999), st.integers(0, 2**32 - 1))
    def test_inversion(self, t, seed):
        s = make_schedule()
        rng = np.random.default_rng(seed)
        x0, eps = rng.standard_normal((2, 1, 4, 5, 5))
        a = s.alphas_bar[t]
        x_t = np.sqrt(a) * x0 + np.sqrt(1 - a) * eps
        np.testing.assert_allclose(predict_x0(x_t, eps, a), x0, atol=1e-6)

    def test_errors(self):
        with pytest.raises(ShapeError):
            ddim_step(np.zeros(3), np.zeros(4), 0.5, 0.6)
        with pytest.raises(NumericError):
            ddim_step(np.array([np.inf]), np.zeros(1), 0.5, 0.6)


class TestCFG:
    def test_scale_one(self):
        c, u = np.random.default_rng(0).standard_normal((2, 5))
        np.testing.assert_allclose(cfg_combine(c, u, 1.0), c, atol=1e-15)

    def test_equal_branches(self):
        u = np.random.default_rng(0).standard_normal(5)
        np.testing.assert_array_equal(cfg_combine(u, u, 7.5), u)

    def test_arithmetic(self):
        assert cfg_combine(np.array([0.2]), np.array([0.1]))[0] == pytest.approx(0.85, abs=1e-12)

    @given(st.floats(-10, 10), st.integers(0, 1000))
    def test_affine(self, scale, seed):
        a, b = np.random.default_rng(seed).standard_normal((2, 8))
        np.testing.assert_allclose(cfg_combine(a, b, scale) - b, scale * (a - b), atol=1e-6)

    def test_shape(self):
        with pytest.raises(ShapeError):
            cfg_combine(np.zeros(2), np.zeros(3))


def _request(noisy, rect, t, rre_token=None, seed=0):
    F, C, h, w = noisy.shape
    mi = ModelInput(noisy, np.zeros_like(noisy), np.ones((F, 1, h, w), np.float32))
    tok = np.zeros(16) if rre_token is None else rre_token
    bundle = build_bundle(np.ones((4, 16)), RREVector(None, tok))
    return DenoiserRequest(mi, bundle, t, rect)


class TestOracle:
    def test_one_step_recovers_target(self):
        s = make_schedule()
        target = np.random.default_rng(0).standard_normal((2, 4, 12, 12)).astype(np.float32)
        rect = Rect(2, 4, 8, 8)
        x = np.random.default_rng(1).standard_normal((2, 4, 8, 8)).astype(np.float32)
        t, a, _ = s.pair(5)
        resp = oracle_denoiser(target, s)(_request(x, rect, t))
        np.testing.assert_allclose(predict_x0(x, resp.eps_cond, a), target[:, :, 4:12, 2:10], atol=1e-6)
        np.testing.assert_array_equal(cfg_combine(resp.eps_cond, resp.eps_uncond, 7.5), resp.eps_uncond)

    def test_full_loop(self):
        s = make_schedule()
        target = np.random.default_rng(0).standard_normal((1, 4, 8, 8)).astype(np.float32)
        den = oracle_denoiser(target, s)
        x = np.random.default_rng(1).standard_normal(target.shape).astype(np.float32)
        for i in range(len(s)):
            t, a, ap = s.pair(i)
            r = den(_request(x, Rect(0, 0, 8, 8), t))
            x = ddim_step(x, cfg_combine(r.eps_cond, r.eps_uncond), a, ap).astype(np.float32)
        assert np.abs(x - target).max() < 1e-4

    def test_outside(self):
        s = make_schedule()
        with pytest.raises(ShapeError):
            oracle_denoiser(np.zeros((1, 4, 8, 8)), s)(_request(np.zeros((1, 4, 8, 8), np.float32), Rect(4, 0, 8, 8), 0))


class TestProcedural:
    def test_deterministic(self):
        x = np.zeros((1, 4, 6, 6), np.float32)
        a = procedural_denoiser(3)(_request(x, Rect(0, 0, 6, 6), 500))
        b = procedural_denoiser(3)(_request(x, Rect(0, 0, 6, 6), 500))
        assert a.eps_cond.tobytes() == b.eps_cond.tobytes()
        assert a.eps_uncond.tobytes() == b.eps_uncond.tobytes()

    def test_rre_sensitivity(self):
        x = np.zeros((1, 4, 6, 6), np.float32)
        d = procedural_denoiser(3)
        a = d(_request(x, Rect(0, 0, 6, 6), 500, np.zeros(16)))
        b = d(_request(x, Rect(0, 0, 6, 6), 500, np.full(16, 0.01)))
        assert np.abs(a.eps_cond - b.eps_cond).max() > 0
        assert a.eps_uncond.tobytes() == b.eps_uncond.tobytes()

    def test_seed(self):
        x = np.zeros((1, 4, 6, 6), np.float32)
        a = procedural_denoiser(3)(_request(x, Rect(0, 0, 6, 6), 500))
        b = procedural_denoiser(4)(_request(x, Rect(0, 0, 6, 6), 500))
        assert np.abs(a.eps_uncond - b.eps_uncond).max() > 0
