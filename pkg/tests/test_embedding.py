import itertools

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from tilecanvas.embedding import RelativeRegion, default_projection, relative_region, rre_tokens, sinusoidal_embed
from tilecanvas.errors import InvalidConfigError, ShapeError
from tilecanvas.geometry import Rect


class TestSinusoidal:
    @pytest.mark.parametrize("d", [2, 4, 64, 128])
    def test_zero(self, d):
        np.testing.assert_array_equal(sinusoidal_embed(0.0, d), np.tile([0.0, 1.0], d // 2))

    def test_v1_d4(self):
        # frozen from a 40-digit evaluation
        expected = [0.8414709848078965, 0.5403023058681398, 0.009999833334166665, 0.9999500004166653]
        np.testing.assert_allclose(sinusoidal_embed(1.0, 4), expected, rtol=0, atol=1e-15)

    @given(st.floats(-1e5, 1e5), st.sampled_from([2, 8, 64]))
    def test_pythagorean(self, v, d):
        e = sinusoidal_embed(v, d)
        np.testing.assert_allclose(e[0::2] ** 2 + e[1::2] ** 2, 1.0, atol=1e-12)

    def test_odd_width(self):
        with pytest.raises(InvalidConfigError):
            sinusoidal_embed(1.0, 5)


class TestRelativeRegion:
    def test_shift_right(self):
        rr = relative_region(Rect(0, 0, 512, 512), Rect(384, 0, 512, 512))
        assert (rr.w_offset, rr.h_offset) == (384, 0)

    def test_identity(self):
        a = Rect(16, 32, 512, 256)
        rr = relative_region(a, a)
        assert (rr.h_offset, rr.w_offset) == (0, 0)
        assert (rr.h_anchor, rr.w_anchor, rr.h_target, rr.w_target) == (256, 512, 256, 512)

    def test_signed(self):
        rr = relative_region(Rect(0, 0, 512, 512), Rect(-384, 256, 512, 512))
        assert (rr.w_offset, rr.h_offset) == (-384, 256)

    def test_half_integer_centers(self):
        rr = relative_region(Rect(0, 0, 3, 3), Rect(0, 0, 4, 4))
        assert (rr.w_offset, rr.h_offset) == (0.5, 0.5)

    @given(*[st.integers(-500, 500)] * 2, *[st.integers(1, 600)] * 2,
           *[st.integers(-500, 500)] * 2, *[st.integers(1, 600)] * 2)
    def test_antisymmetric(self, ax, ay, aw, ah, bx, by, bw, bh):
        a, b = Rect(ax, ay, aw, ah), Rect(bx, by, bw, bh)
        ab, ba = relative_region(a, b), relative_region(b, a)
        assert ab.h_offset == -ba.h_offset and ab.w_offset == -ba.w_offset


class TestRRETokens:
    def test_offset_blocks_for_zero_offset(self):
        rr = relative_region(Rect(0, 0, 512, 512), Rect(0, 0, 512, 512))
        vec = rre_tokens(rr, 8, np.eye(48))
        np.testing.assert_array_equal(vec.raw, vec.token)
        np.testing.assert_array_equal(vec.raw[32:], np.tile([0.0, 1.0], 8))

    def test_order(self):
        rr = RelativeRegion(1, 2, 3, 4, 5, 6)
        vec = rre_tokens(rr, 4, np.eye(24))
        for i, v in enumerate(rr.scalars()):
            np.testing.assert_array_equal(vec.raw[4 * i : 4 * i + 4], sinusoidal_embed(v, 4))

    def test_zero_projection(self):
        rr = RelativeRegion(700, 900, 512, 512, -12, 300)
        assert not rre_tokens(rr, 64, np.zeros((768, 384))).token.any()

    def test_distinct_offsets(self):
        a = rre_tokens(RelativeRegion(512, 512, 512, 512, 0, 0), 64, np.eye(384))
        b = rre_tokens(RelativeRegion(512, 512, 512, 512, 0, 384), 64, np.eye(384))
        assert np.linalg.norm(a.raw - b.raw) > 0

    def test_dimension_mismatch(self):
        with pytest.raises(ShapeError):
            rre_tokens(RelativeRegion(1, 1, 1, 1, 0, 0), 64, np.eye(100))

    def test_defaults_and_determinism(self):
        rr = RelativeRegion(1024, 768, 512, 512, 128, -256)
        a, b = rre_tokens(rr), rre_tokens(rr)
        assert a.raw.shape == (384,) and a.token.shape == (768,)
        assert a.token.tobytes() == b.token.tobytes()
        np.testing.assert_array_equal(default_projection(), default_projection())

    def test_injective_on_offset_grid(self):
        offsets = range(-1024, 1025, 128)
        raws = np.array([rre_tokens(RelativeRegion(512, 512, 512, 512, h, w), 64, np.eye(384)).raw
                         for h, w in itertools.product(offsets, offsets)])
        d2 = ((raws[:, None, :] - raws[None, :, :]) ** 2).sum(-1)
        np.fill_diagonal(d2, np.inf)
        assert np.sqrt(d2.min()) > 1e-6
