import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from chamber.overlap import RegionPair, gaussian_branch_overlap, ratio_overlap


class TestRatioOverlap:
    def test_canonical_extents_give_1e42(self):
        # (1e-12 / 1e2)^3 = 1e-42; the sometimes-quoted 1e-52 does not
        # follow from this arithmetic and is deliberately not asserted
        assert ratio_overlap(RegionPair(1e-12, 1e2)) == pytest.approx(1e-42, rel=1e-12)

    def test_coincident_extents(self):
        assert ratio_overlap(RegionPair(3.0, 3.0)) == 1.0

    def test_cube_of_ratio(self):
        assert ratio_overlap(RegionPair(1e-12, 1e-10)) == pytest.approx(1e-6, rel=1e-12)

    @given(b=st.floats(1e-15, 1e3), ratio=st.floats(1.0, 1e10), lam=st.floats(1e-6, 1e6))
    def test_scale_invariance(self, b, ratio, lam):
        base = ratio_overlap(RegionPair(b, b * ratio))
        scaled = ratio_overlap(RegionPair(b * lam, b * ratio * lam))
        assert scaled == pytest.approx(base, rel=1e-9)

    @given(b=st.floats(1e-12, 1.0), s1=st.floats(1.0, 1e3), s2=st.floats(1.0, 1e3))
    def test_monotone_in_spread_extent(self, b, s1, s2):
        lo, hi = sorted((s1, s2))
        assert ratio_overlap(RegionPair(b, hi)) <= ratio_overlap(RegionPair(b, lo))

    def test_invalid_regions_rejected(self):
        with pytest.raises(ValueError):
            RegionPair(0.0, 1.0)
        with pytest.raises(ValueError):
            RegionPair(2.0, 1.0)


class TestGaussianBranchOverlap:
    def test_identical_gaussians(self):
        assert gaussian_branch_overlap(1.0, 1.0, 0.0) == 1.0

    def test_bound_vs_spread_scaling(self):
        value = gaussian_branch_overlap(1e-12, 1e2, 0.0)
        assert value == pytest.approx(2.0**1.5 * (1e-12 / 1e2) ** 1.5, rel=1e-6)
        assert value == pytest.approx(2.8e-21, rel=0.02)

    def test_equal_widths_ten_sigma_apart(self):
        w = 0.3
        assert gaussian_branch_overlap(w, w, 10.0 * w) == pytest.approx(math.exp(-12.5), rel=1e-12)

    def test_quadrature_oracle(self):
        w1, w2, sep = 0.7, 1.9, 2.0
        xs = np.linspace(-12.0 * w2, 12.0 * w2 + sep, 241)
        dx = xs[1] - xs[0]
        gx, gy, gz = np.meshgrid(xs, xs, xs, indexing="ij")
        g1 = (2.0 * np.pi * w1**2) ** -0.75 * np.exp(-(gx**2 + gy**2 + gz**2) / (4.0 * w1**2))
        g2 = (2.0 * np.pi * w2**2) ** -0.75 * np.exp(
            -((gx - sep) ** 2 + gy**2 + gz**2) / (4.0 * w2**2)
        )
        quad = np.sum(g1 * g2) * dx**3
        assert gaussian_branch_overlap(w1, w2, sep) == pytest.approx(quad, rel=1e-6)

    @given(w1=st.floats(1e-3, 1e3), w2=st.floats(1e-3, 1e3), sep=st.floats(0.0, 1e3))
    def test_cauchy_schwarz_bound(self, w1, w2, sep):
        value = gaussian_branch_overlap(w1, w2, sep)
        assert value <= 1.0 + 1e-12
        if w1 == w2 and sep == 0.0:
            assert value == 1.0

    @given(w=st.floats(1e-2, 10.0), s1=st.floats(0.0, 50.0), s2=st.floats(0.0, 50.0))
    def test_monotone_in_separation(self, w, s1, s2):
        lo, hi = sorted((s1, s2))
        assert gaussian_branch_overlap(w, w, hi) <= gaussian_branch_overlap(w, w, lo)

    def test_exponent_three_halves_vs_three(self):
        # amplitude-level Gaussians fall off with exponent 3/2 in the
        # width ratio where the bare region ratio uses 3; both are tiny
        ratio = 1e-14
        assert gaussian_branch_overlap(ratio, 1.0, 0.0) == pytest.approx(
            2.0**1.5 * ratio**1.5, rel=1e-6
        )
        assert ratio_overlap(RegionPair(ratio, 1.0)) == pytest.approx(ratio**3, rel=1e-9)

    def test_invalid_inputs_rejected(self):
        with pytest.raises(ValueError):
            gaussian_branch_overlap(0.0, 1.0, 0.0)
        with pytest.raises(ValueError):
            gaussian_branch_overlap(1.0, 1.0, -1.0)
