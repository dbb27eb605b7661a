import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import constant_matrix, random_matrix
from oracles import (
    lbp_code_ref,
    lbp_histogram_ref,
    wld_histogram_ref,
    wld_response_ref,
)
from texture_nilm import (
    DescriptorConfig,
    DescriptorHistogram,
    Matrix2D,
    gradient_orientation,
    lbp_code,
    lbp_histogram,
    wld_histogram,
    wld_response,
)
from texture_nilm.errors import InvalidConfig, OutOfInterior

EXAMPLE_CELLS = [[5, 9, 1, 3], [7, 4, 8, 2], [6, 4, 4, 9], [1, 2, 3, 4]]


class TestDescriptorConfig:
    def test_defaults(self):
        cfg = DescriptorConfig()
        assert cfg.orientation_bins * cfg.excitation_bins == 256

    @pytest.mark.parametrize(
        "kwargs",
        [
            {"patch_size": 4},
            {"patch_size": 1},
            {"patch_size": 5},
            {"neighbor_count": 4},
            {"orientation_bins": 7},
            {"orientation_bins": 16},
            {"excitation_bins": 0},
            {"epsilon": 0.0},
        ],
    )
    def test_rejects_bad_values(self, kwargs):
        with pytest.raises(InvalidConfig):
            DescriptorConfig(**kwargs)

    def test_alternative_joint_shapes_allowed(self):
        cfg = DescriptorConfig(orientation_bins=16, excitation_bins=16)
        assert cfg.orientation_bins == 16


class TestDescriptorHistogram:
    def test_requires_256_bins(self):
        with pytest.raises(ValueError):
            DescriptorHistogram(np.zeros(255), "lbp")

    def test_rejects_negative_bins(self):
        bins = np.zeros(256)
        bins[3] = -1
        with pytest.raises(ValueError):
            DescriptorHistogram(bins, "wld")

    def test_total(self):
        bins = np.zeros(256)
        bins[10] = 4
        bins[200] = 2
        assert DescriptorHistogram(bins, "lbp").total == 6


class TestLbpCode:
    def test_constant_neighborhood_gives_all_ones(self):
        assert lbp_code(constant_matrix(7, 5), 2, 2) == 255

    def test_dominant_center_gives_zero(self):
        cells = np.zeros((3, 3), dtype=int)
        cells[1, 1] = 255
        assert lbp_code(Matrix2D(cells), 1, 1) == 0

    def test_worked_example(self):
        # oracle-computed before the build: neighbors (5,9,1,8,4,4,6,7) vs
        # center 4 give bits 1,1,0,1,1,1,1,1 -> 251
        m = Matrix2D(EXAMPLE_CELLS)
        assert lbp_code(m, 1, 1) == 251
        assert lbp_code(m, 1, 1) == lbp_code_ref(EXAMPLE_CELLS, 1, 1)

    @pytest.mark.parametrize("r,c", [(0, 0), (0, 1), (3, 3), (1, 0), (2, 3)])
    def test_border_cells_rejected(self, r, c):
        with pytest.raises(OutOfInterior):
            lbp_code(Matrix2D(EXAMPLE_CELLS), r, c)

    @settings(max_examples=60)
    @given(st.integers(min_value=0, max_value=12345), st.integers(0, 55))
    def test_invariant_under_constant_shift(self, seed, shift):
        rng = np.random.default_rng(seed)
        base = rng.integers(0, 200, size=(5, 5))
        shifted = Matrix2D(base + shift)
        original = Matrix2D(base)
        for r in range(1, 4):
            for c in range(1, 4):
                assert lbp_code(original, r, c) == lbp_code(shifted, r, c)

    @settings(max_examples=40)
    @given(st.integers(min_value=0, max_value=99999))
    def test_code_range_and_reference(self, seed):
        m = random_matrix(np.random.default_rng(seed), 5, 5)
        cells = m.cells.tolist()
        for r in range(1, 4):
            for c in range(1, 4):
                code = lbp_code(m, r, c)
                assert 0 <= code <= 255
                assert code == lbp_code_ref(cells, r, c)


class TestLbpHistogram:
    def test_constant_matrix_masses_bin_255(self):
        h = lbp_histogram(constant_matrix(80, 4))
        assert h.bins[255] == 4
        assert h.total == 4
        assert h.bins.sum() == h.bins[255]

    def test_three_by_three_has_single_vote(self):
        h = lbp_histogram(random_matrix(np.random.default_rng(0), 3, 3))
        assert h.total == 1

    def test_matches_reference_on_random_matrices(self):
        rng = np.random.default_rng(42)
        for _ in range(25):
            m = random_matrix(rng, 8, 8)
            assert lbp_histogram(m).bins.tolist() == lbp_histogram_ref(m.cells.tolist())

    @settings(max_examples=30)
    @given(st.integers(0, 99999), st.integers(3, 12), st.integers(3, 12))
    def test_total_equals_interior_count(self, seed, rows, cols):
        m = random_matrix(np.random.default_rng(seed), rows, cols)
        assert lbp_histogram(m).total == (rows - 2) * (cols - 2)


class TestWldResponse:
    def test_constant_neighborhood(self, descriptor_cfg):
        response = wld_response(constant_matrix(42, 3), 1, 1, descriptor_cfg)
        assert response.excitation == 0.0
        assert response.orientation == 0.0

    def test_uniformly_brighter_ring(self, descriptor_cfg):
        cells = np.full((3, 3), 2, dtype=int)
        cells[1, 1] = 1
        response = wld_response(Matrix2D(cells), 1, 1, descriptor_cfg)
        assert response.excitation == math.atan(8.0)
        assert response.excitation == pytest.approx(1.4464, abs=1e-4)

    def test_pure_vertical_difference(self, descriptor_cfg):
        # bottom - top = 3, left - right = 0
        cells = [[0, 1, 0], [2, 5, 2], [0, 4, 0]]
        response = wld_response(Matrix2D(cells), 1, 1, descriptor_cfg)
        assert response.orientation == math.pi / 2.0

    def test_epsilon_guards_zero_center(self):
        cells = np.zeros((3, 3), dtype=int)
        cells[0, 1] = 10
        cfg = DescriptorConfig(epsilon=1.0)
        response = wld_response(Matrix2D(cells), 1, 1, cfg)
        assert response.excitation == math.atan(10.0)

    def test_border_rejected(self, descriptor_cfg):
        with pytest.raises(OutOfInterior):
            wld_response(constant_matrix(5, 3), 0, 1, descriptor_cfg)

    @settings(max_examples=60)
    @given(st.integers(0, 99999))
    def test_matches_reference(self, seed):
        cfg = DescriptorConfig()
        m = random_matrix(np.random.default_rng(seed), 5, 5)
        cells = m.cells.tolist()
        for r in range(1, 4):
            for c in range(1, 4):
                got = wld_response(m, r, c, cfg)
                exc, ori = wld_response_ref(cells, r, c)
                assert got.excitation == exc
                assert got.orientation == ori
                assert -math.pi / 2 <= got.excitation <= math.pi / 2
                assert 0.0 <= got.orientation < 2.0 * math.pi

    @settings(max_examples=80)
    @given(st.integers(0, 9999), st.integers(0, 7), st.integers(1, 30))
    def test_excitation_strictly_increases_with_any_neighbor(self, seed, which, bump):
        rng = np.random.default_rng(seed)
        base = rng.integers(0, 200, size=(3, 3))
        ring = [(-1, -1), (-1, 0), (-1, 1), (0, 1), (1, 1), (1, 0), (1, -1), (0, -1)]
        bumped = base.copy()
        dr, dc = ring[which]
        bumped[1 + dr, 1 + dc] += bump
        cfg = DescriptorConfig()
        low = wld_response(Matrix2D(base), 1, 1, cfg).excitation
        high = wld_response(Matrix2D(bumped), 1, 1, cfg).excitation
        assert high > low


class TestGradientOrientation:
    def test_zero_vector_convention(self):
        assert gradient_orientation(0.0, 0.0) == 0.0

    def test_quadrants(self):
        assert gradient_orientation(0.0, 1.0) == 0.0
        assert gradient_orientation(1.0, 0.0) == math.pi / 2
        assert gradient_orientation(0.0, -1.0) == math.pi
        assert gradient_orientation(-1.0, 0.0) == 1.5 * math.pi

    @settings(max_examples=100)
    @given(
        st.integers(min_value=-255, max_value=255),
        st.integers(min_value=-255, max_value=255),
    )
    def test_antipode_shifts_by_pi(self, v, h):
        if v == 0 and h == 0:
            return
        theta = gradient_orientation(v, h)
        anti = gradient_orientation(-v, -h)
        assert 0.0 <= theta < 2.0 * math.pi
        diff = abs((anti - theta) % (2.0 * math.pi))
        assert min(diff, 2.0 * math.pi - diff) == pytest.approx(math.pi, abs=1e-12)


class TestWldHistogram:
    def test_constant_matrix_masses_center_excitation_bin(self, descriptor_cfg):
        # orientation bin 0, excitation bin Mx/2 = 16 -> flat index 16
        for size in (3, 4, 8):
            h = wld_histogram(constant_matrix(100, size), descriptor_cfg)
            assert h.bins[16] == (size - 2) ** 2
            assert h.total == (size - 2) ** 2

    def test_three_by_three_has_single_vote(self, descriptor_cfg):
        h = wld_histogram(random_matrix(np.random.default_rng(1), 3, 3), descriptor_cfg)
        assert h.total == 1

    def test_matches_reference_on_random_matrices(self, descriptor_cfg):
        rng = np.random.default_rng(43)
        for _ in range(25):
            m = random_matrix(rng, 8, 8)
            assert (
                wld_histogram(m, descriptor_cfg).bins.tolist()
                == wld_histogram_ref(m.cells.tolist())
            )

    def test_alternative_binning_matches_reference(self):
        cfg = DescriptorConfig(orientation_bins=4, excitation_bins=64)
        rng = np.random.default_rng(44)
        for _ in range(10):
            m = random_matrix(rng, 8, 8)
            assert (
                wld_histogram(m, cfg).bins.tolist()
                == wld_histogram_ref(m.cells.tolist(), 4, 64)
            )

    @settings(max_examples=30)
    @given(st.integers(0, 99999), st.integers(3, 12), st.integers(3, 12))
    def test_total_equals_interior_count(self, seed, rows, cols):
        m = random_matrix(np.random.default_rng(seed), rows, cols)
        h = wld_histogram(m, DescriptorConfig())
        assert h.total == (rows - 2) * (cols - 2)
