import numpy as np
import pytest

from wordspot.features import (
    BOTTOM_DCT,
    COG_INDEX,
    DENSITY_INDEX,
    FEATURE_DIM,
    LOWER_GRID,
    RATIO_INDEX,
    TOP_DCT,
    UPPER_GRID,
    VERTICAL_DCT,
    FeatureVector,
    ProfileSignal,
    bottom_profile,
    center_of_gravity,
    dct_ortho,
    density,
    extract_features,
    grid_features,
    profile_dct_features,
    top_profile,
    vertical_profile,
)
from wordspot.imaging import BinaryImage

import reference
from helpers import random_binary


def ink_image(rows: list[str]) -> BinaryImage:
    return BinaryImage(np.array([[c == "#" for c in row] for row in rows]))


class TestFeatureVectorType:
    def test_length_enforced(self):
        with pytest.raises(ValueError):
            FeatureVector(np.zeros(92))

    def test_finiteness_enforced(self):
        values = np.zeros(FEATURE_DIM)
        values[5] = np.nan
        with pytest.raises(ValueError):
            FeatureVector(values)

    def test_layout_spans_dimension(self):
        spans = [1, 1, 1]
        for sl in (VERTICAL_DCT, TOP_DCT, BOTTOM_DCT, UPPER_GRID, LOWER_GRID):
            spans.append(sl.stop - sl.start)
        assert sum(spans) == FEATURE_DIM == 93


class TestDensity:
    def test_direct_arithmetic(self):
        ink = np.zeros((5, 10), dtype=bool)
        ink.ravel()[:25] = True
        assert density(BinaryImage(ink)) == 50.0

    def test_all_ink(self):
        assert density(BinaryImage(np.ones((4, 4), dtype=bool))) == 100.0

    def test_blank(self):
        assert density(BinaryImage(np.zeros((4, 4), dtype=bool))) == 0.0


class TestCenterOfGravity:
    def test_two_by_two(self):
        img = BinaryImage(np.ones((2, 2), dtype=bool))
        assert center_of_gravity(img) == pytest.approx(np.sqrt(0.125), abs=1e-12)

    def test_origin_pixel(self):
        ink = np.zeros((3, 3), dtype=bool)
        ink[0, 0] = True
        assert center_of_gravity(BinaryImage(ink)) == 0.0

    def test_blank_raises(self):
        with pytest.raises(ValueError):
            center_of_gravity(BinaryImage(np.zeros((3, 3), dtype=bool)))

    def test_matches_naive(self):
        rng = np.random.default_rng(41)
        for _ in range(10):
            img = random_binary(rng, 9, 13)
            if img.ink_count == 0:
                continue
            m00 = reference.moment_reference(img.ink, 0, 0)
            cx = reference.moment_reference(img.ink, 1, 0) / m00
            cy = reference.moment_reference(img.ink, 0, 1) / m00
            expected = np.sqrt(cx * cx + cy * cy)
            assert center_of_gravity(img) == pytest.approx(expected, abs=1e-12)

    def test_within_bounds(self):
        rng = np.random.default_rng(42)
        img = random_binary(rng, 8, 8, p=0.6)
        assert 0.0 <= center_of_gravity(img) <= np.sqrt(2)


class TestShapeProfiles:
    def test_top_profile_fill_count(self):
        ink = np.zeros((8, 1), dtype=bool)
        ink[3, 0] = True
        ink[5, 0] = True
        assert top_profile(BinaryImage(ink)).samples.tolist() == [5.0]

    def test_top_profile_all_ink(self):
        img = BinaryImage(np.ones((6, 4), dtype=bool))
        assert top_profile(img).samples.tolist() == [6.0] * 4

    def test_bottom_profile_fill_count(self):
        ink = np.zeros((8, 1), dtype=bool)
        ink[1, 0] = True
        ink[3, 0] = True
        assert bottom_profile(BinaryImage(ink)).samples.tolist() == [4.0]

    def test_empty_column_zero(self):
        ink = np.zeros((5, 2), dtype=bool)
        ink[2, 0] = True
        assert top_profile(BinaryImage(ink)).samples.tolist() == [3.0, 0.0]
        assert bottom_profile(BinaryImage(ink)).samples.tolist() == [3.0, 0.0]

    def test_profiles_match_fill_oracle(self):
        rng = np.random.default_rng(43)
        for _ in range(10):
            img = random_binary(rng, 11, 9)
            assert np.array_equal(
                top_profile(img).samples, reference.top_profile_reference(img.ink)
            )
            assert np.array_equal(
                bottom_profile(img).samples,
                reference.bottom_profile_reference(img.ink),
            )

    def test_vertical_flip_swaps_profiles(self):
        rng = np.random.default_rng(44)
        img = random_binary(rng, 10, 7)
        flipped = BinaryImage(img.ink[::-1, :])
        assert top_profile(img) == bottom_profile(flipped)
        assert bottom_profile(img) == top_profile(flipped)

    def test_vertical_profile_counts(self):
        rng = np.random.default_rng(45)
        img = random_binary(rng, 6, 8)
        assert np.array_equal(vertical_profile(img).samples, img.ink.sum(axis=0))


class TestProfileDct:
    def test_constant_profile_dc_only(self):
        prof = ProfileSignal(np.full(40, 6.0), 40)
        coeffs = profile_dct_features(prof, word_height=12, n_coeffs=20)
        assert coeffs[0] == pytest.approx(0.5 * 16.0, abs=1e-9)
        assert np.all(np.abs(coeffs[1:]) <= 1e-9)

    def test_zero_profile(self):
        prof = ProfileSignal(np.zeros(30), 30)
        coeffs = profile_dct_features(prof, word_height=10, n_coeffs=25)
        assert np.all(coeffs == 0)

    def test_dct_matches_naive_definition(self):
        rng = np.random.default_rng(46)
        signal = rng.normal(size=256)
        expected = reference.dct_ii_ortho_reference(signal)
        assert np.allclose(dct_ortho(signal), expected, atol=1e-9)

    def test_linearity(self):
        rng = np.random.default_rng(47)
        a = rng.random(33) * 5
        b = rng.random(33) * 5
        fa = profile_dct_features(ProfileSignal(a, 33), 9, 25)
        fb = profile_dct_features(ProfileSignal(b, 33), 9, 25)
        fab = profile_dct_features(ProfileSignal(2 * a + 3 * b, 33), 9, 25)
        assert np.allclose(fab, 2 * fa + 3 * fb, atol=1e-9)

    def test_single_sample_profile(self):
        prof = ProfileSignal(np.array([4.0]), 1)
        coeffs = profile_dct_features(prof, word_height=8, n_coeffs=20)
        assert coeffs[0] == pytest.approx(0.5 * 16.0, abs=1e-9)
        assert np.all(np.abs(coeffs[1:]) <= 1e-9)

    def test_coefficient_count_validated(self):
        prof = ProfileSignal(np.ones(5), 5)
        with pytest.raises(ValueError):
            profile_dct_features(prof, 5, 21)


class TestGridFeatures:
    def test_all_ink(self):
        img = BinaryImage(np.ones((10, 30), dtype=bool))
        assert grid_features(img, "upper").tolist() == [1.0] * 10
        assert grid_features(img, "lower").tolist() == [1.0] * 10

    def test_blank(self):
        img = BinaryImage(np.zeros((10, 30), dtype=bool))
        assert grid_features(img, "upper").tolist() == [0.0] * 10

    def test_top_left_quadrant(self):
        ink = np.zeros((10, 20), dtype=bool)
        ink[:5, :10] = True
        assert grid_features(BinaryImage(ink), "upper").tolist() == [1.0] * 5 + [0.0] * 5
        assert grid_features(BinaryImage(ink), "lower").tolist() == [0.0] * 10

    def test_narrow_word_leaves_empty_cells_zero(self):
        img = BinaryImage(np.ones((6, 4), dtype=bool))
        bits = grid_features(img, "upper")
        assert bits.sum() == 4  # only 4 cells have any columns

    def test_height_one_rejected(self):
        with pytest.raises(ValueError):
            grid_features(BinaryImage(np.ones((1, 10), dtype=bool)), "upper")

    def test_part_validated(self):
        with pytest.raises(ValueError):
            grid_features(BinaryImage(np.ones((4, 4), dtype=bool)), "middle")


class TestExtractFeatures:
    def word(self, seed=48, h=14, w=30):
        rng = np.random.default_rng(seed)
        ink = rng.random((h, w)) < 0.45
        ink[0, 0] = True  # keep the crop tight at the corner
        ink[-1, -1] = True
        return BinaryImage(ink)

    def test_layout_and_ranges(self):
        fv = extract_features(self.word())
        values = fv.values
        assert values.shape == (FEATURE_DIM,)
        assert values[RATIO_INDEX] > 0
        assert 0.0 <= values[DENSITY_INDEX] <= 100.0
        assert 0.0 <= values[COG_INDEX] <= np.sqrt(2)
        assert set(np.unique(values[UPPER_GRID])) <= {0.0, 1.0}
        assert set(np.unique(values[LOWER_GRID])) <= {0.0, 1.0}

    def test_deterministic(self):
        assert extract_features(self.word()) == extract_features(self.word())

    def test_sections_match_components(self):
        word = self.word(seed=49)
        fv = extract_features(word).values
        assert fv[DENSITY_INDEX] == density(word)
        assert fv[COG_INDEX] == center_of_gravity(word)
        assert np.array_equal(
            fv[VERTICAL_DCT], profile_dct_features(vertical_profile(word), word.height, 20)
        )
        assert np.array_equal(
            fv[TOP_DCT], profile_dct_features(top_profile(word), word.height, 25)
        )
        assert np.array_equal(
            fv[BOTTOM_DCT], profile_dct_features(bottom_profile(word), word.height, 25)
        )

    def test_blank_word_rejected(self):
        with pytest.raises(ValueError):
            extract_features(BinaryImage(np.zeros((5, 5), dtype=bool)))

    def test_mirror_reverses_grid_bits(self):
        # cell boundaries mirror exactly when the width divides into tenths
        rng = np.random.default_rng(50)
        ink = rng.random((12, 40)) < 0.4
        ink[0, 0] = ink[-1, -1] = ink[0, -1] = ink[-1, 0] = True
        word = BinaryImage(ink)
        mirrored = BinaryImage(ink[:, ::-1])
        fv = extract_features(word).values
        fm = extract_features(mirrored).values
        assert fm[RATIO_INDEX] == fv[RATIO_INDEX]
        assert fm[DENSITY_INDEX] == fv[DENSITY_INDEX]
        assert np.array_equal(fm[UPPER_GRID], fv[UPPER_GRID][::-1])
        assert np.array_equal(fm[LOWER_GRID], fv[LOWER_GRID][::-1])
