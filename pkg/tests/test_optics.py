import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from dgp1opt import instance, mvm, optics
from dgp1opt.errors import AllZeroWarning, FrameOverflow, ShapeMismatch, SizeLimit, ValueOutOfRange
from dgp1opt.instance import AugmentedInstance
from dgp1opt.optics import OpticalConfig

from conftest import brute_force_signs

PAPER_M2 = [[-1, -1], [1, -1], [-1, 1], [1, 1]]


def test_config_defaults_and_checks():
    cfg = OpticalConfig()
    assert (cfg.width, cfg.height, cfg.gray_levels, cfg.frame_rate, cfg.parallel_vectors) == (1920, 1080, 256, 60, 1080)
    assert cfg.noise_sigma == 0 and cfg.i0 == 1
    for bad in ({"gray_levels": 1}, {"height": 0}, {"frame_rate": 0}, {"noise_sigma": -1}, {"i0": 0}):
        with pytest.raises(ValueError):
            OpticalConfig(**bad)


def test_normalize():
    y, scale = optics.normalize_distances([4, 2, 3, 1])
    assert y.tolist() == [1, 0.5, 0.75, 0.25] and scale == 4
    y, scale = optics.normalize_distances([1])
    assert y.tolist() == [1] and scale == 1
    with pytest.warns(AllZeroWarning):
        y, scale = optics.normalize_distances([0, 0])
    assert y.tolist() == [0, 0] and scale == 1
    with pytest.raises(ValueOutOfRange):
        optics.normalize_distances([1, -1])


@pytest.mark.parametrize("seed", range(15))
def test_normalized_feasibility_matches(seed):
    inst = instance.generate_feasible(7, seed, 8.0) if seed % 2 else instance.generate_random(7, seed, 8.0)
    y = instance.augment(inst).y
    y_norm, scale = optics.normalize_distances(y)
    expected = bool(brute_force_signs(y))
    # the zero set is scale invariant up to rounding of the division
    assert bool(mvm.feasible_rows(y_norm, 8 * np.finfo(float).eps)) == expected
    assert np.allclose(scale * mvm.multiply(y_norm).values, mvm.multiply(y).values, atol=1e-12 * scale)


def test_vector_mask_endpoints_and_levels():
    mask = optics.encode_vector_mask([1.0, 0.0, 0.5], rows=3)
    assert mask.shape == (3, 3)
    assert mask.phases[0, 0] == 0.0
    assert mask.phases[0, 1] == pytest.approx(np.pi / 2, abs=np.pi / 255)
    assert np.all(mask.phases == mask.phases[0])
    assert np.allclose(mask.phases, np.pi * mask.levels / 255, rtol=0, atol=1e-15)
    with pytest.raises(ValueOutOfRange):
        optics.encode_vector_mask([1.2], rows=1)


@pytest.mark.parametrize("levels", [2, 3, 16, 256, 1024])
def test_quantization_error_sweep(levels):
    v = np.linspace(0, 1, 100001)
    mask = optics.encode_vector_mask(v, rows=1, gray_levels=levels)
    err = np.abs(mask.transmission()[0] - v).max()
    assert err <= optics.element_error_bound(levels) == math.pi / (levels - 1)


def test_matrix_mask():
    m = optics.encode_matrix_mask(2, 1, 4)
    assert m.transmission().tolist() == PAPER_M2
    assert optics.encode_matrix_mask(1, 1, 2).transmission().tolist() == [[-1], [1]]
    tile = optics.encode_matrix_mask(9, 100, 300)
    assert np.array_equal(tile.transmission(), mvm.sign_block(9, 100, 300))
    assert set(np.unique(tile.levels)) <= {0, 255}
    with pytest.raises(FrameOverflow):
        optics.encode_matrix_mask(4, 1, 16, OpticalConfig(height=8))
    with pytest.raises(FrameOverflow):
        optics.encode_matrix_mask(4, 1, 4, OpticalConfig(width=3))


def test_projection():
    amp = np.random.default_rng(1).uniform(-1, 1, (4, 3))
    zero = optics.PhaseMask(np.zeros((4, 3)))
    assert np.array_equal(optics.project_amplitude(zero, amp), amp)
    half = optics.PhaseMask(np.full((4, 3), np.pi / 2))
    assert np.allclose(optics.project_amplitude(half, amp), 0, atol=1e-16)
    phi = optics.PhaseMask(np.random.default_rng(2).uniform(0, np.pi, (4, 3)))
    alpha = optics.PhaseMask(np.random.default_rng(3).uniform(0, np.pi, (4, 3)))
    twice = optics.project_amplitude(alpha, optics.project_amplitude(phi, np.ones((4, 3))))
    assert np.allclose(twice, np.cos(phi.phases) * np.cos(alpha.phases), rtol=1e-15)
    with pytest.raises(ShapeMismatch):
        optics.project_amplitude(phi, np.ones((3, 4)))


def test_accumulate():
    assert optics.accumulate_rows([[1.0, 2.0, 4.0]]).tolist() == [7.0]
    assert optics.accumulate_rows(np.zeros((3, 5))).tolist() == [0, 0, 0]
    # left-to-right: (1e16 + 1) + -1e16 loses the 1, pairwise summing would not matter here
    assert optics.accumulate_rows([[1e16, 1.0, -1e16]]).tolist() == [0.0]


def test_accumulate_matches_mvm(appendix_a):
    y_norm, _ = optics.normalize_distances(instance.augment(appendix_a).y)
    slm1 = optics.encode_vector_mask(y_norm, 16, None)
    slm2 = optics.encode_matrix_mask(4, 1, 16)
    V = optics.accumulate_rows(optics.project_amplitude(slm2, optics.project_amplitude(slm1, 1.0)))
    assert np.array_equal(V, mvm.multiply(slm1.transmission()[0]).values)
    assert np.allclose(V, mvm.multiply(y_norm).values, atol=1e-15)


def test_detect_and_recover():
    cfg = OpticalConfig()
    frame = optics.detect([2.0, 0.0, 0.0, -2.0], cfg)
    assert frame.intensities.tolist() == [4, 0, 0, 4] and (frame.lo, frame.hi) == (1, 4)
    assert optics.recover_magnitudes(frame, cfg).tolist() == [2, 0, 0, 2]
    assert optics.detect([0.0], cfg).intensities.tolist() == [0.0]
    # n=2 paper case r = (-2d, 0, 0, 2d), d normalized to 1
    V = mvm.multiply([1.0, 1.0]).values
    assert optics.detect(V, cfg).intensities.tolist() == [4, 0, 0, 4]
    bright = OpticalConfig(i0=3.0)
    assert optics.recover_magnitudes(optics.detect(V, bright), bright).tolist() == [2, 0, 0, 2]


@given(st.lists(st.floats(-1e3, 1e3), min_size=1, max_size=50))
def test_detect_sign_loss_and_round_trip(values):
    cfg = OpticalConfig()
    V = np.array(values)
    a, b = optics.detect(V, cfg), optics.detect(-V, cfg)
    assert np.array_equal(a.intensities, b.intensities)
    back = optics.recover_magnitudes(a, cfg)
    # V**2 underflows below ~1e-154
    assert np.allclose(back, np.abs(V), rtol=2 ** -52, atol=1e-154)


def test_detect_noise_is_seeded_and_clamped():
    cfg = OpticalConfig(noise_sigma=0.5)
    V = np.zeros(1000)
    a = optics.detect(V, cfg, seed=3).intensities
    assert np.array_equal(a, optics.detect(V, cfg, seed=3).intensities)
    assert not np.array_equal(a, optics.detect(V, cfg, seed=4).intensities)
    assert a.min() == 0.0 and (a > 0).any()
    noisy = optics.detect(-V + 1.0, cfg, seed=3).intensities
    assert abs(noisy.mean() - 1.0) < 0.1


def test_solve_optical_appendix(appendix_a):
    res = optics.solve_optical(appendix_a)
    assert res.feasible and res.frames_used == 1
    assert res.candidate_rows == mvm.feasible_rows(instance.augment(appendix_a).y) == [7, 10]
    assert res.detect_eps == pytest.approx((4 * math.pi / 255) ** 2)
    assert res.scale == 4


def test_solve_optical_small_cases():
    res = optics.solve_optical(AugmentedInstance(1, (1.0,)))
    assert not res.feasible and res.frames_used == 1
    chain = AugmentedInstance.from_chain(np.random.default_rng(0).uniform(0, 1, 12))
    assert optics.solve_optical(chain).frames_used == math.ceil(4096 / 1080) == 4
    with pytest.raises(FrameOverflow):
        optics.solve_optical(chain, OpticalConfig(width=10))
    with pytest.raises(SizeLimit):
        optics.solve_optical(AugmentedInstance.from_chain([1.0] * 31))


@pytest.mark.parametrize("n", [3, 6, 9])
def test_noiseless_fidelity_on_stored_values(n):
    """sqrt(I) equals |M y_eff| bit for bit, y_eff being the cos of the stored phases."""
    rng = np.random.default_rng(n)
    for levels in (None, 256, 16):
        cfg = OpticalConfig(gray_levels=levels, height=64)
        y_norm, _ = optics.normalize_distances(rng.uniform(0, 1, n))
        y_eff = optics.encode_vector_mask(y_norm, 1, levels).transmission()[0]
        r = mvm.multiply(y_eff).values
        res = optics.solve_optical(AugmentedInstance.from_chain(y_norm), cfg, keep_frames=True)
        mags = np.concatenate([optics.recover_magnitudes(f, cfg) for f in res.frames])
        assert np.array_equal(mags, np.abs(r))
        # quantization error per row stays inside the triangle-inequality bound
        assert np.abs(np.abs(r) - np.abs(mvm.multiply(y_norm).values)).max() <= optics.row_error_bound(n, levels)


@settings(max_examples=40, deadline=None)
@given(st.integers(2, 10), st.integers(0, 2 ** 32 - 1), st.sampled_from([4, 16, 256]))
def test_no_false_negatives(n, seed, levels):
    inst = instance.generate_feasible(n, seed, 5.0)
    cfg = OpticalConfig(gray_levels=levels, height=128)
    res = optics.solve_optical(inst, cfg)
    truth = mvm.feasible_rows(instance.augment(inst).y)
    assert set(truth) <= set(res.candidate_rows)
    assert res.feasible


@pytest.mark.parametrize("n", [4, 8, 12])
def test_tiling_transparency(n):
    inst = instance.generate_feasible(n, n, 2.0)
    base = optics.solve_optical(inst, OpticalConfig(height=1080)).candidate_rows
    for h in (8, 128):
        assert optics.solve_optical(inst, OpticalConfig(height=h)).candidate_rows == base


def test_noise_frames_are_reproducible():
    inst = instance.generate_feasible(9, 1, 2.0)
    cfg = OpticalConfig(noise_sigma=0.01, height=100, misalignment_sigma=0.01)
    a = optics.solve_optical(inst, cfg, seed=11)
    b = optics.solve_optical(inst, cfg, seed=11)
    assert a.candidate_rows == b.candidate_rows
    assert a.frame_min_intensity == b.frame_min_intensity


def test_frames_csv(tmp_path, appendix_a):
    res = optics.solve_optical(appendix_a, OpticalConfig(height=5), keep_frames=True)
    path = tmp_path / "frames.csv"
    optics.write_frames_csv(res.frames, path)
    lines = path.read_text().splitlines()
    assert lines[0] == "frame,row,intensity" and len(lines) == 17
    assert lines[-1].startswith("3,16,")


def test_throughput():
    assert optics.throughput() == 1920 * 1080 * 1080 * 60 == 1.3436928e11
    assert optics.throughput(OpticalConfig(parallel_vectors=1)) == 1920 * 1080 * 60
    assert optics.throughput(OpticalConfig(frame_rate=120)) == 2 * optics.throughput()
    est = optics.estimate(20)
    assert est.macs == 2 ** 20 * 20
    assert est.wall_time_s == (2 ** 20 * 20) / 1.3436928e11
    assert est.frames == math.ceil(2 ** 20 / 1080)
