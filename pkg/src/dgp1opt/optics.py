"""Numerical model of the two-SLM optical multiply-accumulate processor.

Pipeline per frame of rows ``lo..hi`` of ``M``:

1. SLM 1 shows a stripe mask, column ``j`` at phase ``arccos(y_norm[j])``.
2. SLM + half-wave plate + polarizing beam splitter act as an amplitude
   modulator with transmission ``cos(phase)``.
3. SLM 2 shows the sign tile with phases in ``{0, pi}``; a second projection
   multiplies each cell by ``cos(alpha) = +-1``.
4. A cylindrical lens sums every row into one detector cell.
5. The CCD measures ``I = I0 * V**2`` (plus optional Gaussian noise).

Polarization is not tracked as Jones vectors: only the ``cos`` factors reach
the detector, and all constant field prefactors are absorbed into ``I0``.
"""

from __future__ import annotations

import csv
import math
import warnings
from dataclasses import asdict, dataclass, field
from typing import Optional

import numpy as np

from .errors import AllZeroWarning, FrameOverflow, ShapeMismatch, SizeLimit, ValueOutOfRange
from .instance import AugmentedInstance, ParadoxicalInstance, augment
from .mvm import MAX_N, sign_block

# per-element amplitude error budget when phases are not quantized
ANALYTIC_STEP = 8 * np.finfo(np.float64).eps


@dataclass(frozen=True)
class OpticalConfig:
    """Device model.

    ``gray_levels=None`` selects analytic (unquantized) phases.
    ``detect_eps=None`` selects the sound threshold, see :func:`sound_threshold`.
    ``misalignment_sigma`` is the std-dev in radians of a per-cell phase error
    on SLM 2, standing in for imperfect imaging between the two modulators.
    """

    width: int = 1920
    height: int = 1080
    gray_levels: Optional[int] = 256
    frame_rate: float = 60.0
    parallel_vectors: int = 1080
    noise_sigma: float = 0.0
    detect_eps: Optional[float] = None
    i0: float = 1.0
    misalignment_sigma: float = 0.0

    def __post_init__(self):
        if self.width < 1 or self.height < 1:
            raise ValueError("frame extents must be positive")
        if self.gray_levels is not None and self.gray_levels < 2:
            raise ValueError("gray_levels must be >= 2")
        if not self.frame_rate > 0:
            raise ValueError("frame_rate must be positive")
        if self.parallel_vectors < 1:
            raise ValueError("parallel_vectors must be >= 1")
        if self.noise_sigma < 0 or self.misalignment_sigma < 0:
            raise ValueError("noise parameters must be nonnegative")
        if self.detect_eps is not None and self.detect_eps < 0:
            raise ValueError("detect_eps must be nonnegative")
        if not self.i0 > 0:
            raise ValueError("i0 must be positive")


@dataclass(frozen=True)
class PhaseMask:
    """Phase grid in radians; quantized masks only hold levels ``pi*g/(L-1)``."""

    phases: np.ndarray
    gray_levels: Optional[int] = None

    @property
    def shape(self):
        return self.phases.shape

    @property
    def levels(self) -> np.ndarray:
        if self.gray_levels is None:
            raise ValueError("analytic mask has no gray levels")
        return np.rint(self.phases * (self.gray_levels - 1) / np.pi).astype(np.int64)

    def transmission(self) -> np.ndarray:
        return np.cos(self.phases)


@dataclass(frozen=True)
class IntensityFrame:
    intensities: np.ndarray
    lo: int
    hi: int


def quantize_phase(phi, gray_levels: Optional[int]):
    """Round phases on ``[0, pi]`` to the nearest of ``gray_levels`` uniform levels."""
    phi = np.asarray(phi, dtype=np.float64)
    if gray_levels is None:
        return phi
    step = np.pi / (gray_levels - 1)
    g = np.clip(np.rint(phi / step), 0, gray_levels - 1)
    return np.pi * g / (gray_levels - 1)


def element_error_bound(gray_levels: Optional[int]) -> float:
    """Upper bound on ``|cos(quantized phase) - value|`` for one vector element."""
    if gray_levels is None:
        return float(ANALYTIC_STEP)
    return math.pi / (gray_levels - 1)


def row_error_bound(n: int, gray_levels: Optional[int]) -> float:
    return n * element_error_bound(gray_levels)


def sound_threshold(n: int, cfg: OpticalConfig) -> float:
    """Intensity threshold with no false negatives in the noiseless regime."""
    return cfg.i0 * row_error_bound(n, cfg.gray_levels) ** 2


def normalize_distances(y):
    """Scale the chain into ``[0, 1]``; returns ``(y_norm, scale)`` with ``scale = max(y)``."""
    y = np.asarray(y, dtype=np.float64)
    if y.size == 0 or np.any(y < 0) or not np.all(np.isfinite(y)):
        raise ValueOutOfRange("distances must be finite and nonnegative")
    scale = float(y.max())
    if scale == 0.0:
        warnings.warn("all distances are zero", AllZeroWarning, stacklevel=2)
        return np.zeros_like(y), 1.0
    return y / scale, scale


def encode_vector_mask(y_norm, rows: int, gray_levels: Optional[int] = 256) -> PhaseMask:
    """Stripe mask for SLM 1: column ``j`` holds ``arccos(y_norm[j])`` on every row."""
    y_norm = np.asarray(y_norm, dtype=np.float64)
    if np.any(y_norm < 0) or np.any(y_norm > 1) or not np.all(np.isfinite(y_norm)):
        raise ValueOutOfRange("vector entries must lie in [0, 1]")
    phi = quantize_phase(np.arccos(y_norm), gray_levels)
    return PhaseMask(np.broadcast_to(phi, (rows, len(phi))).copy(), gray_levels)


def encode_matrix_mask(n: int, lo: int, hi: int, cfg: Optional[OpticalConfig] = None) -> PhaseMask:
    """Sign tile for SLM 2: phase 0 where ``M = +1`` and pi where ``M = -1``."""
    cfg = cfg or OpticalConfig()
    if hi - lo + 1 > cfg.height:
        raise FrameOverflow(f"{hi - lo + 1} rows exceed frame height {cfg.height}")
    if n > cfg.width:
        raise FrameOverflow(f"{n} columns exceed frame width {cfg.width}")
    signs = sign_block(n, lo, hi)
    return PhaseMask(np.where(signs > 0, 0.0, np.pi), cfg.gray_levels)


def project_amplitude(mask: PhaseMask, input_amplitude) -> np.ndarray:
    """Field after SLM + HWP + PBS: ``input * cos(phase)`` cell by cell."""
    a = np.asarray(input_amplitude, dtype=np.float64)
    if a.shape != mask.shape and a.ndim != 0:
        raise ShapeMismatch(f"amplitude shape {a.shape} vs mask shape {mask.shape}")
    return a * mask.transmission()


def accumulate_rows(field) -> np.ndarray:
    """Cylindrical-lens focus: per-row sums, left to right."""
    field = np.asarray(field, dtype=np.float64)
    v = np.zeros(field.shape[0])
    for q in range(field.shape[1]):
        v += field[:, q]
    return v


def detect(V, cfg: OpticalConfig, seed=None, lo: int = 1) -> IntensityFrame:
    """CCD readout ``I = I0 * V**2 + noise``, clamped at zero."""
    V = np.asarray(V, dtype=np.float64)
    intensity = cfg.i0 * V * V
    if cfg.noise_sigma > 0:
        rng = np.random.default_rng(seed)
        intensity = np.maximum(intensity + rng.normal(0.0, cfg.noise_sigma * cfg.i0, V.shape), 0.0)
    return IntensityFrame(intensity, lo, lo + len(V) - 1)


def recover_magnitudes(frame: IntensityFrame, cfg: OpticalConfig) -> np.ndarray:
    """``|V_p| = sqrt(I_p / I0)``; the sign of ``V_p`` is not observable."""
    return np.sqrt(frame.intensities / cfg.i0)


def frame_seed(seed, index: int) -> np.random.SeedSequence:
    return np.random.SeedSequence([0 if seed is None else seed, index])


def simulate_frame(y_norm, lo: int, hi: int, cfg: OpticalConfig, seed=None) -> IntensityFrame:
    n = len(y_norm)
    rows = hi - lo + 1
    slm1 = encode_vector_mask(y_norm, rows, cfg.gray_levels)
    slm2 = encode_matrix_mask(n, lo, hi, cfg)
    rng = np.random.default_rng(seed)
    if cfg.misalignment_sigma > 0:
        slm2 = PhaseMask(slm2.phases + rng.normal(0.0, cfg.misalignment_sigma, slm2.shape), None)
    field = project_amplitude(slm2, project_amplitude(slm1, np.ones(slm1.shape)))
    return detect(accumulate_rows(field), cfg, rng, lo)


@dataclass
class OpticalResult:
    feasible: bool
    candidate_rows: list[int]
    frames_used: int
    detect_eps: float
    scale: float
    row_error_bound: float
    frame_min_intensity: list[float] = field(default_factory=list)
    frames: list[IntensityFrame] = field(default_factory=list, repr=False)


def solve_optical(inst, cfg: Optional[OpticalConfig] = None, seed=0, *, keep_frames: bool = False) -> OpticalResult:
    """Run the simulated processor over all ``2**n`` rows, one frame at a time.

    A row is a candidate when its detected intensity is at most the detection
    threshold; the instance is reported feasible when any candidate exists.
    """
    cfg = cfg or OpticalConfig()
    aug = augment(inst) if isinstance(inst, ParadoxicalInstance) else inst
    if not isinstance(aug, AugmentedInstance):
        aug = AugmentedInstance.from_chain(aug)
    n = aug.n
    if n > cfg.width:
        raise FrameOverflow(f"n={n} exceeds frame width {cfg.width}")
    if n > MAX_N:
        raise SizeLimit(f"n={n} exceeds the enumeration cap of {MAX_N}")
    y_norm, scale = normalize_distances(aug.y)
    eps = sound_threshold(n, cfg) if cfg.detect_eps is None else cfg.detect_eps

    total = 1 << n
    result = OpticalResult(False, [], 0, eps, scale, row_error_bound(n, cfg.gray_levels))
    for index, lo in enumerate(range(1, total + 1, cfg.height)):
        hi = min(lo + cfg.height - 1, total)
        frame = simulate_frame(y_norm, lo, hi, cfg, frame_seed(seed, index))
        hits = np.flatnonzero(frame.intensities <= eps) + lo
        result.candidate_rows.extend(hits.tolist())
        result.frame_min_intensity.append(float(frame.intensities.min()))
        result.frames_used += 1
        if keep_frames:
            result.frames.append(frame)
    result.feasible = bool(result.candidate_rows)
    return result


def write_frames_csv(frames, path) -> None:
    """Dump intensities as ``frame,row,intensity`` rows."""
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["frame", "row", "intensity"])
        for k, fr in enumerate(frames):
            for row, value in zip(range(fr.lo, fr.hi + 1), fr.intensities):
                w.writerow([k, row, repr(float(value))])


@dataclass(frozen=True)
class ThroughputEstimate:
    mac_per_second: float
    macs: int
    frames: int
    wall_time_s: float
    frame_time_s: float


def throughput(cfg: Optional[OpticalConfig] = None) -> float:
    """Peak MAC/s: ``width * height * parallel_vectors * frame_rate``."""
    cfg = cfg or OpticalConfig()
    return float(cfg.width * cfg.height * cfg.parallel_vectors * cfg.frame_rate)


def estimate(n: int, cfg: Optional[OpticalConfig] = None) -> ThroughputEstimate:
    """Modeled cost of one ``n``-vertex instance.

    ``wall_time_s`` divides the ``2**n * n`` MACs by the peak rate;
    ``frame_time_s`` is the slower single-vector figure, one frame per
    ``height`` rows at the nominal frame rate.
    """
    cfg = cfg or OpticalConfig()
    macs = (1 << n) * n
    frames = -(-(1 << n) // cfg.height)
    return ThroughputEstimate(throughput(cfg), macs, frames, macs / throughput(cfg), frames / cfg.frame_rate)


def config_dict(cfg: OpticalConfig) -> dict:
    return asdict(cfg)
