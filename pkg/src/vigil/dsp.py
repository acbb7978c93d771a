"""Windowing, FFT, and spectral band power.

Band power follows the PSD-sum convention: a unit-amplitude sinusoid that
lands exactly on a bin contributes 0.5 (amplitude squared over two) to its
band.  The per-window mean is removed before the transform to suppress
electrode DC offset; the DC and Nyquist bins never count toward any band.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .errors import VigilError
from .signal_io import EegRecord


class TooShort(VigilError):
    """Too few samples for a transform."""


class BandAboveNyquist(VigilError):
    """The requested band extends past half the sample rate."""


class RecordTooShort(VigilError):
    """The record does not cover one full analysis window."""


@dataclass(frozen=True)
class Band:
    """Half-open frequency interval [lo, hi) in Hz."""

    name: str
    lo: float
    hi: float

    def __post_init__(self):
        if not (0 <= self.lo < self.hi):
            raise ValueError(f"bad band edges [{self.lo}, {self.hi})")


THETA = Band("THETA", 4.0, 7.0)
ALPHA = Band("ALPHA", 8.0, 13.0)
BETA = Band("BETA", 13.0, 30.0)

# Defined for completeness; nothing in the default pipeline consumes them.
# The gamma upper edge is capped at the Nyquist of the default 128 Hz rate.
DELTA = Band("DELTA", 0.0, 4.0)
MU = Band("MU", 8.0, 12.0)
GAMMA = Band("GAMMA", 30.0, 64.0)

CANONICAL_BANDS = (THETA, ALPHA, BETA)

_TAPERS = ("rectangular", "hann")


@dataclass(frozen=True, eq=False)
class Spectrum:
    """One-sided DFT: ``bins[k]`` covers frequency ``k * bin_width``."""

    bins: np.ndarray
    bin_width: float
    n: int

    @property
    def frequencies(self) -> np.ndarray:
        return np.arange(len(self.bins)) * self.bin_width

    def energy(self) -> float:
        """Time-domain-equivalent energy (sum of squared samples) via Parseval."""
        mags = np.abs(self.bins) ** 2
        total = 2.0 * mags.sum() - mags[0]
        if self.n % 2 == 0:
            total -= mags[-1]
        return float(total / self.n)


class ChannelBands(NamedTuple):
    theta: float
    alpha: float
    beta: float


@dataclass(frozen=True)
class BandPowers:
    """Per-channel theta/alpha/beta power (microvolts squared) for one window."""

    window_start: float
    powers: dict[str, ChannelBands]

    @property
    def channels(self) -> tuple[str, ...]:
        return tuple(self.powers)


@dataclass(frozen=True)
class WindowPlan:
    """Analysis windows of ``window_len`` seconds every ``hop`` seconds."""

    window_len: float = 20.0
    hop: float = 20.0

    def __post_init__(self):
        if not (0 < self.hop <= self.window_len):
            raise ValueError("hop must satisfy 0 < hop <= window_len")


def fft_real(samples, sample_rate: float = 1.0) -> Spectrum:
    """One-sided DFT of a real signal; mixed-radix, any length >= 2."""
    x = np.asarray(samples, dtype=np.float64)
    if x.ndim != 1:
        raise ValueError("samples must be 1-D")
    if len(x) < 2:
        raise TooShort(f"need at least 2 samples, got {len(x)}")
    return Spectrum(np.fft.rfft(x), sample_rate / len(x), len(x))


def _taper(n: int, kind: str) -> np.ndarray:
    if kind == "rectangular":
        return np.ones(n)
    if kind == "hann":
        return np.hanning(n)
    raise ValueError(f"unknown taper {kind!r}; expected one of {_TAPERS}")


def _band_bin_slice(n: int, sample_rate: float, band: Band) -> slice:
    """Indices of interior one-sided bins with lo <= freq < hi."""
    bin_width = sample_rate / n
    first = max(1, int(np.ceil(band.lo / bin_width - 1e-9)))
    last = int(np.ceil(band.hi / bin_width - 1e-9))  # exclusive
    interior_end = n // 2 + 1 if n % 2 else n // 2  # drop Nyquist when present
    return slice(min(first, interior_end), min(last, interior_end))


def _multi_band_power(x: np.ndarray, sample_rate: float, bands, taper: str) -> tuple[float, ...]:
    """Band powers from a single transform of the detrended, tapered window."""
    n = len(x)
    w = _taper(n, taper)
    bins = np.fft.rfft((x - x.mean()) * w)
    scale = 2.0 / (n * float(np.sum(w * w)))
    mags = np.abs(bins) ** 2
    return tuple(
        float(mags[_band_bin_slice(n, sample_rate, band)].sum() * scale)
        for band in bands
    )


def band_power(samples, sample_rate: float, band: Band, taper: str = "rectangular") -> float:
    """Mean squared amplitude contributed by bins inside ``band``."""
    if sample_rate <= 2.0 * band.hi:
        raise BandAboveNyquist(
            f"band {band.name} tops out at {band.hi} Hz; needs rate > {2 * band.hi} Hz"
        )
    x = np.asarray(samples, dtype=np.float64)
    if len(x) < 2:
        raise TooShort(f"need at least 2 samples, got {len(x)}")
    return _multi_band_power(x, sample_rate, (band,), taper)[0]


def segment_windows(
    record: EegRecord,
    plan: WindowPlan = WindowPlan(),
    taper: str = "rectangular",
) -> list[BandPowers]:
    """Split a record into fixed windows and compute per-channel band powers.

    Windows start at 0, hop, 2*hop, ... seconds from the record start; a
    trailing partial window is discarded.
    """
    for band in CANONICAL_BANDS:
        if record.sample_rate <= 2.0 * band.hi:
            raise BandAboveNyquist(
                f"sample rate {record.sample_rate} Hz cannot resolve {band.name}"
            )
    win = int(round(plan.window_len * record.sample_rate))
    hop = max(1, int(round(plan.hop * record.sample_rate)))
    if record.n_samples < win or win < 2:
        raise RecordTooShort(
            f"record holds {record.n_samples} samples; one window needs {win}"
        )
    out = []
    for start in range(0, record.n_samples - win + 1, hop):
        powers = {}
        for label, row in zip(record.labels, record.data):
            theta, alpha, beta = _multi_band_power(
                row[start:start + win], record.sample_rate, CANONICAL_BANDS, taper
            )
            powers[label] = ChannelBands(theta, alpha, beta)
        out.append(BandPowers(record.start_time + start / record.sample_rate, powers))
    return out
