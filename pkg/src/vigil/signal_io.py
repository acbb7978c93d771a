"""EEG and eye-state file ingestion, plus synthetic signal generation.

Input formats are plain text so runs can be diffed and replayed:

* EEG CSV: optional ``#key=value`` comment lines, a header row of channel
  labels, then one row of microvolt samples per timestep.  Non-channel
  columns (counters, quality flags, timestamps) are skipped with a warning.
* Blink trace: ``timestamp,state`` lines with state ``open``/``closed``,
  optionally followed by ``#duration=<seconds>``.

The synthetic generator is deterministic for a given (spec, seed) pair and
serves as the test oracle for the spectral pipeline.
"""

from __future__ import annotations

import enum
import logging
import math
from dataclasses import dataclass

import numpy as np

from .errors import VigilError

log = logging.getLogger(__name__)

# Emotiv EPOC electrode set, 10-20 layout order.
CANONICAL_CHANNELS = (
    "AF3", "F7", "F3", "FC5", "T7", "P7", "O1",
    "O2", "P8", "T8", "FC6", "F4", "F8", "AF4",
)

# Electrodes consumed by the arousal/valence/dominance formulas; records
# missing any of these are rejected at feature-extraction time.
FEATURE_CHANNELS = ("AF3", "AF4", "F3", "F4", "FC6", "F8", "P8")

# Nominal EPOC output rate, used when a file does not state one.
DEFAULT_SAMPLE_RATE = 128.0

# Additional 10-20 labels accepted as channels even though the default
# pipeline never consumes them.
_EXTRA_LABELS = frozenset({
    "FP1", "FP2", "FPZ", "AFZ", "FZ", "F1", "F2", "F5", "F6",
    "FC1", "FC2", "FC3", "FC4", "FCZ", "FT7", "FT8",
    "C1", "C2", "C3", "C4", "C5", "C6", "CZ",
    "CP1", "CP2", "CP3", "CP4", "CP5", "CP6", "CPZ", "TP7", "TP8",
    "T3", "T4", "T5", "T6", "T7", "T8",
    "P1", "P2", "P3", "P4", "P5", "P6", "P7", "PZ", "POZ",
    "PO3", "PO4", "PO7", "PO8", "O1", "O2", "OZ", "A1", "A2",
})
_KNOWN_LABELS = frozenset(c.upper() for c in CANONICAL_CHANNELS) | _EXTRA_LABELS


class MalformedHeader(VigilError):
    """The CSV header contains no recognizable channel label."""


class RaggedRows(VigilError):
    """A data row has a different number of cells than the header."""


class NonNumericSample(VigilError):
    """A sample cell failed numeric parsing."""

    def __init__(self, row: int, column: int, cell: str):
        self.row = row
        self.column = column
        super().__init__(f"non-numeric sample {cell!r} at row {row}, column {column}")


class EmptyFile(VigilError):
    """The input holds no usable content."""


class NonMonotonicTimestamps(VigilError):
    """Event timestamps are not strictly increasing."""


class UnknownState(VigilError):
    """An eye-state token is neither 'open' nor 'closed'."""


class RepeatedState(VigilError):
    """Two consecutive blink events carry the same state."""


class AliasedComponent(VigilError):
    """A synthetic component frequency is at or above Nyquist."""


class EyeState(enum.Enum):
    OPEN = "open"
    CLOSED = "closed"

    @classmethod
    def parse(cls, token: str) -> "EyeState":
        try:
            return cls(token.strip().lower())
        except ValueError:
            raise UnknownState(f"unknown eye state {token!r}") from None


@dataclass(frozen=True, eq=False)
class EegRecord:
    """Multi-channel EEG time series.

    ``data`` is (n_channels, n_samples) float64 in microvolts; ``labels``
    names the rows.  All channels share ``sample_rate`` and start at
    ``start_time`` seconds.
    """

    labels: tuple[str, ...]
    data: np.ndarray
    sample_rate: float
    start_time: float = 0.0

    def __post_init__(self):
        data = np.asarray(self.data, dtype=np.float64)
        if data.ndim != 2:
            raise ValueError("data must be 2-D (channels x samples)")
        object.__setattr__(self, "data", data)
        object.__setattr__(self, "labels", tuple(self.labels))
        if len(self.labels) != data.shape[0]:
            raise ValueError("label count does not match channel count")
        if len(set(self.labels)) != len(self.labels):
            raise ValueError("channel labels must be unique")
        if not self.sample_rate > 0:
            raise ValueError("sample_rate must be positive")

    @property
    def n_samples(self) -> int:
        return self.data.shape[1]

    @property
    def duration(self) -> float:
        return self.n_samples / self.sample_rate

    def channel(self, label: str) -> np.ndarray:
        return self.data[self.labels.index(label)]

    def has_channels(self, labels) -> bool:
        return set(labels).issubset(self.labels)

    def __eq__(self, other) -> bool:
        if not isinstance(other, EegRecord):
            return NotImplemented
        return (
            self.labels == other.labels
            and self.sample_rate == other.sample_rate
            and self.start_time == other.start_time
            and self.data.shape == other.data.shape
            and bool(np.array_equal(self.data, other.data))
        )


@dataclass(frozen=True)
class BlinkEvent:
    timestamp: float
    state: EyeState


@dataclass(frozen=True)
class BlinkTrace:
    """Timestamped eye-state transitions over ``duration`` seconds.

    Events alternate open/closed; each event marks the instant the eye
    enters that state, which then persists until the next event.
    """

    events: tuple[BlinkEvent, ...]
    duration: float

    def __post_init__(self):
        object.__setattr__(self, "events", tuple(self.events))
        if not self.events:
            raise EmptyFile("blink trace holds no events")
        if self.events[0].timestamp < 0:
            raise NonMonotonicTimestamps("first event timestamp is negative")
        for prev, cur in zip(self.events, self.events[1:]):
            if cur.timestamp <= prev.timestamp:
                raise NonMonotonicTimestamps(
                    f"timestamp {cur.timestamp} does not increase past {prev.timestamp}"
                )
            if cur.state is prev.state:
                raise RepeatedState(
                    f"state {cur.state.value!r} repeats at t={cur.timestamp}"
                )
        if self.duration < self.events[-1].timestamp:
            raise ValueError("duration precedes the final event")

    def state_at(self, t: float) -> EyeState:
        """State at time ``t``; the first event's state extends backward."""
        state = self.events[0].state
        for ev in self.events:
            if ev.timestamp > t:
                break
            state = ev.state
        return state


@dataclass(frozen=True)
class SynthComponent:
    channel: str
    frequency: float
    amplitude: float
    phase: float = 0.0


@dataclass(frozen=True)
class SynthSpec:
    """Recipe for a synthetic EEG record: named sinusoids plus Gaussian noise."""

    components: tuple[SynthComponent, ...] = ()
    noise_std: float = 0.0
    duration: float = 20.0
    sample_rate: float = DEFAULT_SAMPLE_RATE

    def __post_init__(self):
        object.__setattr__(self, "components", tuple(self.components))
        if not self.duration > 0:
            raise ValueError("duration must be positive")
        if not self.sample_rate > 0:
            raise ValueError("sample_rate must be positive")
        if self.noise_std < 0:
            raise ValueError("noise_std must be non-negative")

    @classmethod
    def from_dict(cls, obj: dict) -> "SynthSpec":
        comps = tuple(
            SynthComponent(
                channel=str(c["channel"]),
                frequency=float(c["frequency"]),
                amplitude=float(c["amplitude"]),
                phase=float(c.get("phase", 0.0)),
            )
            for c in obj.get("components", ())
        )
        return cls(
            components=comps,
            noise_std=float(obj.get("noise_std", 0.0)),
            duration=float(obj["duration"]),
            sample_rate=float(obj.get("sample_rate", DEFAULT_SAMPLE_RATE)),
        )


def _normalize_label(raw: str) -> str:
    label = raw.strip()
    if label.upper().startswith("EEG."):
        label = label[4:]
    return label.upper()


def _parse_comments(lines) -> dict[str, str]:
    out = {}
    for line in lines:
        body = line.lstrip("#").strip()
        if "=" in body:
            key, _, value = body.partition("=")
            out[key.strip().lower()] = value.strip()
    return out


def _decode(data: bytes | str) -> str:
    if isinstance(data, str):
        return data
    try:
        return data.decode("utf-8")
    except UnicodeDecodeError as exc:
        raise MalformedHeader(f"input is not UTF-8 text: {exc}") from None


def parse_eeg_csv(data: bytes | str, sample_rate: float | None = None) -> EegRecord:
    """Parse an EEG CSV into an :class:`EegRecord`.

    ``sample_rate`` overrides any ``#sample_rate=`` comment in the file;
    when neither is present the EPOC default of 128 Hz applies.  Columns
    whose header is not a known electrode label are skipped with a warning.
    """
    text = _decode(data)
    comment_lines = []
    header: list[str] | None = None
    rows: list[list[str]] = []
    for line in text.splitlines():
        stripped = line.strip()
        if not stripped:
            continue
        if stripped.startswith("#"):
            comment_lines.append(stripped)
            continue
        cells = [c.strip() for c in stripped.split(",")]
        if header is None:
            header = cells
        else:
            rows.append(cells)
    if header is None:
        raise EmptyFile("no header row found")

    keep: list[int] = []
    labels: list[str] = []
    for idx, raw in enumerate(header):
        label = _normalize_label(raw)
        if label in _KNOWN_LABELS:
            if label in labels:
                raise MalformedHeader(f"duplicate channel label {label!r}")
            keep.append(idx)
            labels.append(label)
        else:
            log.warning("skipping unrecognized column %r", raw)
    if not keep:
        raise MalformedHeader("no recognizable channel label in header")

    comments = _parse_comments(comment_lines)
    if sample_rate is None:
        try:
            sample_rate = float(comments["sample_rate"])
        except KeyError:
            sample_rate = DEFAULT_SAMPLE_RATE
        except ValueError:
            raise MalformedHeader(
                f"bad #sample_rate= value {comments['sample_rate']!r}"
            ) from None
    try:
        start_time = float(comments.get("start_time", 0.0))
    except ValueError:
        raise MalformedHeader(
            f"bad #start_time= value {comments['start_time']!r}"
        ) from None

    n_cols = len(header)
    data_arr = np.empty((len(keep), len(rows)), dtype=np.float64)
    for r, cells in enumerate(rows):
        if len(cells) != n_cols:
            raise RaggedRows(
                f"row {r + 1} has {len(cells)} cells, header has {n_cols}"
            )
        for ci, col in enumerate(keep):
            try:
                data_arr[ci, r] = float(cells[col])
            except ValueError:
                raise NonNumericSample(r + 1, col + 1, cells[col]) from None

    return EegRecord(tuple(labels), data_arr, sample_rate, start_time)


def write_eeg_csv(record: EegRecord) -> str:
    """Canonical CSV serialization; ``parse_eeg_csv`` round-trips it exactly."""
    lines = [f"#sample_rate={record.sample_rate!r}"]
    if record.start_time != 0.0:
        lines.append(f"#start_time={record.start_time!r}")
    lines.append(",".join(record.labels))
    for col in record.data.T:
        lines.append(",".join(repr(float(v)) for v in col))
    return "\n".join(lines) + "\n"


def parse_blink_trace(data: bytes | str) -> BlinkTrace:
    """Parse a ``timestamp,state`` trace; duration defaults to the last event."""
    text = _decode(data)
    events: list[BlinkEvent] = []
    comment_lines = []
    for ln, line in enumerate(text.splitlines(), start=1):
        stripped = line.strip()
        if not stripped:
            continue
        if stripped.startswith("#"):
            comment_lines.append(stripped)
            continue
        ts_raw, _, state_raw = stripped.partition(",")
        try:
            ts = float(ts_raw)
        except ValueError:
            raise NonNumericSample(ln, 1, ts_raw) from None
        events.append(BlinkEvent(ts, EyeState.parse(state_raw)))
    if not events:
        raise EmptyFile("blink trace holds no events")

    comments = _parse_comments(comment_lines)
    duration = float(comments.get("duration", events[-1].timestamp))
    return BlinkTrace(tuple(events), duration)


def write_blink_trace(trace: BlinkTrace) -> str:
    lines = [f"{ev.timestamp!r},{ev.state.value}" for ev in trace.events]
    lines.append(f"#duration={trace.duration!r}")
    return "\n".join(lines) + "\n"


def generate_synthetic_eeg(spec: SynthSpec, seed: int) -> EegRecord:
    """Deterministic synthetic record: named sinusoids plus Gaussian noise.

    Channels named by components receive the sum of their sinusoids; every
    other canonical channel carries pure noise.  Identical (spec, seed)
    inputs produce bit-identical samples.
    """
    nyquist = spec.sample_rate / 2.0
    for comp in spec.components:
        if comp.frequency >= nyquist:
            raise AliasedComponent(
                f"component at {comp.frequency} Hz >= Nyquist {nyquist} Hz"
            )

    labels = list(CANONICAL_CHANNELS)
    for comp in spec.components:
        label = _normalize_label(comp.channel)
        if label not in labels:
            labels.append(label)

    n = int(round(spec.duration * spec.sample_rate))
    t = np.arange(n, dtype=np.float64) / spec.sample_rate
    rng = np.random.default_rng(seed)
    # Noise drawn per channel in label order keeps output independent of
    # component ordering.
    data = rng.normal(0.0, spec.noise_std, size=(len(labels), n)) if spec.noise_std > 0 \
        else np.zeros((len(labels), n))
    for comp in spec.components:
        row = labels.index(_normalize_label(comp.channel))
        data[row] += comp.amplitude * np.sin(
            2.0 * math.pi * comp.frequency * t + comp.phase
        )
    return EegRecord(tuple(labels), data, spec.sample_rate, 0.0)
