"""Batch analysis and simulated-real-time replay of the full pipeline.

``analyze`` runs EEG CSV (or synthetic) input through band powers,
features, and fuzzy classification, runs the eye-state stream (blink
trace or frame directory) through closure tracking, fuses the two level
streams at video rate, and drives the alert machine.  ``replay`` produces
the identical report while pacing alert events onto an emitter; pacing
never changes results.
"""

from __future__ import annotations

import contextlib
import json
import math
import time
from dataclasses import asdict, dataclass, fields
from pathlib import Path
from typing import Callable

from . import __version__
from .clustering import calibration_from_json
from .dsp import WindowPlan, segment_windows
from .errors import VigilError
from .features import extract_features, smooth_features
from .fusion import AlertMachine, fuse_levels
from .fuzzy import build_default_system, classify_eeg_level, infer_mamdani
from .signal_io import EyeState, parse_blink_trace, parse_eeg_csv
from .vision import (
    ClosureTracker,
    DetectParams,
    classify_eye_state,
    detect_objects,
    largest_detection,
    list_frames,
    load_frame,
    parse_cascade_xml,
)


class DurationMismatch(VigilError):
    """The EEG recording and the eye-state stream do not overlap in time."""


class InvalidSpeed(VigilError):
    """Replay speed must be a positive multiplier."""


@dataclass
class RunConfig:
    """Flat run configuration; JSON file fields share these names."""

    sample_rate: float | None = None
    window_len: float = 20.0
    hop: float = 20.0
    taper: str = "rectangular"
    eps: float = 1e-12
    invert_arousal: bool = False
    smoothing: float = 0.0
    calibration: str | None = None
    fcm_fuzzifier: float = 2.0
    fcm_tol: float = 1e-6
    fcm_max_iter: int = 300
    fcm_seed: int = 0
    scale_factor: float = 1.1
    step: int = 2
    min_neighbors: int = 3
    min_size: int | None = None
    max_size: int | None = None
    fps: float = 25.0
    t_alert: float = 3.0
    perclos_window: float = 60.0
    release_hysteresis: float = 5.0
    face_cascade: str | None = None
    eye_cascade: str | None = None

    @classmethod
    def from_dict(cls, obj: dict) -> "RunConfig":
        known = {f.name for f in fields(cls)}
        unknown = set(obj) - known
        if unknown:
            raise ValueError(f"unknown config keys: {sorted(unknown)}")
        return cls(**obj)

    @classmethod
    def from_file(cls, path: str | Path) -> "RunConfig":
        return cls.from_dict(json.loads(Path(path).read_text()))

    def merged(self, overrides: dict) -> "RunConfig":
        """New config with non-None overrides applied (CLI beats file)."""
        data = asdict(self)
        data.update({k: v for k, v in overrides.items() if v is not None})
        return RunConfig.from_dict(data)

    def validate_paths(self) -> None:
        for name in ("calibration", "face_cascade", "eye_cascade"):
            value = getattr(self, name)
            if value is not None and not Path(value).is_file():
                raise VigilError(f"{name} file not found: {value}")

    def detect_params(self) -> DetectParams:
        return DetectParams(
            scale_factor=self.scale_factor,
            step=self.step,
            min_size=self.min_size,
            max_size=self.max_size,
            min_neighbors=self.min_neighbors,
        )


@dataclass(frozen=True)
class RunReport:
    """Everything needed to audit a run; every number is recomputable."""

    config: dict
    eeg: dict
    video: dict
    fusion: list
    alerts: list
    version: str = __version__

    def to_json(self) -> str:
        obj = {
            "version": self.version,
            "config": self.config,
            "eeg": self.eeg,
            "video": self.video,
            "fusion": self.fusion,
            "alerts": self.alerts,
        }
        return json.dumps(obj, indent=2, sort_keys=True) + "\n"

    @property
    def alert_started(self) -> bool:
        return any(ev["transition"] == "start" for ev in self.alerts)


@contextlib.contextmanager
def _input_context(path):
    """Prefix errors from parsing ``path`` with the file name."""
    try:
        yield
    except VigilError as exc:
        exc.args = (f"{path}: {exc.args[0]}",) + exc.args[1:] if exc.args else (str(path),)
        raise


def _load_system(config: RunConfig):
    if config.calibration is not None:
        with _input_context(config.calibration):
            calibration = calibration_from_json(Path(config.calibration).read_text())
        return build_default_system(calibration)
    return build_default_system()


def _eeg_branch(eeg_path: Path, config: RunConfig, system) -> dict:
    with _input_context(eeg_path):
        record = parse_eeg_csv(eeg_path.read_bytes(), sample_rate=config.sample_rate)
        plan = WindowPlan(config.window_len, config.hop)
        window_powers = segment_windows(record, plan, taper=config.taper)
    raw = [
        extract_features(bp, eps=config.eps, invert_arousal=config.invert_arousal)
        for bp in window_powers
    ]
    feats = smooth_features(raw, config.smoothing)

    windows = []
    for bp, vec in zip(window_powers, feats):
        result = infer_mamdani(system, vec)
        windows.append({
            "start": bp.window_start,
            "band_powers": {
                ch: {"theta": p.theta, "alpha": p.alpha, "beta": p.beta}
                for ch, p in bp.powers.items()
            },
            "features": vec.as_dict(),
            "activations": list(result.activations),
            "crisp": result.crisp,
            "winning_term": result.winning_term,
            "no_rule_fired": result.no_rule_fired,
            "level": classify_eeg_level(result.winning_term),
        })
    return {
        "sample_rate": record.sample_rate,
        "start_time": record.start_time,
        "duration": record.duration,
        "window_len": config.window_len,
        "hop": config.hop,
        "windows": windows,
    }


def _video_states(
    blink_path: Path | None,
    frames_dir: Path | None,
    config: RunConfig,
) -> tuple[list[tuple[float, EyeState]], float, str]:
    """Per-tick eye states at the frame rate, plus stream duration."""
    if (blink_path is None) == (frames_dir is None):
        raise ValueError("exactly one of blink trace or frames directory is required")
    if blink_path is not None:
        with _input_context(blink_path):
            trace = parse_blink_trace(blink_path.read_bytes())
        n_ticks = int(math.floor(trace.duration * config.fps + 1e-9)) + 1
        states = [
            (i / config.fps, trace.state_at(i / config.fps)) for i in range(n_ticks)
        ]
        return states, trace.duration, "trace"

    config.validate_paths()
    if config.face_cascade is None or config.eye_cascade is None:
        raise VigilError("frame input requires face_cascade and eye_cascade")
    face = parse_cascade_xml(Path(config.face_cascade).read_bytes())
    eye = parse_cascade_xml(Path(config.eye_cascade).read_bytes())
    params = config.detect_params()
    frames = list_frames(frames_dir)
    if not frames:
        raise VigilError(f"no frames found in {frames_dir}")
    states = []
    for i, path in enumerate(frames):
        frame = load_frame(path)
        best = largest_detection(detect_objects(face, frame, params))
        if best is None:
            state = EyeState.CLOSED
        else:
            state = classify_eye_state(frame, best, eye, params)
        states.append((i / config.fps, state))
    return states, len(frames) / config.fps, "frames"


def _check_overlap(eeg: dict, video_duration: float) -> None:
    eeg_start = eeg["start_time"]
    eeg_end = eeg_start + eeg["duration"]
    overlap = min(eeg_end, video_duration) - max(eeg_start, 0.0)
    if overlap <= 0:
        raise DurationMismatch(
            f"EEG spans [{eeg_start}, {eeg_end}) s but the eye stream covers "
            f"[0, {video_duration}] s; nothing overlaps"
        )


def _eeg_level_at(windows: list[dict], t: float) -> int:
    """Level of the window covering t; the last window extends onward."""
    level = 0
    for win in windows:
        if win["start"] <= t + 1e-9:
            level = win["level"]
        else:
            break
    return level


def analyze(
    eeg_path: str | Path,
    blink_path: str | Path | None = None,
    frames_dir: str | Path | None = None,
    config: RunConfig = RunConfig(),
) -> RunReport:
    """Run the full pipeline in batch mode and return the report."""
    system = _load_system(config)
    eeg = _eeg_branch(Path(eeg_path), config, system)
    states, video_duration, source = _video_states(
        Path(blink_path) if blink_path is not None else None,
        Path(frames_dir) if frames_dir is not None else None,
        config,
    )
    _check_overlap(eeg, video_duration)

    tracker = ClosureTracker(config.t_alert, config.perclos_window)
    ticks = []
    for t, state in states:
        sample = tracker.update(t, state)
        ticks.append({
            "t": t,
            "state": state.value,
            "T": sample.T,
            "perclos": sample.perclos,
            "level": sample.video_level,
        })
    video = {
        "fps": config.fps,
        "duration": video_duration,
        "source": source,
        "ticks": ticks,
    }

    machine = AlertMachine(release_after=config.release_hysteresis)
    fusion = []
    alerts = []
    for tick in ticks:
        eeg_level = _eeg_level_at(eeg["windows"], tick["t"])
        fused = fuse_levels(eeg_level, tick["level"])
        fusion.append({
            "t": tick["t"],
            "eeg": eeg_level,
            "video": tick["level"],
            "level": fused,
        })
        event = machine.step(tick["t"], fused)
        if event is not None:
            alerts.append({
                "timestamp": event.timestamp,
                "level": event.level,
                "transition": event.transition,
            })

    return RunReport(
        config=_config_echo(config),
        eeg=eeg,
        video=video,
        fusion=fusion,
        alerts=alerts,
    )


def _config_echo(config: RunConfig) -> dict:
    return asdict(config)


def replay(
    eeg_path: str | Path,
    blink_path: str | Path | None = None,
    frames_dir: str | Path | None = None,
    config: RunConfig = RunConfig(),
    speed: float = 1.0,
    emit: Callable[[str], None] = print,
    sleep: Callable[[float], None] = time.sleep,
) -> RunReport:
    """Simulated-real-time run: same report as ``analyze``, paced events.

    Alert events are emitted as JSON lines in timestamp order, with gaps
    scaled by 1/speed.  Pacing changes nothing about the report.
    """
    if not speed > 0:
        raise InvalidSpeed(f"speed must be positive, got {speed}")
    report = analyze(eeg_path, blink_path, frames_dir, config)
    prev = 0.0
    for event in report.alerts:
        gap = (event["timestamp"] - prev) / speed
        if gap > 0:
            sleep(gap)
        prev = event["timestamp"]
        emit(json.dumps(event, sort_keys=True))
    return report
