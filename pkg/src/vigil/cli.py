"""Command-line front end.

Subcommands:
  analyze    batch run over an EEG CSV plus a blink trace or frame directory
  replay     same pipeline with alert events paced onto stdout
  detect     frames -> blink trace file (cascade eye detection only)
  calibrate  EEG CSVs -> fuzzy-term calibration JSON
  generate   synthetic-signal spec JSON -> EEG CSV

Exit codes: 0 success, 1 error, 2 success with at least one alert.
Config precedence: CLI flags > --config file (or $VIGIL_CONFIG) > defaults.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from .clustering import FcmConfig, calibrate_universes, calibration_to_json
from .dsp import WindowPlan, segment_windows
from .errors import VigilError
from .features import extract_features
from .pipeline import RunConfig, analyze, replay
from .signal_io import (
    EyeState,
    SynthSpec,
    generate_synthetic_eeg,
    parse_eeg_csv,
    write_blink_trace,
    write_eeg_csv,
)
from .vision import (
    classify_eye_state,
    detect_objects,
    largest_detection,
    list_frames,
    load_frame,
    parse_cascade_xml,
    states_to_trace,
)

CONFIG_ENV = "VIGIL_CONFIG"


def _add_io_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--eeg", required=True, help="EEG CSV file")
    src = p.add_argument_group("eye-state source (exactly one)")
    src.add_argument("--blink", help="blink trace file")
    src.add_argument("--frames", help="directory of PGM/PNG frames")
    p.add_argument("--face-cascade", help="face cascade XML (frame input)")
    p.add_argument("--eye-cascade", help="eye cascade XML (frame input)")
    p.add_argument("--config", help="JSON config file")
    p.add_argument("--out", help="write the JSON report here (default stdout)")
    p.add_argument("--sample-rate", type=float, help="override EEG sample rate")
    p.add_argument("--fps", type=float, help="video tick rate")
    p.add_argument("--calibration", help="fuzzy calibration JSON")
    p.add_argument("--t-alert", type=float, help="closure seconds escalating to level 2")


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="vigil",
        description="Drowsiness analysis from EEG signals and eye blinking",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("analyze", help="batch pipeline run")
    _add_io_flags(p)

    p = sub.add_parser("replay", help="simulated-real-time run")
    _add_io_flags(p)
    p.add_argument("--speed", type=float, default=1.0, help="pacing multiplier")

    p = sub.add_parser("detect", help="frames to blink trace")
    p.add_argument("--frames", required=True)
    p.add_argument("--face-cascade", required=True)
    p.add_argument("--eye-cascade", required=True)
    p.add_argument("--fps", type=float, help="frame rate (default 25)")
    p.add_argument("--out", required=True, help="blink trace output file")
    p.add_argument("--config", help="JSON config file")

    p = sub.add_parser("calibrate", help="fit fuzzy-term peaks from EEG data")
    p.add_argument("--eeg", required=True, nargs="+", help="EEG CSV files")
    p.add_argument("--out", required=True, help="calibration JSON output")
    p.add_argument("--config", help="JSON config file")
    p.add_argument("--seed", type=int, help="clustering seed")

    p = sub.add_parser("generate", help="synthesize an EEG CSV")
    p.add_argument("--spec", required=True, help="synthetic-signal spec JSON")
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--out", required=True, help="EEG CSV output")
    return parser


def _load_config(args: argparse.Namespace) -> RunConfig:
    path = getattr(args, "config", None) or os.environ.get(CONFIG_ENV)
    config = RunConfig.from_file(path) if path else RunConfig()
    overrides = {
        "sample_rate": getattr(args, "sample_rate", None),
        "fps": getattr(args, "fps", None),
        "calibration": getattr(args, "calibration", None),
        "t_alert": getattr(args, "t_alert", None),
        "face_cascade": getattr(args, "face_cascade", None),
        "eye_cascade": getattr(args, "eye_cascade", None),
    }
    return config.merged(overrides)


def _write_report(report, out: str | None) -> None:
    text = report.to_json()
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _require_one_source(args: argparse.Namespace) -> None:
    if (args.blink is None) == (args.frames is None):
        raise VigilError("supply exactly one of --blink or --frames")


def _cmd_analyze(args: argparse.Namespace) -> int:
    _require_one_source(args)
    config = _load_config(args)
    config.validate_paths()
    report = analyze(args.eeg, args.blink, args.frames, config)
    _write_report(report, args.out)
    return 2 if report.alert_started else 0


def _cmd_replay(args: argparse.Namespace) -> int:
    _require_one_source(args)
    config = _load_config(args)
    config.validate_paths()
    report = replay(args.eeg, args.blink, args.frames, config, speed=args.speed)
    _write_report(report, args.out)
    return 2 if report.alert_started else 0


def _cmd_detect(args: argparse.Namespace) -> int:
    config = _load_config(args)
    face = parse_cascade_xml(Path(args.face_cascade).read_bytes())
    eye = parse_cascade_xml(Path(args.eye_cascade).read_bytes())
    params = config.detect_params()
    frames = list_frames(args.frames)
    if not frames:
        raise VigilError(f"no frames found in {args.frames}")
    states = []
    for i, path in enumerate(frames):
        frame = load_frame(path)
        best = largest_detection(detect_objects(face, frame, params))
        state = (
            classify_eye_state(frame, best, eye, params)
            if best is not None
            else EyeState.CLOSED
        )
        states.append((i / config.fps, state))
    trace = states_to_trace(states, len(frames) / config.fps)
    Path(args.out).write_text(write_blink_trace(trace))
    return 0


def _cmd_calibrate(args: argparse.Namespace) -> int:
    config = _load_config(args)
    feats = []
    for path in args.eeg:
        record = parse_eeg_csv(Path(path).read_bytes(), sample_rate=config.sample_rate)
        plan = WindowPlan(config.window_len, config.hop)
        for bp in segment_windows(record, plan, taper=config.taper):
            feats.append(extract_features(bp, eps=config.eps,
                                          invert_arousal=config.invert_arousal))
    cfg = FcmConfig(
        c=3,
        m=config.fcm_fuzzifier,
        tol=config.fcm_tol,
        max_iter=config.fcm_max_iter,
        seed=args.seed if args.seed is not None else config.fcm_seed,
    )
    calibration = calibrate_universes(feats, cfg)
    Path(args.out).write_text(calibration_to_json(calibration))
    return 0


def _cmd_generate(args: argparse.Namespace) -> int:
    spec = SynthSpec.from_dict(json.loads(Path(args.spec).read_text()))
    record = generate_synthetic_eeg(spec, args.seed)
    Path(args.out).write_text(write_eeg_csv(record))
    return 0


_COMMANDS = {
    "analyze": _cmd_analyze,
    "replay": _cmd_replay,
    "detect": _cmd_detect,
    "calibrate": _cmd_calibrate,
    "generate": _cmd_generate,
}


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except VigilError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    raise SystemExit(main())
