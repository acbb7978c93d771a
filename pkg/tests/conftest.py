"""Shared fixtures: synthetic recordings, traces, cascades, and frames.

Everything is generated deterministically (fixed seeds) so expected
values pinned in the tests stay valid across runs.
"""

from __future__ import annotations

from pathlib import Path

import numpy as np
import pytest

from cascade_fixtures import make_cascade_xml
from vigil.signal_io import (
    SynthComponent,
    SynthSpec,
    generate_synthetic_eeg,
    write_eeg_csv,
)
from vigil.vision import GrayImage, parse_cascade_xml, write_pgm

DATA_DIR = Path(__file__).parent / "data"

ALPHA_FRONTAL = ("AF3", "AF4", "F3", "F4")


def alpha_frontal_spec(noise_std: float, duration: float = 60.0) -> SynthSpec:
    return SynthSpec(
        components=tuple(SynthComponent(ch, 10.0, 1.0) for ch in ALPHA_FRONTAL),
        noise_std=noise_std,
        duration=duration,
        sample_rate=128.0,
    )


def drowsy_spec(duration: float = 60.0) -> SynthSpec:
    """Engineered to fire the all-Large rule in every window."""
    comps = [SynthComponent(ch, 10.0, 2.0) for ch in ("AF3", "AF4", "F4")]
    comps.append(SynthComponent("F3", 20.0, 1.0))
    comps += [SynthComponent(ch, 20.0, 2.0) for ch in ("FC6", "F8", "P8")]
    return SynthSpec(tuple(comps), noise_std=0.1, duration=duration, sample_rate=128.0)


@pytest.fixture(scope="session")
def fixture_dir(tmp_path_factory) -> Path:
    return tmp_path_factory.mktemp("fixtures")


def _write_csv(path: Path, spec: SynthSpec, seed: int) -> Path:
    path.write_text(write_eeg_csv(generate_synthetic_eeg(spec, seed)))
    return path


@pytest.fixture(scope="session")
def alpha_frontal_csv(fixture_dir) -> Path:
    return _write_csv(fixture_dir / "alpha_frontal.csv", alpha_frontal_spec(0.1), 11)


@pytest.fixture(scope="session")
def quiet_csv(fixture_dir) -> Path:
    """Noise-free frontal alpha: no rule fires, EEG level 0 everywhere."""
    return _write_csv(fixture_dir / "quiet.csv", alpha_frontal_spec(0.0), 12)


@pytest.fixture(scope="session")
def drowsy_csv(fixture_dir) -> Path:
    return _write_csv(fixture_dir / "drowsy.csv", drowsy_spec(), 13)


@pytest.fixture(scope="session")
def all_open_trace(fixture_dir) -> Path:
    path = fixture_dir / "all_open.trace"
    path.write_text("0,open\n#duration=60\n")
    return path


@pytest.fixture(scope="session")
def closure_trace(fixture_dir) -> Path:
    """Eyes shut for four seconds starting at t = 30."""
    path = fixture_dir / "closure.trace"
    path.write_text("0,open\n30,closed\n34,open\n#duration=60\n")
    return path


@pytest.fixture(scope="session")
def minimal_cascade_path() -> Path:
    return DATA_DIR / "minimal_cascade.xml"


@pytest.fixture(scope="session")
def permissive_cascade_path() -> Path:
    return DATA_DIR / "permissive_cascade.xml"


@pytest.fixture(scope="session")
def face_cascade_path(fixture_dir) -> Path:
    path = fixture_dir / "face_cascade.xml"
    path.write_text(make_cascade_xml(
        seed=101,
        window=24,
        stage_sizes=(3, 5, 8, 12, 16, 21, 27, 33, 40, 48, 56, 64, 72, 80,
                     88, 96, 104, 112, 120, 128, 136, 144),
    ))
    return path


@pytest.fixture(scope="session")
def eye_cascade_path(fixture_dir) -> Path:
    path = fixture_dir / "eye_cascade.xml"
    path.write_text(make_cascade_xml(
        seed=202,
        window=20,
        stage_sizes=(3, 5, 8, 12, 16, 20, 25, 30, 36, 42, 48),
    ))
    return path


@pytest.fixture(scope="session")
def eye_cascade(eye_cascade_path):
    return parse_cascade_xml(eye_cascade_path.read_bytes())


@pytest.fixture(scope="session")
def face_cascade(face_cascade_path):
    return parse_cascade_xml(face_cascade_path.read_bytes())


def _textured_frame(rng: np.random.Generator, blank_top: bool) -> GrayImage:
    pixels = rng.integers(0, 256, size=(32, 32), dtype=np.uint8)
    if blank_top:
        pixels[:18, :] = 128  # wipes all texture from the eye region
    return GrayImage(pixels)


@pytest.fixture(scope="session")
def frames_dir(fixture_dir) -> Path:
    """Eight frames: four with eye-region texture, then four without."""
    rng = np.random.default_rng(77)
    directory = fixture_dir / "frames"
    directory.mkdir()
    for i in range(8):
        frame = _textured_frame(rng, blank_top=i >= 4)
        (directory / f"frame_{i:03d}.pgm").write_bytes(write_pgm(frame))
    return directory
