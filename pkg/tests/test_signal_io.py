"""Parsing, serialization, and synthetic-generation contracts."""

import numpy as np
import pytest

from vigil.dsp import ALPHA, BETA, THETA, band_power, segment_windows
from vigil.signal_io import (
    CANONICAL_CHANNELS,
    AliasedComponent,
    BlinkEvent,
    EegRecord,
    EmptyFile,
    EyeState,
    MalformedHeader,
    NonMonotonicTimestamps,
    NonNumericSample,
    RaggedRows,
    RepeatedState,
    SynthComponent,
    SynthSpec,
    UnknownState,
    generate_synthetic_eeg,
    parse_blink_trace,
    parse_eeg_csv,
    write_blink_trace,
    write_eeg_csv,
)


class TestParseEegCsv:
    def test_minimal_two_channels(self):
        rec = parse_eeg_csv(b"AF3,F4\n1.0,2.0\n3.0,4.0\n", sample_rate=128.0)
        assert rec.labels == ("AF3", "F4")
        assert rec.data.shape == (2, 2)
        assert rec.sample_rate == 128.0
        assert np.array_equal(rec.channel("AF3"), [1.0, 3.0])

    def test_canonical_file_is_one_window(self):
        rows = "\n".join("0," * 13 + "0" for _ in range(2560))
        rec = parse_eeg_csv(",".join(CANONICAL_CHANNELS) + "\n" + rows)
        assert rec.sample_rate == 128.0  # default applies
        assert rec.duration == 20.0
        assert len(segment_windows(rec)) == 1

    def test_non_numeric_cell_reports_position(self):
        with pytest.raises(NonNumericSample) as err:
            parse_eeg_csv(b"AF3,F4\n1.0,abc\n")
        assert err.value.row == 1
        assert err.value.column == 2

    def test_sample_rate_comment(self):
        rec = parse_eeg_csv(b"#sample_rate=256\nAF3\n1\n2\n")
        assert rec.sample_rate == 256.0

    def test_argument_overrides_comment(self):
        rec = parse_eeg_csv(b"#sample_rate=256\nAF3\n1\n", sample_rate=64.0)
        assert rec.sample_rate == 64.0

    def test_unknown_columns_skipped(self, caplog):
        with caplog.at_level("WARNING"):
            rec = parse_eeg_csv(b"COUNTER,AF3,GYROX\n7,1.5,9\n")
        assert rec.labels == ("AF3",)
        assert "COUNTER" in caplog.text

    def test_emotiv_prefix_stripped(self):
        rec = parse_eeg_csv(b"EEG.AF3,EEG.F4\n1,2\n")
        assert rec.labels == ("AF3", "F4")

    def test_no_channel_labels(self):
        with pytest.raises(MalformedHeader):
            parse_eeg_csv(b"COUNTER,GYROX\n1,2\n")

    def test_duplicate_label(self):
        with pytest.raises(MalformedHeader):
            parse_eeg_csv(b"AF3,AF3\n1,2\n")

    def test_ragged_rows(self):
        with pytest.raises(RaggedRows):
            parse_eeg_csv(b"AF3,F4\n1,2\n3\n")

    def test_empty_input(self):
        with pytest.raises(EmptyFile):
            parse_eeg_csv(b"")
        with pytest.raises(EmptyFile):
            parse_eeg_csv(b"# just a comment\n")

    def test_header_only_gives_zero_samples(self):
        rec = parse_eeg_csv(b"AF3,F4\n")
        assert rec.n_samples == 0

    def test_round_trip(self):
        spec = SynthSpec(
            components=(SynthComponent("AF3", 9.5, 1.25, 0.3),),
            noise_std=0.7,
            duration=2.0,
            sample_rate=128.0,
        )
        rec = generate_synthetic_eeg(spec, seed=5)
        again = parse_eeg_csv(write_eeg_csv(rec))
        assert again == rec

    def test_round_trip_random_records(self):
        rng = np.random.default_rng(42)
        for _ in range(5):
            rec = EegRecord(
                ("AF3", "F7", "O1"),
                rng.normal(size=(3, 17)) * 100,
                sample_rate=float(rng.integers(1, 512)),
            )
            assert parse_eeg_csv(write_eeg_csv(rec)) == rec


class TestEegRecordInvariants:
    def test_rejects_mismatched_lengths(self):
        with pytest.raises(ValueError):
            EegRecord(("A1",), np.zeros((2, 4)), 128.0)

    def test_rejects_duplicate_labels(self):
        with pytest.raises(ValueError):
            EegRecord(("AF3", "AF3"), np.zeros((2, 4)), 128.0)

    def test_rejects_bad_rate(self):
        with pytest.raises(ValueError):
            EegRecord(("AF3",), np.zeros((1, 4)), 0.0)


class TestParseBlinkTrace:
    def test_minimal_trace(self):
        trace = parse_blink_trace(b"0,open\n5,closed\n9,open\n#duration=60\n")
        assert len(trace.events) == 3
        assert trace.duration == 60.0
        assert trace.events[1] == BlinkEvent(5.0, EyeState.CLOSED)

    def test_duration_defaults_to_last_event(self):
        trace = parse_blink_trace(b"0,open\n4,closed\n")
        assert trace.duration == 4.0

    def test_repeated_state(self):
        with pytest.raises(RepeatedState):
            parse_blink_trace(b"0,open\n1,open\n")

    def test_empty(self):
        with pytest.raises(EmptyFile):
            parse_blink_trace(b"")

    def test_unknown_state(self):
        with pytest.raises(UnknownState):
            parse_blink_trace(b"0,dozing\n")

    def test_non_monotonic(self):
        with pytest.raises(NonMonotonicTimestamps):
            parse_blink_trace(b"0,open\n5,closed\n5,open\n")

    def test_rejects_random_alternation_violations(self):
        rng = np.random.default_rng(7)
        for _ in range(50):
            n = int(rng.integers(2, 12))
            times = np.cumsum(rng.uniform(0.5, 2.0, size=n))
            states = ["open" if i % 2 == 0 else "closed" for i in range(n)]
            corrupt = int(rng.integers(1, n))
            states[corrupt] = states[corrupt - 1]
            body = "\n".join(f"{t},{s}" for t, s in zip(times, states))
            with pytest.raises(RepeatedState):
                parse_blink_trace(body.encode())

    def test_state_at(self):
        trace = parse_blink_trace(b"0,open\n5,closed\n9,open\n#duration=60\n")
        assert trace.state_at(0.0) is EyeState.OPEN
        assert trace.state_at(5.0) is EyeState.CLOSED
        assert trace.state_at(8.99) is EyeState.CLOSED
        assert trace.state_at(30.0) is EyeState.OPEN

    def test_round_trip(self):
        trace = parse_blink_trace(b"0,open\n5,closed\n9,open\n#duration=60\n")
        assert parse_blink_trace(write_blink_trace(trace)) == trace


class TestGenerateSyntheticEeg:
    def test_alpha_component_dominates(self):
        spec = SynthSpec(
            components=(SynthComponent("AF3", 10.0, 1.0),),
            noise_std=0.0, duration=20.0, sample_rate=128.0,
        )
        rec = generate_synthetic_eeg(spec, seed=1)
        x = rec.channel("AF3")
        alpha = band_power(x, 128.0, ALPHA)
        assert alpha >= 100 * max(band_power(x, 128.0, THETA), 1e-300)
        assert alpha >= 100 * max(band_power(x, 128.0, BETA), 1e-300)

    def test_zero_spec_is_all_zero(self):
        rec = generate_synthetic_eeg(SynthSpec(noise_std=0.0, duration=1.0), seed=9)
        assert rec.labels == CANONICAL_CHANNELS
        assert np.count_nonzero(rec.data) == 0

    def test_deterministic(self):
        spec = SynthSpec(
            components=(SynthComponent("F3", 6.0, 2.0),),
            noise_std=1.0, duration=3.0, sample_rate=128.0,
        )
        a = generate_synthetic_eeg(spec, seed=123)
        b = generate_synthetic_eeg(spec, seed=123)
        assert a == b

    def test_aliased_component(self):
        spec = SynthSpec(
            components=(SynthComponent("AF3", 64.0, 1.0),),
            duration=1.0, sample_rate=128.0,
        )
        with pytest.raises(AliasedComponent):
            generate_synthetic_eeg(spec, seed=0)

    def test_spectral_concentration(self):
        # A single bin-aligned component keeps >= 99% of non-DC energy in
        # the two bins nearest its frequency.
        spec = SynthSpec(
            components=(SynthComponent("O1", 8.0, 1.0),),
            noise_std=0.0, duration=2.0, sample_rate=64.0,
        )
        rec = generate_synthetic_eeg(spec, seed=3)
        bins = np.fft.rfft(rec.channel("O1"))
        energy = np.abs(bins) ** 2
        energy[0] = 0.0
        freqs = np.fft.rfftfreq(rec.n_samples, 1 / 64.0)
        nearest = np.argsort(np.abs(freqs - 8.0))[:2]
        assert energy[nearest].sum() >= 0.99 * energy.sum()

    def test_unnamed_channels_are_pure_noise(self):
        spec = SynthSpec(
            components=(SynthComponent("AF3", 10.0, 1.0),),
            noise_std=0.5, duration=2.0, sample_rate=128.0,
        )
        rec = generate_synthetic_eeg(spec, seed=21)
        assert abs(rec.channel("P7").std() - 0.5) < 0.1
