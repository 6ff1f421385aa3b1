import struct

import numpy as np
import pytest

from eegtcnet import TrialSet, extract_window, load_trials, save_trials
from eegtcnet.errors import BadMagicError, FormatError, TruncatedPayloadError, VersionMismatchError


def make_trials(n=6, c=4, t=32, seed=0, n_classes=4):
    rng = np.random.default_rng(seed)
    return TrialSet(
        rng.standard_normal((n, c, t)).astype(np.float32),
        rng.integers(0, n_classes, n),
        250.0,
        n_classes,
    )


class TestTrialSet:
    def test_geometry_properties(self):
        ts = make_trials(5, 3, 17)
        assert (ts.n_trials, ts.C, ts.T) == (5, 3, 17)

    def test_label_range_enforced(self):
        with pytest.raises(ValueError):
            TrialSet(np.zeros((2, 1, 4), np.float32), np.array([0, 4]), 250.0, 4)

    def test_non_finite_rejected(self):
        bad = np.zeros((1, 1, 4), np.float32)
        bad[0, 0, 0] = np.nan
        with pytest.raises(ValueError):
            TrialSet(bad, np.zeros(1, np.int64), 250.0, 4)


class TestEtrlRoundTrip:
    def test_save_load_save_identical(self):
        blob = save_trials(make_trials())
        assert save_trials(load_trials(blob)) == blob

    def test_values_preserved(self):
        ts = make_trials(3, 2, 9, seed=7)
        back = load_trials(save_trials(ts))
        np.testing.assert_array_equal(back.data, ts.data)
        np.testing.assert_array_equal(back.labels, ts.labels)
        assert back.fs == ts.fs
        assert back.n_classes == ts.n_classes

    def test_bad_magic(self):
        with pytest.raises(BadMagicError):
            load_trials(b"XXXX" + b"\x00" * 40)

    def test_version_mismatch(self):
        blob = bytearray(save_trials(make_trials()))
        blob[4:8] = struct.pack("<I", 3)
        with pytest.raises(VersionMismatchError):
            load_trials(bytes(blob))

    def test_truncated(self):
        blob = save_trials(make_trials())
        with pytest.raises(TruncatedPayloadError):
            load_trials(blob[:-4])

    def test_trailing_bytes(self):
        blob = save_trials(make_trials())
        with pytest.raises(FormatError):
            load_trials(blob + b"ab")

    def test_out_of_range_label(self):
        ts = make_trials(n_classes=4)
        blob = bytearray(save_trials(ts))
        label_offset = 4 + 4 + 4 + 2 + 4 + 4 + 1
        blob[label_offset] = 200
        with pytest.raises(FormatError):
            load_trials(bytes(blob))


class TestExtractWindow:
    def test_window_indices(self):
        raw = np.arange(2 * 2000, dtype=np.float32).reshape(2, 2000)
        win = extract_window(raw, cue_sample=500, fs=250.0)
        assert win.shape == (2, 1125)
        np.testing.assert_array_equal(win, raw[:, 375:1500])

    def test_window_always_1125_samples(self):
        raw = np.zeros((3, 5000), np.float32)
        for cue in (125, 1000, 3875):
            assert extract_window(raw, cue).shape == (3, 1125)

    def test_out_of_range_cue(self):
        raw = np.zeros((2, 2000), np.float32)
        with pytest.raises(ValueError):
            extract_window(raw, cue_sample=100)
        with pytest.raises(ValueError):
            extract_window(raw, cue_sample=1500)

    def test_wrong_sampling_rate(self):
        raw = np.zeros((2, 4000), np.float32)
        with pytest.raises(ValueError, match="250"):
            extract_window(raw, cue_sample=500, fs=500.0)
