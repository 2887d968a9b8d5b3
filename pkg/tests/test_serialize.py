import json
import math

import pytest

from beamsquint import ArrayConfig, BandConfig, capacity_threshold_3db, design_codebook
from beamsquint.experiments import SweepResult
from beamsquint.serialize import (codebook_to_csv, codebook_to_json, format_float,
                                  sweep_to_csv, sweep_to_json, to_json)


def small_sweep():
    return SweepResult(name="demo",
                       columns=(("x", "-"), ("y", "Hz")),
                       rows=((0.5, 1e9), (-0.25, 2.5e9)),
                       params={"sweep": "demo", "steps": 2, "flag": True,
                               "nested": {"values": [1, 2.5, "s"]}})


class TestFormatFloat:
    def test_seventeen_significant_digits(self):
        assert format_float(0.5) == "5.0000000000000000e-01"
        assert format_float(2.5 / 73) == "3.4246575342465752e-02"

    def test_lossless_round_trip(self):
        for x in (math.pi, 1 / 3, 0.886 / 64, 1e-300, 123456.789):
            assert float(format_float(x)) == x

    def test_rejects_non_finite(self):
        with pytest.raises(ValueError):
            format_float(float("nan"))
        with pytest.raises(ValueError):
            format_float(float("inf"))


class TestToJson:
    def test_is_valid_json_preserving_order(self):
        text = to_json({"b": 1, "a": [1.5, None, False]})
        doc = json.loads(text)
        assert list(doc) == ["b", "a"]
        assert doc["a"] == [1.5, None, False]

    def test_reserialising_parsed_output_is_identity(self):
        text = to_json({"x": 1 / 3, "rows": [[0.1, 2], [3.0, 4]], "s": "a\"b"})
        assert to_json(json.loads(text)) == text

    def test_rejects_unknown_types(self):
        with pytest.raises(TypeError):
            to_json({"x": object()})


class TestSweepSerialisation:
    def test_csv_layout(self):
        text = sweep_to_csv(small_sweep())
        lines = text.split("\n")
        assert lines[0] == "x[-],y[Hz]"
        assert lines[1].startswith("5.0000000000000000e-01,")
        assert text.endswith("\n")
        assert "\r" not in text

    def test_json_layout(self):
        doc = json.loads(sweep_to_json(small_sweep()))
        assert list(doc) == ["name", "params", "columns", "rows"]
        assert doc["columns"] == [["x", "-"], ["y", "Hz"]]
        assert doc["params"]["nested"]["values"] == [1, 2.5, "s"]


@pytest.fixture(scope="module")
def designed():
    arr = ArrayConfig(8)
    band = BandConfig(b=0.02, n_f=64, snr=1.0)
    cb = design_codebook(1.0, capacity_threshold_3db(band, arr), band, arr)
    return cb, band, arr


class TestCodebookSerialisation:
    def test_field_order_with_ratio(self, designed):
        cb, band, arr = designed
        doc = json.loads(codebook_to_json(cb, band, arr, r=math.sqrt(2) / 2))
        assert list(doc) == ["n", "b", "n_f", "snr", "psi_m", "r", "parity", "beams"]
        assert list(doc["beams"][0]) == ["focus", "left", "right", "width", "phases"]
        assert len(doc["beams"]) == cb.size
        assert all(len(beam["phases"]) == 8 for beam in doc["beams"])

    def test_field_order_with_threshold(self, designed):
        cb, band, arr = designed
        doc = json.loads(codebook_to_json(cb, band, arr))
        assert list(doc) == ["n", "b", "n_f", "snr", "psi_m", "c_t", "parity", "beams"]
        assert doc["c_t"] == cb.c_t

    def test_round_trip_bytes(self, designed):
        cb, band, arr = designed
        text = codebook_to_json(cb, band, arr, r=0.7)
        assert to_json(json.loads(text)) == text

    def test_csv_beam_table(self, designed):
        cb, _, _ = designed
        lines = codebook_to_csv(cb).strip().split("\n")
        assert lines[0] == "focus[-],left[-],right[-],width[-]"
        assert len(lines) == cb.size + 1
