"""Report wire format and determinism guarantees."""

import json

import pytest

from dunkl.report import IdentityReport, reports_from_json, reports_to_csv, reports_to_json


def sample_reports():
    return [
        IdentityReport("alpha-suite", {"alpha": 0.5, "tol": 1e-8}, "grid A", 1e-12, 1e-11, elapsed=0.37),
        IdentityReport("beta-suite", {"alpha": 0.0, "beta": 1.0}, "grid B", 2e-4, 3e-3, elapsed=1.2),
    ]


class TestWireFormat:
    def test_exact_keys(self):
        wire = sample_reports()[0].to_wire()
        assert set(wire) == {"name", "params", "grid", "max_abs_err", "max_rel_err", "elapsed_s"}

    def test_timing_zeroed_by_default(self):
        wire = sample_reports()[0].to_wire()
        assert wire["elapsed_s"] == 0.0
        wire = sample_reports()[0].to_wire(include_timing=True)
        assert wire["elapsed_s"] == 0.37

    def test_roundtrip(self):
        text = reports_to_json(sample_reports())
        back = reports_from_json(text)
        assert back[0].name == "alpha-suite"
        assert back[0].max_rel_err == 1e-11
        assert back[1].params["beta"] == 1.0

    def test_byte_determinism(self):
        a = reports_to_json(sample_reports())
        b = reports_to_json(sample_reports())
        assert a == b

    def test_csv_columns(self):
        text = reports_to_csv(sample_reports())
        header = text.splitlines()[0]
        assert header == "name,params,grid,max_abs_err,max_rel_err,elapsed_s"
        assert len(text.splitlines()) == 3

    def test_float_precision_17_digits(self):
        rep = IdentityReport("x", {}, "", 1.0 / 3.0, 2.0 / 3.0)
        line = reports_to_csv([rep]).splitlines()[1]
        assert "0.33333333333333331" in line

    def test_pass_logic(self):
        rep = IdentityReport("x", {"tol": 1e-6}, "", 0.0, 1e-7)
        assert rep.passed()
        rep = IdentityReport("x", {"tol": 1e-6}, "", 0.0, 1e-5)
        assert not rep.passed()
        rep = IdentityReport("x", {}, "", 0.0, 1.0)
        assert rep.passed()  # no tolerance configured

    def test_negative_errors_rejected(self):
        with pytest.raises(ValueError):
            IdentityReport("x", {}, "", -1.0, 0.0)

    def test_bad_file_rejected(self):
        with pytest.raises(ValueError):
            reports_from_json(json.dumps({"not": "a list"}))
