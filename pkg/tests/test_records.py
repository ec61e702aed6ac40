import xml.etree.ElementTree as ET

import numpy as np
import pytest

from regioner.harness.records import (
    CSV_HEADER,
    ExperimentRecord,
    emit,
    read_csv,
    sort_records,
    write_csv,
    write_svg,
)


def _rec(**kw):
    base = dict(experiment="demo", n=100, quantity="q", value=1.5, seed=3, wall_ms=0.0)
    base.update(kw)
    return ExperimentRecord(**base)


class TestCsv:
    def test_single_record(self, tmp_path):
        path = write_csv([_rec()], tmp_path / "out.csv")
        lines = path.read_text().split("\n")
        assert lines[0] == CSV_HEADER
        assert lines[1] == "demo,100,q,1.5,3,0"
        assert lines[2] == ""

    def test_round_trip(self, tmp_path):
        records = [
            _rec(n=100, quantity="a", value=np.pi),
            _rec(n=200, quantity="b", value=1.0 / 3.0, wall_ms=12.25),
        ]
        path = write_csv(records, tmp_path / "out.csv")
        back = read_csv(path)
        assert back == sort_records(records)

    def test_seventeen_digit_round_trip(self, tmp_path):
        value = 0.1234567890123456789
        path = write_csv([_rec(value=value)], tmp_path / "out.csv")
        assert read_csv(path)[0].value == value

    def test_lf_line_endings(self, tmp_path):
        path = write_csv([_rec()], tmp_path / "out.csv")
        raw = path.read_bytes()
        assert b"\r" not in raw and raw.endswith(b"\n")

    def test_sorted_independent_of_input_order(self, tmp_path):
        a = [_rec(n=200), _rec(n=100)]
        b = [_rec(n=100), _rec(n=200)]
        pa = write_csv(a, tmp_path / "a.csv")
        pb = write_csv(b, tmp_path / "b.csv")
        assert pa.read_bytes() == pb.read_bytes()

    def test_empty_records_rejected(self, tmp_path):
        with pytest.raises(ValueError):
            write_csv([], tmp_path / "out.csv")

    def test_unwritable_path(self, tmp_path):
        with pytest.raises(OSError):
            write_csv([_rec()], tmp_path / "missing_dir" / "out.csv")

    def test_non_finite_value_rejected(self):
        with pytest.raises(ValueError):
            _rec(value=float("nan"))

    def test_header_check_on_read(self, tmp_path):
        bad = tmp_path / "bad.csv"
        bad.write_text("nope\n")
        with pytest.raises(ValueError):
            read_csv(bad)


class TestSvg:
    def _records(self):
        out = []
        for n in (100, 1000, 10000):
            out.append(_rec(n=n, quantity="alpha", value=1.0 / n))
            out.append(_rec(n=n, quantity="beta", value=2.0 / n))
        return out

    def test_well_formed_xml(self, tmp_path):
        path = write_svg(self._records(), tmp_path / "plot.svg")
        root = ET.parse(path).getroot()
        assert root.tag.endswith("svg")

    def test_one_polyline_per_quantity(self, tmp_path):
        path = write_svg(self._records(), tmp_path / "plot.svg")
        root = ET.parse(path).getroot()
        polylines = [e for e in root.iter() if e.tag.endswith("polyline")]
        assert len(polylines) == 2

    def test_log_x_positions(self, tmp_path):
        path = write_svg(self._records(), tmp_path / "plot.svg")
        root = ET.parse(path).getroot()
        poly = next(e for e in root.iter() if e.tag.endswith("polyline"))
        xs = [float(pt.split(",")[0]) for pt in poly.attrib["points"].split()]
        # Decade spacing is uniform on a log axis.
        assert xs[1] - xs[0] == pytest.approx(xs[2] - xs[1], rel=1e-6)


class TestEmit:
    def test_dispatch(self, tmp_path):
        assert emit([_rec()], "csv", tmp_path / "o.csv").exists()
        assert emit([_rec()], "svg", tmp_path / "o.svg").exists()

    def test_unknown_format(self, tmp_path):
        with pytest.raises(ValueError):
            emit([_rec()], "parquet", tmp_path / "o.parquet")
