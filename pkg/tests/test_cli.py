import numpy as np
import pytest

from regioner.harness.cli import main, parse_kernel, parse_region


@pytest.fixture
def point_file(tmp_path):
    f = tmp_path / "pts.txt"
    f.write_text("0.0 0.0\n1.0 0.0\n2.0 0.0\n")
    return f


class TestSpecParsing:
    def test_kernel_specs(self):
        assert parse_kernel("radial:0.08").kind == "radial"
        assert parse_kernel("gaussian:0.5").param == 0.5
        assert parse_kernel("knn:100").param == 100

    def test_kernel_spec_errors(self):
        with pytest.raises(ValueError):
            parse_kernel("radial")
        with pytest.raises(ValueError):
            parse_kernel("sobolev:1.0")

    def test_region_specs(self):
        spec = parse_region("0.5,0.25:0.05")
        assert spec.center.tolist() == [0.5, 0.25]
        assert spec.radius == 0.05

    def test_region_spec_errors(self):
        with pytest.raises(ValueError):
            parse_region("0.5,0.25")


class TestErCommand:
    def test_path_resistance(self, point_file, capsys):
        rc = main([
            "er", "--points", str(point_file), "--kernel", "radial:1.5",
            "--scaling", "none", "--source", "0,0:0.1", "--sink", "2,0:0.1",
        ])
        assert rc == 0
        out = capsys.readouterr().out
        value = float(out.split("effective resistance:")[1].split()[0])
        assert value == pytest.approx(2.0, rel=1e-10)

    def test_voltage_dump_and_reduced_dump(self, point_file, tmp_path, capsys):
        vpath = tmp_path / "volts.csv"
        rpath = tmp_path / "reduced.txt"
        rc = main([
            "er", "--points", str(point_file), "--kernel", "radial:1.5",
            "--source", "0,0:0.1", "--sink", "2,0:0.1",
            "--dump-voltage", str(vpath), "--debug-reduced", str(rpath),
        ])
        assert rc == 0
        lines = vpath.read_text().strip().split("\n")
        assert lines[0] == "node_index,x0,x1,voltage"
        assert len(lines) == 4
        mat = np.loadtxt(rpath)
        assert mat.shape == (3, 3)
        assert np.abs(mat.sum(axis=1)).max() < 1e-12

    def test_fixed_point_solver_flag(self, point_file, capsys):
        rc = main([
            "er", "--points", str(point_file), "--kernel", "radial:1.5",
            "--source", "0,0:0.1", "--sink", "2,0:0.1",
            "--solver", "fixed-point", "--tol", "1e-11", "--max-iter", "50000",
        ])
        assert rc == 0
        out = capsys.readouterr().out
        assert "fixed-point solve" in out

    def test_fixed_point_iteration_cap_propagates(self, point_file):
        from regioner.errors import ConvergenceError

        with pytest.raises(ConvergenceError):
            main([
                "er", "--points", str(point_file), "--kernel", "radial:1.5",
                "--source", "0,0:0.1", "--sink", "2,0:0.1",
                "--solver", "fixed-point", "--tol", "1e-13", "--max-iter", "1",
            ])

    def test_empty_region_fails(self, point_file):
        from regioner.errors import EmptyRegionError

        with pytest.raises(EmptyRegionError):
            main([
                "er", "--points", str(point_file), "--kernel", "radial:1.5",
                "--source", "9,9:0.1", "--sink", "2,0:0.1",
            ])

    def test_missing_required_input(self, point_file):
        with pytest.raises(SystemExit):
            main(["er", "--points", str(point_file), "--kernel", "radial:1.5",
                  "--source", "0,0:0.1"])

    def test_flags_from_config_file(self, point_file, tmp_path, capsys):
        cfg = tmp_path / "er.ini"
        cfg.write_text(
            "[er]\n"
            f"points = {point_file}\n"
            "kernel = radial:1.5\n"
            "source = 0,0:0.1\n"
            "sink = 2,0:0.1\n"
        )
        assert main(["er", "--config", str(cfg)]) == 0
        out = capsys.readouterr().out
        value = float(out.split("effective resistance:")[1].split()[0])
        assert value == pytest.approx(2.0, rel=1e-10)


class TestCoverCommand:
    def test_build_and_dump(self, tmp_path, capsys):
        rng = np.random.default_rng(1)
        f = tmp_path / "pts.txt"
        np.savetxt(f, rng.random((200, 2)))
        dump = tmp_path / "cover.csv"
        rc = main([
            "cover", "--points", str(f), "--alpha", "0.2",
            "--dump", str(dump), "--out", str(tmp_path),
        ])
        assert rc == 0
        lines = dump.read_text().strip().split("\n")
        assert lines[0] == "center_index,x0,x1,gamma,cell_count"
        counts = [int(line.split(",")[-1]) for line in lines[1:]]
        assert sum(counts) == 200


class TestExperimentCommands:
    def test_vonluxburg_writes_outputs(self, tmp_path):
        rc = main([
            "vonluxburg", "--sweep", "150,220", "--pair-count", "6",
            "--region-pair-count", "4", "--seed", "3",
            "--out", str(tmp_path), "--format", "csv,svg", "--no-timing",
        ])
        assert rc == 0
        assert (tmp_path / "vonluxburg.csv").exists()
        assert (tmp_path / "vonluxburg.svg").exists()

    def test_config_file_and_flag_override(self, tmp_path):
        cfg = tmp_path / "run.ini"
        cfg.write_text(
            "[common]\nseed = 3\ntiming = false\n\n"
            "[vonluxburg]\nsweep = 150, 220\npair_count = 6\nregion_pair_count = 4\n"
        )
        out_a = tmp_path / "a"
        out_b = tmp_path / "b"
        assert main(["vonluxburg", "--config", str(cfg), "--out", str(out_a)]) == 0
        # The flag overrides the file sweep: only one sweep point in b.
        assert main([
            "vonluxburg", "--config", str(cfg), "--out", str(out_b), "--sweep", "150",
        ]) == 0
        rows_a = (out_a / "vonluxburg.csv").read_text().strip().split("\n")
        rows_b = (out_b / "vonluxburg.csv").read_text().strip().split("\n")
        assert len(rows_a) == 1 + 8
        assert len(rows_b) == 1 + 4

    def test_rerun_is_byte_identical(self, tmp_path):
        args = [
            "swissroll", "--sweep", "500,1000", "--seed", "11",
            "--format", "csv", "--no-timing",
        ]
        out_a, out_b, out_c = (tmp_path / s for s in "abc")
        assert main(args + ["--out", str(out_a)]) == 0
        assert main(args + ["--out", str(out_b)]) == 0
        assert main(args + ["--out", str(out_c), "--threads", "3"]) == 0
        data = (out_a / "swissroll.csv").read_bytes()
        assert (out_b / "swissroll.csv").read_bytes() == data
        assert (out_c / "swissroll.csv").read_bytes() == data

    def test_unknown_config_key_rejected(self, tmp_path):
        cfg = tmp_path / "run.ini"
        cfg.write_text("[vonluxburg]\nwavelets = 3\n")
        with pytest.raises(ValueError, match="wavelets"):
            main(["vonluxburg", "--config", str(cfg), "--out", str(tmp_path)])
