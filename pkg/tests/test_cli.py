import csv
import io

import numpy as np
import pytest

from shiftbf.bilateral import direct_bf, expansion_range
from shiftbf.cli import CSV_HEADER, BenchRecord, main
from shiftbf.image import checkerboard
from shiftbf.kernels import raised_cosine_expansion, select_plan
from shiftbf.maxfilter import compute_T
from shiftbf.pgmio import load_pgm, save_pgm
from shiftbf.spatial import Box, box_filter


@pytest.fixture
def checker_pgm(tmp_path):
    path = tmp_path / "checker.pgm"
    save_pgm(checkerboard(64, 64, 8), path)
    return path


def read_float_dump(path, shape):
    return np.frombuffer(path.read_bytes(), dtype="<f8").reshape(shape)


class TestFilterCommand:
    @pytest.mark.parametrize("sigma_r", [15, 25, 60])
    def test_golden_runs_match_direct_oracle(self, checker_pgm, tmp_path, sigma_r):
        out_pgm = tmp_path / "out.pgm"
        out_raw = tmp_path / "out.f64"
        rc = main(["filter", "--input", str(checker_pgm), "--output", str(out_pgm),
                   "--sigma-s", "3", "--sigma-r", str(sigma_r), "--epsilon", "0",
                   "--spatial", "box", "--radius", "3",
                   "--float-out", str(out_raw)])
        assert rc == 0
        img = load_pgm(checker_pgm)
        plan = select_plan(compute_T(img, 3), sigma_r, 0.0)
        oracle = direct_bf(img, Box(3), expansion_range(raised_cosine_expansion(plan)))
        produced = read_float_dump(out_raw, img.shape)
        np.testing.assert_allclose(produced, oracle, rtol=1e-8, atol=1e-8)
        # PGM output is the quantized version of the raw samples
        np.testing.assert_array_equal(load_pgm(out_pgm),
                                      np.floor(np.clip(produced, 0, 255) + 0.5))

    def test_huge_sigma_r_is_spatial_only(self, checker_pgm, tmp_path):
        out_raw = tmp_path / "out.f64"
        rc = main(["filter", "--input", str(checker_pgm),
                   "--output", str(tmp_path / "out.pgm"),
                   "--sigma-s", "3", "--sigma-r", "1e9",
                   "--spatial", "box", "--radius", "2",
                   "--float-out", str(out_raw)])
        assert rc == 0
        img = load_pgm(checker_pgm)
        np.testing.assert_allclose(read_float_dump(out_raw, img.shape),
                                   box_filter(img, 2), atol=1e-6)

    def test_methods_agree_loosely(self, checker_pgm, tmp_path):
        outputs = {}
        for method in ("shiftable", "direct"):
            raw = tmp_path / f"{method}.f64"
            rc = main(["filter", "--input", str(checker_pgm),
                       "--output", str(tmp_path / f"{method}.pgm"),
                       "--sigma-s", "3", "--sigma-r", "40", "--epsilon", "0",
                       "--spatial", "box", "--radius", "3", "--method", method,
                       "--float-out", str(raw)])
            assert rc == 0
            outputs[method] = read_float_dump(raw, (64, 64))
        # direct uses the true Gaussian; shiftable its minimum-order
        # surrogate, so they agree only to the kernel approximation error
        assert np.abs(outputs["shiftable"] - outputs["direct"]).max() <= 0.05 * 255

    def test_deterministic_outputs(self, checker_pgm, tmp_path):
        raws = []
        for tag in ("a", "b"):
            raw = tmp_path / f"{tag}.f64"
            main(["filter", "--input", str(checker_pgm),
                  "--output", str(tmp_path / f"{tag}.pgm"),
                  "--sigma-s", "2", "--sigma-r", "12", "--epsilon", "0.01",
                  "--spatial", "box", "--radius", "2", "--float-out", str(raw)])
            raws.append(raw.read_bytes())
        assert raws[0] == raws[1]
        assert (tmp_path / "a.pgm").read_bytes() == (tmp_path / "b.pgm").read_bytes()

    def test_record_line_and_csv(self, checker_pgm, tmp_path, capsys):
        csv_path = tmp_path / "records.csv"
        rc = main(["filter", "--input", str(checker_pgm),
                   "--output", str(tmp_path / "out.pgm"),
                   "--sigma-s", "2", "--sigma-r", "30", "--epsilon", "0.05",
                   "--spatial", "box", "--radius", "2", "--csv", str(csv_path)])
        assert rc == 0
        line = capsys.readouterr().out.strip()
        assert line.startswith("method=shiftable")
        assert "retained=" in line
        rows = list(csv.reader(csv_path.open()))
        assert rows[0] == CSV_HEADER
        record = BenchRecord.from_csv_row(rows[1])
        assert record.method == "shiftable"
        assert record.retained_terms == record.N - 2 * record.M + 1


class TestComputeT:
    def test_constant_image(self, tmp_path, capsys):
        path = tmp_path / "c.pgm"
        save_pgm(np.full((16, 16), 9.0), path)
        assert main(["compute-t", "--input", str(path), "--radius", "4"]) == 0
        assert capsys.readouterr().out.startswith("T=0 ")

    def test_checker(self, checker_pgm, capsys):
        assert main(["compute-t", "--input", str(checker_pgm), "--radius", "2"]) == 0
        assert capsys.readouterr().out.startswith("T=255 ")


class TestTables:
    def test_n0_table_exact(self, capsys):
        assert main(["tables", "--which", "n0"]) == 0
        rows = list(csv.reader(io.StringIO(capsys.readouterr().out)))
        assert rows[0] == ["sigma_r", "N0"]
        values = {int(r[0]): int(r[1]) for r in rows[1:]}
        assert values == {5: 1053, 10: 263, 20: 66, 30: 29,
                          40: 16, 60: 7, 80: 4, 100: 3}

    def test_truncation_table_shrinks_order(self, capsys):
        assert main(["tables", "--which", "truncation"]) == 0
        rows = list(csv.reader(io.StringIO(capsys.readouterr().out)))
        assert rows[0] == ["sigma_r", "N_before", "N_after", "pct_dropped"]
        for row in rows[1:]:
            assert int(row[2]) < int(row[1]) + 1


class TestBench:
    def test_csv_round_trip(self, checker_pgm, tmp_path):
        csv_path = tmp_path / "bench.csv"
        rc = main(["bench", "--input", str(checker_pgm), "--sigma-s", "2,3",
                   "--sigma-r", "40", "--repeats", "1", "--epsilon", "0.01",
                   "--csv", str(csv_path)])
        assert rc == 0
        rows = list(csv.reader(csv_path.open()))
        assert rows[0] == CSV_HEADER
        assert len(rows) == 3
        for row in rows[1:]:
            record = BenchRecord.from_csv_row(row)
            assert record.to_csv_row() == row
            assert record.wall_millis > 0

    def test_with_direct_records_mse(self, checker_pgm, capsys):
        rc = main(["bench", "--input", str(checker_pgm), "--sigma-s", "2",
                   "--sigma-r", "50", "--repeats", "1", "--spatial", "box",
                   "--with-direct"])
        assert rc == 0
        rows = list(csv.reader(io.StringIO(capsys.readouterr().out)))
        record = BenchRecord.from_csv_row(rows[1])
        assert record.mse_vs_direct is not None
        assert record.mse_vs_direct >= 0


class TestRecordInvariants:
    def test_round_trip_preserves_floats(self):
        record = BenchRecord(method="shiftable", sigma_s=2.5, sigma_r=1 / 3,
                             epsilon=0.005, T=213.7, N=41, M=3,
                             retained_terms=36, wall_millis=12.3456789,
                             mse_vs_direct=None)
        assert BenchRecord.from_csv_row(record.to_csv_row()) == record

    def test_retained_terms_invariant(self):
        with pytest.raises(Exception):
            BenchRecord(method="x", sigma_s=1, sigma_r=1, epsilon=0, T=0,
                        N=10, M=2, retained_terms=5, wall_millis=1.0)


class TestExitCodes:
    def test_flag_error_is_2(self, checker_pgm, tmp_path):
        with pytest.raises(SystemExit) as err:
            main(["filter", "--input", str(checker_pgm)])  # missing required flags
        assert err.value.code == 2
        with pytest.raises(SystemExit) as err:
            main(["filter", "--input", str(checker_pgm),
                  "--output", str(tmp_path / "o.pgm"),
                  "--sigma-s", "-1", "--sigma-r", "10"])
        assert err.value.code == 2
        with pytest.raises(SystemExit) as err:
            main(["filter", "--input", str(checker_pgm),
                  "--output", str(tmp_path / "o.pgm"),
                  "--sigma-s", "3", "--sigma-r", "10", "--epsilon", "1.5"])
        assert err.value.code == 2

    def test_missing_input_is_3(self, tmp_path):
        rc = main(["compute-t", "--input", str(tmp_path / "nope.pgm"),
                   "--radius", "2"])
        assert rc == 3

    def test_parse_error_is_3(self, tmp_path):
        bad = tmp_path / "bad.pgm"
        bad.write_bytes(b"P7\n1 1\n255\n\x00")
        rc = main(["compute-t", "--input", str(bad), "--radius", "2"])
        assert rc == 3

    def test_polynomial_cap_is_4(self, checker_pgm, tmp_path):
        rc = main(["filter", "--input", str(checker_pgm),
                   "--output", str(tmp_path / "o.pgm"),
                   "--sigma-s", "3", "--sigma-r", "0.02",
                   "--kernel", "poly", "--spatial", "box", "--radius", "2"])
        assert rc == 4

    def test_backend_flag(self, checker_pgm, capsys):
        rc = main(["--backend", "python", "compute-t",
                   "--input", str(checker_pgm), "--radius", "1"])
        assert rc == 0
        assert capsys.readouterr().out.startswith("T=255")
