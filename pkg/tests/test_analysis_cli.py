import json
import math

import numpy as np
import pytest

import neelwall as nw
from neelwall.cli import main
from neelwall.io import result_to_dict, table_to_csv


@pytest.fixture(scope="module")
def small_solve():
    grid = nw.make_grid(20.0, 512)
    params = nw.ModelParams(1.0, 0.0)
    result = nw.minimize(nw.reference_profile(grid, params))
    assert result.converged
    result.tail_amplitude = nw.decay_amplitude(result.profile).amplitude_tailfit
    return result


class TestVerify:
    def test_converged_solve_all_flags(self, small_solve):
        report = nw.verify(small_solve)
        assert report.monotone_strict
        assert report.monotone_margin > 0
        assert report.violation_index is None
        assert report.range_ok
        assert report.symmetry_defect <= 10 * 1e-6
        assert report.residual_sup <= 1e-6
        assert report.decay.amplitude_multipole > 0
        assert report.energy.total == small_solve.energy.total

    def test_non_monotone_negative_control(self, small_solve):
        v = small_solve.profile.values.copy()
        v[100], v[101] = v[101], v[100]  # swap two samples
        doctored = nw.SolveResult(
            profile=small_solve.profile.with_values(v),
            energy=small_solve.energy,
            residual_sup=small_solve.residual_sup,
            iterations=small_solve.iterations,
            converged=True,
        )
        report = nw.verify(doctored)
        assert not report.monotone_strict
        assert report.violation_index == 100
        assert report.monotone_margin <= 0  # flag consistent with margin

    def test_unconverged_rejected(self, small_solve):
        bad = nw.SolveResult(
            profile=small_solve.profile,
            energy=small_solve.energy,
            residual_sup=1.0,
            iterations=1,
            converged=False,
        )
        with pytest.raises(ValueError):
            nw.verify(bad)


class TestWallWidth:
    def test_width_positive_and_translation_invariant(self, small_solve):
        w = nw.wall_width(small_solve.profile)
        assert w > 0
        p = small_solve.profile
        shifted = np.interp(p.grid.points + 2 * p.grid.spacing,
                            p.grid.points, p.values)
        shifted[0] = p.params.left_plateau
        shifted[-1] = p.params.right_plateau
        w2 = nw.wall_width(nw.Profile(p.grid, shifted, p.params))
        assert w2 == pytest.approx(w, rel=1e-6)


class TestSweep:
    def test_empty_inputs(self):
        table = nw.sweep([], [0.0])
        assert len(table) == 0
        table = nw.sweep([1.0], [])
        assert len(table) == 0

    def test_validation(self):
        with pytest.raises(ValueError):
            nw.sweep([-1.0], [0.0])
        with pytest.raises(ValueError):
            nw.sweep([1.0], [1.0])

    def test_rows_lexicographic_and_converged(self):
        table = nw.sweep([1.0, 0.5], [0.3, 0.0],
                         half_length=20.0, n_points=512)
        cells = [(r.nu, r.h) for r in table]
        assert cells == [(0.5, 0.0), (0.5, 0.3), (1.0, 0.0), (1.0, 0.3)]
        assert table.all_converged
        for r in table:
            assert r.residual_sup <= 1e-6
            assert r.wall_width > 0

    def test_serial_equals_parallel(self):
        kwargs = dict(half_length=20.0, n_points=512)
        t1 = nw.sweep([0.5, 1.0], [0.0, 0.2], parallel=False, **kwargs)
        t2 = nw.sweep([0.5, 1.0], [0.0, 0.2], parallel=True, **kwargs)
        assert t1.rows == t2.rows


class TestEmitLoad:
    def test_result_round_trip(self, small_solve, tmp_path):
        path = tmp_path / "result.json"
        nw.emit(small_solve, "json", str(path))
        loaded = nw.load_result(str(path))
        assert np.array_equal(loaded.profile.values, small_solve.profile.values)
        assert loaded.energy.total == small_solve.energy.total
        assert loaded.residual_sup == small_solve.residual_sup
        assert loaded.iterations == small_solve.iterations
        assert loaded.converged == small_solve.converged
        assert loaded.tail_amplitude == small_solve.tail_amplitude

    def test_deterministic_output(self, small_solve, tmp_path):
        p1, p2 = tmp_path / "a.json", tmp_path / "b.json"
        nw.emit(small_solve, "json", str(p1))
        nw.emit(small_solve, "json", str(p2))
        assert p1.read_bytes() == p2.read_bytes()

    def test_independent_solves_bitwise_identical(self, tmp_path):
        paths = []
        for name in ("a.json", "b.json"):
            result = nw.solve_cell(1.0, 0.2, nw.SolveOptions(),
                                   half_length=20.0, n_points=512)
            path = tmp_path / name
            nw.emit(result, "json", str(path))
            paths.append(path)
        assert paths[0].read_bytes() == paths[1].read_bytes()

    def test_csv_header_and_round_trip(self, tmp_path):
        table = nw.sweep([1.0], [0.0], half_length=20.0, n_points=512)
        path = tmp_path / "sweep.csv"
        nw.emit(table, "csv", str(path))
        text = path.read_text()
        assert text.splitlines()[0] == ("nu,h,energy_total,wall_width,"
                                        "amplitude_multipole,amplitude_tailfit,"
                                        "residual_sup,converged")
        loaded = nw.load_table(str(path))
        assert loaded.rows == table.rows

    def test_table_json_round_trip(self, tmp_path):
        table = nw.sweep([1.0], [0.0], half_length=20.0, n_points=512)
        path = tmp_path / "sweep.json"
        nw.emit(table, "json", str(path))
        assert nw.load_table(str(path)).rows == table.rows

    def test_invalid_path_names_path(self, small_solve):
        with pytest.raises(OSError, match="no/such/dir"):
            nw.emit(small_solve, "json", "/no/such/dir/out.json")

    def test_result_csv_rejected(self, small_solve, tmp_path):
        with pytest.raises(ValueError):
            nw.emit(small_solve, "csv", str(tmp_path / "x.csv"))

    def test_json_parses_with_stock_loader(self, small_solve, tmp_path):
        path = tmp_path / "result.json"
        nw.emit(small_solve, "json", str(path))
        doc = json.loads(path.read_text())
        assert doc["kind"] == "solve_result"
        assert doc["params"]["nu"] == 1.0
        assert len(doc["profile"]) == small_solve.profile.grid.n_samples

    def test_nan_serialized_as_null(self, small_solve, tmp_path):
        clone = nw.SolveResult(
            profile=small_solve.profile,
            energy=small_solve.energy,
            residual_sup=small_solve.residual_sup,
            iterations=small_solve.iterations,
            converged=small_solve.converged,
            tail_amplitude=math.nan,
        )
        path = tmp_path / "result.json"
        nw.emit(clone, "json", str(path))
        assert math.isnan(nw.load_result(str(path)).tail_amplitude)


class TestCli:
    def test_solve_and_verify(self, tmp_path, capsys):
        out = tmp_path / "solve.json"
        code = main(["solve", "--nu", "1", "--h", "0",
                     "--half-length", "20", "--points", "512",
                     "--out", str(out)])
        assert code == 0
        assert out.exists()
        text = capsys.readouterr().out
        assert "converged: True" in text

        code = main(["verify", "--in", str(out)])
        assert code == 0
        text = capsys.readouterr().out
        assert "PASS" in text and "FAIL" not in text

    def test_sweep_csv(self, tmp_path, capsys):
        out = tmp_path / "sweep.csv"
        code = main(["sweep", "--nu-list", "1", "--h-list", "0", "0.3",
                     "--half-length", "20", "--points", "512",
                     "--out", str(out), "--format", "csv"])
        assert code == 0
        assert len(nw.load_table(str(out))) == 2

    def test_green_output(self, tmp_path):
        out = tmp_path / "green.json"
        code = main(["green", "--nu", "1", "--h", "0",
                     "--xmax", "5", "--samples", "11", "--out", str(out)])
        assert code == 0
        doc = json.loads(out.read_text())
        assert doc["kind"] == "green_samples"
        assert len(doc["x"]) == 11
        gs = np.array(doc["g"])
        assert np.all(gs > 0)
        assert np.allclose(gs, gs[::-1])

    def test_unconverged_exit_code(self, capsys):
        code = main(["solve", "--nu", "1", "--h", "0",
                     "--half-length", "20", "--points", "512",
                     "--max-iter", "2"])
        assert code == 2

    def test_usage_error_exit_code(self):
        with pytest.raises(SystemExit) as err:
            main(["solve"])  # missing required --nu
        assert err.value.code == 1

    def test_io_error_exit_code(self, capsys):
        code = main(["verify", "--in", "/no/such/file.json"])
        assert code == 1
        assert "error:" in capsys.readouterr().err

    def test_flags_not_abbreviated_ambiguously(self, tmp_path):
        # --h and --half-length must both resolve exactly
        code = main(["solve", "--nu", "1", "--h", "0.2",
                     "--half-length", "20", "--points", "512"])
        assert code == 0


class TestSerializationFormat:
    def test_floats_have_17_significant_digits(self, small_solve):
        doc = result_to_dict(small_solve)
        text = table_to_csv(nw.SweepTable(rows=[nw.SweepRow(
            nu=1.0, h=0.0, energy_total=math.pi, wall_width=1.0,
            amplitude_multipole=1.0, amplitude_tailfit=1.0,
            residual_sup=1e-7, converged=True)]))
        assert "3.1415926535897931" in text
        assert float("3.1415926535897931") == math.pi
