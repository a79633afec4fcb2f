import io

import numpy as np
import pytest

from synpar.bench import cli
from synpar.bench.harness import CSV_HEADER, RunReport, RunRow, RunSpec, emit, run
from synpar.numerics import DenseMatrix, Rng, emit_matrix_market, gen_random_dense

HEADER = "kernel,strategy,threads,size,median_time_ms,speedup,verified,misspeculations,swaps"


def bench(*argv):
    out = io.StringIO()
    code = cli.main(list(argv), out)
    return code, out.getvalue()


def non_timing(csv_text):
    rows = [line.split(",") for line in csv_text.strip().splitlines()]
    return [[c for i, c in enumerate(r) if i not in (4, 5)] for r in rows]


@pytest.fixture
def mtx2(tmp_path):
    p = tmp_path / "two.mtx"
    p.write_text("%%MatrixMarket matrix coordinate real general\n2 2 3\n1 1 2.0\n2 1 4.0\n2 2 1.0\n")
    return str(p)


class TestEmit:
    def test_empty_csv(self):
        assert emit(RunReport()) == HEADER + "\n"
        assert ",".join(CSV_HEADER) == HEADER

    def test_one_row(self):
        row = RunRow("gaussj", "speculative", 4, "100x100", 1.5, 2.0, "exact", 1, 1)
        lines = emit(RunReport([row])).splitlines()
        assert lines == [HEADER, "gaussj,speculative,4,100x100,1.5,2.0,exact,1,1"]

    def test_markdown(self):
        row = RunRow("smvp", "atomic", 2, "n=10", 1.0, 1.0, "within_tol(0.0)")
        lines = emit(RunReport([row]), "md").splitlines()
        assert len(lines) == 3
        assert lines[0].count("|") == len(CSV_HEADER) + 1 and set(lines[1]) <= set("|-")
        assert "within_tol(0.0)" in lines[2]

    def test_unknown_format(self):
        with pytest.raises(ValueError):
            emit(RunReport(), "json")


class TestRun:
    def test_gaussj_planted(self):
        spec = RunSpec("gaussj", ("speculative",), (1,), size=100, gen="zero-pivot", plant=(37,), seed=3, reps=1)
        (row,) = run(spec).rows
        assert (row.verified, row.misspeculations, row.swaps) == ("exact", 1, 1)

    def test_givens_tiled(self):
        spec = RunSpec("givens", ("tiled",), (1, 8), size=300, reps=1)
        rows = run(spec).rows
        assert [r.verified for r in rows] == ["exact", "exact"] and [r.threads for r in rows] == [1, 8]

    def test_smvp_auto_label(self):
        spec = RunSpec("smvp", ("auto",), (4,), size=500, reps=1)
        (row,) = run(spec).rows
        assert row.strategy == "auto→privatized" and row.verified.startswith("within_tol(")

    def test_smvp_auto_single_thread(self):
        (row,) = run(RunSpec("smvp", ("auto",), (1,), size=100, reps=1)).rows
        assert row.strategy == "auto→serial"

    def test_argmax_all(self):
        rows = run(RunSpec("argmax", ("all",), (1, 3), size=5000, reps=1)).rows
        assert [r.strategy for r in rows] == ["critical", "critical", "privatized", "privatized"]
        assert all(r.verified == "exact" for r in rows)

    def test_default_sweep_never_fails(self):
        for kernel in ("smvp", "argmax", "givens", "gaussj"):
            report = run(RunSpec(kernel, ("all",), (1, 2, 4), size=200, reps=1))
            assert not report.failed, kernel

    def test_spec_validation(self, tmp_path):
        with pytest.raises(ValueError):
            RunSpec("fft")
        with pytest.raises(ValueError):
            RunSpec("gaussj", reps=0)
        with pytest.raises(ValueError):
            RunSpec("gaussj", threads=(0,))
        with pytest.raises(FileNotFoundError):
            RunSpec("gaussj", input=str(tmp_path / "missing.mtx"))


class TestCli:
    def test_legality_presets(self):
        code, out = bench("legality", "--preset", "gaussj", "--skew", "1,0,1,1")
        assert code == 3 and "no-pivot" in out
        code, out = bench("legality", "--preset", "givens", "--skew", "1,0,1,1")
        assert code == 0 and out.strip().endswith("Legal")
        code, out = bench("legality", "--preset", "givens", "--skew", "identity")
        assert code == 4 and "(1,-1)" in out.splitlines()[-1]

    def test_legality_speculation(self):
        code, out = bench("legality", "--preset", "gaussj", "--speculate-below", "0.05")
        assert code == 0 and "speculated away" in out

    def test_legality_deps_file(self, tmp_path):
        good = tmp_path / "d.txt"
        good.write_text("1 0 always\n0 1 always\n")
        assert bench("legality", "--deps", str(good), "--skew", "identity")[0] == 0
        bad = tmp_path / "bad.txt"
        bad.write_text("1 0 sometimes maybe\n")
        assert bench("legality", "--deps", str(bad))[0] == 2
        assert bench("legality", "--deps", str(tmp_path / "none.txt"))[0] == 2

    def test_run_mtx_header(self, mtx2):
        code, out = bench("run", "--kernel", "gaussj", "--input", mtx2, "--reps", "1")
        assert code == 0 and out.splitlines()[0] == HEADER
        assert out.splitlines()[1].split(",")[6] == "exact"

    def test_missing_file(self, tmp_path, capsys):
        code, _ = bench("run", "--kernel", "gaussj", "--input", str(tmp_path / "x.mtx"))
        assert code == 2 and "not found" in capsys.readouterr().err

    def test_malformed_file(self, tmp_path):
        p = tmp_path / "bad.mtx"
        p.write_text("%%MatrixMarket matrix coordinate real general\n2 2 3\n1 1 2.0\n")
        assert bench("run", "--kernel", "gaussj", "--input", str(p))[0] == 2

    def test_singular_input(self, tmp_path):
        p = tmp_path / "sing.mtx"
        p.write_text("%%MatrixMarket matrix coordinate real general\n2 2 1\n2 2 1.0\n")
        assert bench("run", "--kernel", "gaussj", "--input", str(p), "--reps", "1")[0] == 2

    def test_threads_env_override(self, monkeypatch):
        monkeypatch.setenv("BENCH_THREADS", "2,3")
        code, out = bench("run", "--kernel", "argmax", "--size", "100", "--threads", "1", "--reps", "1")
        assert code == 0 and [r[2] for r in non_timing(out)[1:]] == ["2", "3", "2", "3"]
        monkeypatch.setenv("BENCH_THREADS", "two")
        assert bench("run", "--kernel", "argmax", "--size", "10")[0] == 2

    def test_csv_stable(self):
        argv = ("run", "--kernel", "gaussj", "--size", "60", "--threads", "1,2", "--reps", "1",
                "--gen", "zero-pivot", "--plant", "20")
        a, b = bench(*argv), bench(*argv)
        assert a[0] == b[0] == 0 and non_timing(a[1]) == non_timing(b[1])

    def test_markdown_output(self, tmp_path):
        a = gen_random_dense(5, Rng(0))
        p = tmp_path / "a.mtx"
        with open(p, "w") as fh:
            emit_matrix_market(a, fh)
        code, out = bench("run", "--kernel", "givens", "--input", str(p), "--format", "md", "--reps", "1")
        assert code == 0 and out.startswith("| kernel |")

    def test_smvp_from_mtx(self, tmp_path):
        p = tmp_path / "s.mtx"
        p.write_text("%%MatrixMarket matrix coordinate real symmetric\n3 3 4\n1 1 2\n2 1 1\n3 3 5\n3 2 -1\n")
        code, out = bench("run", "--kernel", "smvp", "--input", str(p), "--threads", "1,2", "--reps", "1")
        assert code == 0 and len(out.splitlines()) == 7

    def test_verification_failure_exit_code(self, monkeypatch):
        import synpar.bench.harness as h

        orig = h._Gaussj.verify
        monkeypatch.setattr(h._Gaussj, "verify", lambda self, out, ref: ("FAILED",) + tuple(orig(self, out, ref)[1:]))
        code, out = bench("run", "--kernel", "gaussj", "--size", "20", "--reps", "1")
        assert code == 1 and "FAILED" in out
